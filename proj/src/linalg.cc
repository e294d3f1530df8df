// Copyright 2026 The wdistill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wdistill/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wdistill/errors.h"

namespace wdistill {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
    if (entries_.size() != rows * cols) {
        throw ShapeError(
            "matrix entry count " + std::to_string(entries_.size()) + " != " + std::to_string(rows) + "x" +
            std::to_string(cols));
    }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
    entries_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw ShapeError("ragged matrix literal");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); i++) {
        m(i, i) = diag[i];
    }
    return m;
}

DenseMatrix mat_mul(const DenseMatrix &a, const DenseMatrix &b) {
    if (a.cols() != b.rows()) {
        throw ShapeError(
            "mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); j++) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

DenseMatrix adjoint(const DenseMatrix &a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

DenseMatrix operator-(const DenseMatrix &a, const DenseMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("matrix difference of mismatched shapes");
    }
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(i, j) = a(i, j) - b(i, j);
        }
    }
    return out;
}

DenseMatrix operator*(Complex s, const DenseMatrix &a) {
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            out(i, j) = s * a(i, j);
        }
    }
    return out;
}

double max_abs(const DenseMatrix &a) {
    double m = 0;
    for (const auto &z : a.entries()) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double max_abs_diff(const DenseMatrix &a, const DenseMatrix &b) {
    return max_abs(a - b);
}

bool is_unitary(const DenseMatrix &a, double tol) {
    if (!a.is_square()) {
        throw ShapeError("is_unitary: matrix is not square");
    }
    return max_abs_diff(mat_mul(adjoint(a), a), DenseMatrix::identity(a.rows())) <= tol;
}

bool is_hermitian(const DenseMatrix &a, double tol) {
    if (!a.is_square()) {
        return false;
    }
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = i; j < a.cols(); j++) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

namespace {

double off_diagonal_norm_sq(const DenseMatrix &a) {
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return s;
}

}  // namespace

Eigensystem eigh_hermitian(const DenseMatrix &h) {
    if (!h.is_square()) {
        throw ShapeError("eigh_hermitian: matrix is not square");
    }
    if (!is_hermitian(h, kIterativeTol)) {
        throw ValidationError("eigh_hermitian: matrix is not Hermitian within 1e-10");
    }
    const std::size_t n = h.rows();
    DenseMatrix a = h;
    DenseMatrix v = DenseMatrix::identity(n);

    double scale_sq = 0;
    for (const auto &z : h.entries()) {
        scale_sq += std::norm(z);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double stop = eps * eps * std::max(scale_sq, std::numeric_limits<double>::min());

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm_sq(a) > stop; sweep++) {
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double mag = std::abs(a(p, q));
                if (mag == 0) {
                    continue;
                }
                // G = diag(1, e^{-i alpha}) * [[c, s], [-s, c]] in the (p, q) plane.
                Complex phase = a(p, q) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2 * mag);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                Complex gpp = c;
                Complex gpq = s;
                Complex gqp = -s * std::conj(phase);
                Complex gqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; k++) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; k++) {
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    if (off_diagonal_norm_sq(a) > stop * 1e6) {
        throw NumericalError("eigh_hermitian: Jacobi sweeps did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    Eigensystem out{std::vector<double>(n), DenseMatrix(n, n)};
    for (std::size_t col = 0; col < n; col++) {
        out.eigenvalues[col] = a(order[col], order[col]).real();
        for (std::size_t row = 0; row < n; row++) {
            out.eigenvectors(row, col) = v(row, order[col]);
        }
    }
    return out;
}

DenseMatrix propagator(const DenseMatrix &h, double t) {
    Eigensystem es = eigh_hermitian(h);
    const std::size_t n = h.rows();
    DenseMatrix out(n, n);
    const DenseMatrix &v = es.eigenvectors;
    for (std::size_t k = 0; k < n; k++) {
        Complex phase = std::polar(1.0, -es.eigenvalues[k] * t);
        for (std::size_t i = 0; i < n; i++) {
            Complex vik = v(i, k) * phase;
            if (vik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; j++) {
                out(i, j) += vik * std::conj(v(j, k));
            }
        }
    }
    return out;
}

}  // namespace wdistill
