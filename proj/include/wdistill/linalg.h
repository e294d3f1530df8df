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

#ifndef WDISTILL_LINALG_H
#define WDISTILL_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wdistill {

using Complex = std::complex<double>;

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kIterativeTol = 1e-10;

/// Row-major dense complex matrix.
class DenseMatrix {
   public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    /// Row-by-row literal, e.g. `DenseMatrix{{1, 0}, {0, 1}}`.
    DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix zeros(std::size_t rows, std::size_t cols);
    static DenseMatrix diagonal(std::span<const Complex> diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const Complex> entries() const { return entries_; }

    bool operator==(const DenseMatrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

struct Eigensystem {
    std::vector<double> eigenvalues;  // ascending
    DenseMatrix eigenvectors;         // orthonormal columns, same order as eigenvalues
};

DenseMatrix mat_mul(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix adjoint(const DenseMatrix &a);
DenseMatrix operator-(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix operator*(Complex s, const DenseMatrix &a);

/// Largest entry magnitude.
double max_abs(const DenseMatrix &a);
double max_abs_diff(const DenseMatrix &a, const DenseMatrix &b);

/// True iff max |(A^dagger A - I)_ij| <= tol. Throws ShapeError for non-square input.
bool is_unitary(const DenseMatrix &a, double tol = kAlgebraicTol);
bool is_hermitian(const DenseMatrix &a, double tol = kIterativeTol);

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot element (p, q) with a
/// diagonal unitary, then zeroes it with a real Givens rotation. Sweeps stop
/// when the off-diagonal Frobenius mass falls below machine precision relative
/// to the matrix scale. Throws ValidationError if `h` is not Hermitian within 1e-10.
Eigensystem eigh_hermitian(const DenseMatrix &h);

/// exp(-i H t) for Hermitian H (hbar = 1), assembled from the eigendecomposition.
DenseMatrix propagator(const DenseMatrix &h, double t);

}  // namespace wdistill

#endif
