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

#ifndef WDISTILL_TESTS_TEST_UTIL_H
#define WDISTILL_TESTS_TEST_UTIL_H

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "wdistill/linalg.h"
#include "wdistill/protocol.h"
#include "wdistill/statevec.h"

namespace wdistill::testutil {

/// Random normalized W-class coefficients with magnitudes bounded away from zero
/// and uniformly random phases.
inline std::vector<Complex> random_coefficients(std::mt19937_64 &rng, std::size_t n, bool complex_phases = true) {
    std::uniform_real_distribution<double> mag(0.1, 1.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::vector<Complex> c(n);
    double s = 0;
    for (auto &x : c) {
        x = std::polar(mag(rng), complex_phases ? phase(rng) : 0.0);
        s += std::norm(x);
    }
    for (auto &x : c) {
        x /= std::sqrt(s);
    }
    return c;
}

inline WPrimeSpec random_spec(std::mt19937_64 &rng, std::size_t n, bool complex_phases = true) {
    return WPrimeSpec(random_coefficients(rng, n, complex_phases));
}

inline DenseMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> g;
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; i++) {
        for (std::size_t j = 0; j < cols; j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return m;
}

inline DenseMatrix random_hermitian(std::mt19937_64 &rng, std::size_t n) {
    DenseMatrix a = random_matrix(rng, n, n);
    DenseMatrix h(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
        }
    }
    return h;
}

inline StateVector random_state(std::mt19937_64 &rng, const SubsystemLayout &layout) {
    std::normal_distribution<double> g;
    std::vector<Complex> amps(layout.total_dim());
    double s = 0;
    for (auto &a : amps) {
        a = Complex(g(rng), g(rng));
        s += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(s);
    }
    return StateVector(layout, std::move(amps));
}

/// exp(-i H t) by a truncated Taylor series with scaling and squaring. Independent of
/// the eigendecomposition route.
inline DenseMatrix series_exponential(const DenseMatrix &h, double t) {
    const std::size_t n = h.rows();
    double norm = max_abs(h) * static_cast<double>(n) * std::abs(t);
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2;
        squarings++;
    }
    const double scale = t / std::ldexp(1.0, squarings);
    DenseMatrix x = Complex(0, -scale) * h;
    DenseMatrix sum = DenseMatrix::identity(n);
    DenseMatrix term = DenseMatrix::identity(n);
    for (int k = 1; k <= 30; k++) {
        term = Complex(1.0 / k, 0) * mat_mul(term, x);
        DenseMatrix next(n, n);
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = 0; j < n; j++) {
                next(i, j) = sum(i, j) + term(i, j);
            }
        }
        sum = next;
    }
    for (int s = 0; s < squarings; s++) {
        sum = mat_mul(sum, sum);
    }
    return sum;
}

inline double max_amp_diff(const StateVector &a, const StateVector &b) {
    double m = 0;
    auto x = a.amps();
    auto y = b.amps();
    for (std::size_t i = 0; i < x.size(); i++) {
        m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

}  // namespace wdistill::testutil

#endif
