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

#include "wdistill/protocol.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"
#include "wdistill/errors.h"

using namespace wdistill;

namespace {

const double kPi = std::numbers::pi;

WPrimeSpec paper_spec() {
    return WPrimeSpec({std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)});
}

double branch_probability(const DistillationReport &r, std::vector<std::size_t> pattern) {
    for (const auto &b : r.branches) {
        if (b.pattern == pattern) {
            return b.probability;
        }
    }
    ADD_FAILURE() << "missing branch";
    return -1;
}

bool all_zero(const std::vector<std::size_t> &p) {
    return std::all_of(p.begin(), p.end(), [](std::size_t o) { return o == 0; });
}

}  // namespace

TEST(protocol, spec_validation) {
    EXPECT_THROW(WPrimeSpec({1.0}), ValidationError);
    EXPECT_THROW(WPrimeSpec({0.5, 0.5}), ValidationError);
    EXPECT_NO_THROW(WPrimeSpec({0.6, Complex(0, 0.8)}));
    double factor = 0;
    auto s = WPrimeSpec::renormalized({3.0, 4.0}, &factor);
    EXPECT_DOUBLE_EQ(factor, 0.2);
    EXPECT_DOUBLE_EQ(s.coeff(1).real(), 0.8);
    EXPECT_THROW(WPrimeSpec::renormalized({0.0, 0.0}), DegenerateCoefficientError);
}

TEST(protocol, make_w_state_examples) {
    auto w3 = make_w_state(3);
    const double r3 = 1 / std::sqrt(3.0);
    for (std::size_t f = 0; f < 8; f++) {
        double expected = (f == 4 || f == 2 || f == 1) ? r3 : 0;
        EXPECT_NEAR(std::abs(w3.amp(f) - expected), 0, 1e-15) << f;
    }
    auto w2 = make_w_state(2);
    EXPECT_NEAR(w2.amp(2).real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(w2.amp(1).real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(fidelity(make_w_state(4), make_w_state(4)), 1, 1e-15);
    EXPECT_THROW(make_w_state(1), ValidationError);
}

TEST(protocol, step_unitary_paper_spec) {
    auto step = build_step_unitary(paper_spec(), 0);
    EXPECT_NEAR(step.z.real(), 0.6324555320336759, 1e-12);
    EXPECT_NEAR(step.z.imag(), 0, 1e-15);
    EXPECT_NEAR(std::abs(step.unitary(2, 1)), 0.7745966692414834, 1e-12);
    EXPECT_NEAR(std::abs(step.unitary(1, 2)), 0.7745966692414834, 1e-12);
    EXPECT_EQ(step.unitary(1, 1), step.z);
    EXPECT_TRUE(is_unitary(step.unitary, 1e-12));
}

TEST(protocol, step_unitary_reproduces_three_particle_matrices) {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 50; rep++) {
        auto c = testutil::random_coefficients(rng, 3);
        std::sort(c.begin(), c.end(), [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
        WPrimeSpec spec(c);
        const Complex a = c[0], b = c[1];
        const double cm = std::abs(c[2]);
        for (auto [k, x] : {std::pair<std::size_t, Complex>{0, a}, {1, b}}) {
            double off = std::sqrt(1 - cm * cm / std::norm(x));
            DenseMatrix expected{
                {1, 0, 0, 0}, {0, cm / x, -off, 0}, {0, off, cm / std::conj(x), 0}, {0, 0, 0, 1}};
            EXPECT_LE(max_abs_diff(build_step_unitary(spec, k).unitary, expected), 1e-12);
        }
    }
}

TEST(protocol, step_unitary_uniform_is_identity) {
    WPrimeSpec spec({0.5, 0.5, 0.5, 0.5});
    auto step = build_step_unitary(spec, 2);
    EXPECT_EQ(step.z, Complex(1));
    EXPECT_LE(max_abs_diff(step.unitary, DenseMatrix::identity(4)), 0.0);
}

TEST(protocol, step_unitary_complex_coefficient) {
    // c_k = 0.5 e^{i pi/3}, min = 0.25.
    const Complex ck = std::polar(0.5, kPi / 3);
    const double rest = std::sqrt((1 - 0.25 - 0.0625) / 2);
    WPrimeSpec spec({ck, 0.25, rest, rest});
    auto step = build_step_unitary(spec, 0);
    Complex expected = std::polar(0.5, -kPi / 3);
    EXPECT_NEAR(std::abs(step.z - expected), 0, 1e-15);
    EXPECT_TRUE(is_unitary(step.unitary, 1e-12));
}

TEST(protocol, step_unitary_errors) {
    EXPECT_THROW(build_step_unitary(paper_spec(), 2), MisuseError);
    WPrimeSpec zero({1.0, 0.0});
    EXPECT_THROW(build_step_unitary(zero, 1), DegenerateCoefficientError);
}

TEST(protocol, plan_examples) {
    auto p = plan(paper_spec());
    EXPECT_EQ(p.min_index, 2u);
    ASSERT_EQ(p.steps.size(), 2u);
    EXPECT_EQ(p.steps[0].k, 0u);
    EXPECT_EQ(p.steps[1].k, 1u);

    auto uniform = plan(WPrimeSpec({0.5, 0.5, 0.5, 0.5}));
    EXPECT_EQ(uniform.min_index, 0u);
    ASSERT_EQ(uniform.steps.size(), 3u);
    for (const auto &s : uniform.steps) {
        EXPECT_LE(max_abs_diff(s.unitary, DenseMatrix::identity(4)), 0.0);
    }

    const double r = std::sqrt((1 - 2 * 0.36) / 2);
    auto tied = plan(WPrimeSpec({r, std::polar(0.6, 1.1), 0.6, Complex(0, r)}));
    EXPECT_EQ(tied.min_index, 0u);
    auto tied2 = plan(WPrimeSpec({0.6, std::polar(r, 2.0), std::polar(0.6, -0.4), std::polar(r, 0.3)}));
    EXPECT_EQ(tied2.min_index, 1u);

    EXPECT_THROW(plan(WPrimeSpec({1.0, 0.0})), DegenerateCoefficientError);
}

TEST(protocol, analytic_success_probability_examples) {
    EXPECT_NEAR(analytic_success_probability(paper_spec()), 0.6, 1e-15);
    for (std::size_t n = 2; n <= 8; n++) {
        std::vector<Complex> c(n, 1 / std::sqrt(static_cast<double>(n)));
        EXPECT_NEAR(analytic_success_probability(WPrimeSpec(c)), 1, 1e-15);
    }
    WPrimeSpec four({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)});
    EXPECT_NEAR(analytic_success_probability(four), 0.4, 1e-15);
    EXPECT_NEAR(run_exact(four).success_probability_exact, 0.4, 1e-12);
}

TEST(protocol, run_exact_paper_spec) {
    auto r = run_exact(paper_spec());
    EXPECT_NEAR(r.success_probability_exact, 0.6, 1e-12);
    EXPECT_NEAR(r.success_probability_analytic, 0.6, 1e-15);
    EXPECT_NEAR(r.fidelity_with_w, 1, 1e-12);
    EXPECT_EQ(r.min_index, 2u);
    ASSERT_EQ(r.branches.size(), 4u);
    EXPECT_NEAR(branch_probability(r, {1, 0}), 0.3, 1e-12);
    EXPECT_NEAR(branch_probability(r, {0, 1}), 0.1, 1e-12);
    EXPECT_EQ(branch_probability(r, {1, 1}), 0);
    double total = 0;
    for (const auto &b : r.branches) {
        total += b.probability;
    }
    EXPECT_NEAR(total, 1, 1e-12);
}

TEST(protocol, run_exact_uniform_and_two_particle) {
    std::vector<Complex> c(5, 1 / std::sqrt(5.0));
    auto r = run_exact(WPrimeSpec(c));
    EXPECT_NEAR(r.success_probability_exact, 1, 1e-12);
    for (const auto &s : r.steps) {
        EXPECT_LE(max_abs_diff(s.unitary, DenseMatrix::identity(4)), 0.0);
    }
    auto two = run_exact(WPrimeSpec({0.8, 0.6}));
    EXPECT_NEAR(two.success_probability_exact, 0.72, 1e-12);
    EXPECT_NEAR(two.success_probability_analytic, 0.72, 1e-15);
}

TEST(protocol, phase_correction_examples) {
    // Already real and equal: identity.
    auto w = make_w_state(3);
    PhaseLedger none{{0, 0, 0}};
    EXPECT_LE(testutil::max_amp_diff(phase_correction(w, 2, 0.3, none), w), 1e-15);

    // Site-j phase e^{i pi/4} is removed.
    std::vector<Complex> amps(w.amps().begin(), w.amps().end());
    amps[1] *= std::polar(1.0, kPi / 4);
    StateVector twisted(w.layout(), amps);
    auto fixed = phase_correction(twisted, 2, std::polar(0.3, kPi / 4), none);
    EXPECT_LE(testutil::max_amp_diff(fixed, w), 1e-15);

    // Ledger residuals on other sites are cancelled too.
    amps[4] *= std::polar(1.0, 0.7);
    StateVector twisted2(w.layout(), amps);
    PhaseLedger ledger{{0.7, 0, 0}};
    auto fixed2 = phase_correction(twisted2, 2, std::polar(0.3, kPi / 4), ledger);
    EXPECT_LE(testutil::max_amp_diff(fixed2, w), 1e-15);
}

TEST(protocol, phase_correction_rejects_other_sectors) {
    SubsystemLayout layout({2, 2, 2});
    std::vector<Complex> amps(8);
    amps[0] = std::sqrt(0.5);
    amps[4] = std::sqrt(0.5);
    EXPECT_THROW(phase_correction(StateVector(layout, amps), 0, 1.0, PhaseLedger{{0, 0, 0}}), ContractError);
}

TEST(protocol, run_exact_complex_phases_end_to_end) {
    WPrimeSpec spec({std::polar(std::sqrt(0.5), kPi / 7), std::sqrt(0.3), std::polar(std::sqrt(0.2), -kPi / 5)});
    auto r = run_exact(spec);
    EXPECT_NEAR(r.success_probability_exact, 0.6, 1e-12);
    EXPECT_NEAR(r.fidelity_with_w, 1, 1e-12);
    auto amps = r.final_state.amps();
    for (std::size_t f : {1u, 2u, 4u}) {
        EXPECT_NEAR(amps[f].real(), 1 / std::sqrt(3.0), 1e-12);
        EXPECT_NEAR(amps[f].imag(), 0, 1e-12);
    }
}

TEST(protocol, exact_matches_analytic_property) {
    std::mt19937_64 rng(2718);
    for (int rep = 0; rep < 140; rep++) {
        std::size_t n = 2 + rep % 7;
        auto spec = testutil::random_spec(rng, n);
        auto r = run_exact(spec);
        EXPECT_NEAR(r.success_probability_exact, analytic_success_probability(spec), 1e-10) << "n=" << n;
        EXPECT_NEAR(r.fidelity_with_w, 1, 1e-12) << "n=" << n;
        EXPECT_LE(r.success_probability_exact, 1 + 1e-12);
        double total = 0;
        for (const auto &b : r.branches) {
            total += b.probability;
        }
        EXPECT_NEAR(total, 1, 1e-10);
        EXPECT_EQ(r.branches.size(), std::size_t{1} << (n - 1));
        for (const auto &s : r.steps) {
            EXPECT_TRUE(is_unitary(s.unitary, 1e-12));
            EXPECT_LE(std::abs(s.z), 1 + 1e-12);
        }
    }
}

TEST(protocol, failure_branches_collapse_to_all_ground) {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 30; rep++) {
        std::size_t n = 2 + rep % 6;
        auto r = run_exact(testutil::random_spec(rng, n));
        const std::vector<std::size_t> zeros(n, 0);
        for (const auto &b : r.branches) {
            if (all_zero(b.pattern) || b.probability == 0) {
                continue;
            }
            ASSERT_TRUE(b.particles.has_value());
            auto ground = basis_state(b.particles->layout(), zeros);
            EXPECT_NEAR(fidelity(ground, *b.particles), 1, 1e-12);
        }
    }
}

TEST(protocol, step_order_invariance) {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 20; rep++) {
        std::size_t n = 3 + rep % 4;
        auto spec = testutil::random_spec(rng, n);
        auto base = run_exact(spec);
        std::vector<std::size_t> order(n - 1);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        auto permuted = run_exact(spec, order);
        EXPECT_NEAR(permuted.success_probability_exact, base.success_probability_exact, 1e-12);
        EXPECT_LE(testutil::max_amp_diff(permuted.final_state, base.final_state), 1e-12);
    }
    const std::size_t bad[] = {0, 0};
    EXPECT_THROW(run_exact(paper_spec(), bad), ValidationError);
}

TEST(protocol, success_is_certain_only_for_equal_magnitudes) {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 30; rep++) {
        std::size_t n = 2 + rep % 5;
        std::vector<Complex> c(n);
        std::uniform_real_distribution<double> phase(-kPi, kPi);
        for (auto &x : c) {
            x = std::polar(1 / std::sqrt(static_cast<double>(n)), phase(rng));
        }
        EXPECT_NEAR(run_exact(WPrimeSpec(c)).success_probability_exact, 1, 1e-12);
        auto skewed = testutil::random_spec(rng, n);
        EXPECT_LT(run_exact(skewed).success_probability_exact, 1 - 1e-6);
    }
}
