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

#include "wdistill/montecarlo.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"
#include "wdistill/errors.h"

using namespace wdistill;

namespace {

WPrimeSpec paper_spec() {
    return WPrimeSpec({std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)});
}

TrialConfig config(std::uint64_t trials, std::uint64_t seed, unsigned threads = 0) {
    TrialConfig c;
    c.trials = trials;
    c.seed = seed;
    c.threads = threads;
    return c;
}

}  // namespace

TEST(montecarlo, uniform_spec_always_succeeds) {
    std::vector<Complex> c(4, 0.5);
    auto stats = run_trials(WPrimeSpec(c), config(5000, 3));
    EXPECT_EQ(stats.successes, 5000u);
    EXPECT_EQ(stats.empirical_p, 1);
    EXPECT_EQ(stats.z_score, 0);
    EXPECT_EQ(stats.outcome_histogram.size(), 1u);
    EXPECT_EQ(stats.outcome_histogram.at("000"), 5000u);
}

TEST(montecarlo, paper_spec_concordance) {
    const std::uint64_t m = 100000;
    auto stats = run_trials(paper_spec(), config(m, 42));
    EXPECT_NEAR(stats.empirical_p, 0.6, 4 * std::sqrt(0.6 * 0.4 / m));
    EXPECT_NEAR(stats.analytic_p, 0.6, 1e-15);
    std::uint64_t total = 0;
    for (const auto &[k, v] : stats.outcome_histogram) {
        total += v;
    }
    EXPECT_EQ(total, m);
    EXPECT_EQ(stats.outcome_histogram.count("11"), 0u);
    EXPECT_NEAR(stats.outcome_histogram.at("1") / double(m), 0.3, 5 * std::sqrt(0.3 * 0.7 / m));
    EXPECT_NEAR(stats.outcome_histogram.at("01") / double(m), 0.1, 5 * std::sqrt(0.1 * 0.9 / m));
}

TEST(montecarlo, deterministic_across_runs_and_thread_counts) {
    auto a = run_trials(paper_spec(), config(20000, 7, 1));
    auto b = run_trials(paper_spec(), config(20000, 7, 1));
    auto c = run_trials(paper_spec(), config(20000, 7, 3));
    auto d = run_trials(paper_spec(), config(20000, 7, 8));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_EQ(a, d);
    auto other = run_trials(paper_spec(), config(20000, 8, 1));
    EXPECT_NE(a.successes, other.successes);
}

TEST(montecarlo, single_trial) {
    auto stats = run_trials(paper_spec(), config(1, 0));
    EXPECT_TRUE(stats.empirical_p == 0 || stats.empirical_p == 1);
    EXPECT_TRUE(std::isfinite(stats.z_score));
}

TEST(montecarlo, cavity_scheme) {
    TrialConfig c = config(50000, 11);
    c.scheme = Scheme::cavity;
    EXPECT_THROW(run_trials(paper_spec(), c), ValidationError);
    JCParams p;
    p.omega = p.omega0 = 50;
    p.epsilon = 1;
    c.params = p;
    auto stats = run_trials(paper_spec(), c);
    EXPECT_NEAR(stats.empirical_p, 0.6, 4 * std::sqrt(0.24 / 50000));
}

TEST(montecarlo, histogram_matches_exact_branches) {
    std::mt19937_64 rng(1234);
    const std::uint64_t m = 40000;
    for (int rep = 0; rep < 5; rep++) {
        auto spec = testutil::random_spec(rng, 3 + rep % 3);
        auto exact = truncated_branch_probabilities(run_exact(spec).branches);
        auto stats = run_trials(spec, config(m, 100 + rep));
        for (const auto &[pattern, p] : exact) {
            auto it = stats.outcome_histogram.find(pattern);
            double freq = it == stats.outcome_histogram.end() ? 0 : it->second / double(m);
            double se = std::sqrt(std::max(p * (1 - p), 1e-12) / m);
            EXPECT_LE(std::abs(freq - p), 5 * se) << pattern;
        }
        for (const auto &[pattern, count] : stats.outcome_histogram) {
            EXPECT_TRUE(exact.count(pattern)) << pattern;
        }
    }
}

TEST(montecarlo, statistical_soundness_over_random_specs) {
    std::mt19937_64 rng(555);
    int alarms = 0;
    for (int rep = 0; rep < 20; rep++) {
        auto spec = testutil::random_spec(rng, 2 + rep % 5);
        auto stats = run_trials(spec, config(100000, 1000 + rep));
        alarms += std::abs(stats.z_score) > 4;
    }
    EXPECT_LE(alarms, 1);
}

TEST(montecarlo, early_stop_matches_full_readout) {
    // Reading every ancilla with sample_site classifies a trial exactly as the
    // early-stopping sampler does on the same draw prefix.
    auto sys = evolve_abstract(paper_spec());
    for (std::uint64_t i = 0; i < 2000; i++) {
        RandomStream full_rng(trial_stream_seed(9, i));
        StateVector state = sys.state;
        bool full_success = true;
        std::size_t first_failure = sys.measured_sites.size();
        for (std::size_t d = 0; d < sys.measured_sites.size(); d++) {
            Sample s = sample_site(state, sys.measured_sites[d], full_rng);
            if (s.outcome != 0 && full_success) {
                full_success = false;
                first_failure = d;
            }
            state = std::move(s.collapsed);
        }
        RandomStream early_rng(trial_stream_seed(9, i));
        StateVector early = sys.state;
        bool early_success = true;
        std::size_t early_failure = sys.measured_sites.size();
        for (std::size_t d = 0; d < sys.measured_sites.size(); d++) {
            Sample s = sample_site(early, sys.measured_sites[d], early_rng);
            if (s.outcome != 0) {
                early_success = false;
                early_failure = d;
                break;
            }
            early = std::move(s.collapsed);
        }
        EXPECT_EQ(full_success, early_success);
        EXPECT_EQ(first_failure, early_failure);
    }
}

TEST(montecarlo, sampler_agrees_with_state_sampling) {
    // The cached conditional probabilities reproduce sample_site draw for draw.
    auto sys = evolve_abstract(paper_spec());
    const std::uint64_t m = 3000;
    std::uint64_t successes = 0;
    for (std::uint64_t i = 0; i < m; i++) {
        RandomStream rng(trial_stream_seed(21, i));
        StateVector state = sys.state;
        bool ok = true;
        for (std::size_t site : sys.measured_sites) {
            Sample s = sample_site(state, site, rng);
            if (s.outcome != 0) {
                ok = false;
                break;
            }
            state = std::move(s.collapsed);
        }
        successes += ok;
    }
    EXPECT_EQ(run_trials(paper_spec(), config(m, 21)).successes, successes);
}

TEST(montecarlo, wilson_interval) {
    TrialStats s;
    s.trials = 10000;
    s.successes = 6000;
    auto [lo, hi] = confidence_interval(s, 1.96);
    EXPECT_NEAR(lo, 0.5903613659779724, 1e-12);
    EXPECT_NEAR(hi, 0.6095618315264743, 1e-12);
    EXPECT_NEAR(lo, 0.5904, 1e-4);
    EXPECT_NEAR(hi, 0.6095, 1e-4);

    s.successes = s.trials;
    EXPECT_EQ(confidence_interval(s, 1.96).second, 1);
    s.successes = 0;
    EXPECT_EQ(confidence_interval(s, 1.96).first, 0);

    for (std::uint64_t k = 0; k <= 20; k++) {
        s.trials = 20;
        s.successes = k;
        auto [l, h] = confidence_interval(s, 2.5);
        double p = k / 20.0;
        EXPECT_LE(0, l);
        EXPECT_LE(l, p);
        EXPECT_LE(p, h);
        EXPECT_LE(h, 1);
    }
}

TEST(montecarlo, pattern_labels) {
    EXPECT_EQ(pattern_label({0, 1}), "01");
    EXPECT_EQ(pattern_label({0, 12}), "0,12");
    EXPECT_EQ(parse_scheme("cavity"), Scheme::cavity);
    EXPECT_THROW(parse_scheme("optical"), ValidationError);
}
