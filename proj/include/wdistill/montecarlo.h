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

#ifndef WDISTILL_MONTECARLO_H
#define WDISTILL_MONTECARLO_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wdistill/cavity.h"
#include "wdistill/protocol.h"

namespace wdistill {

enum class Scheme { abstract, cavity };

const char *scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string &name);

struct TrialConfig {
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::abstract;
    std::optional<JCParams> params;  // required for Scheme::cavity
    unsigned threads = 0;            // 0 picks std::thread::hardware_concurrency()
};

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_p = 0;
    double analytic_p = 0;
    double std_error = 0;
    double z_score = 0;
    // Truncated outcome pattern -> count. A failing trial stops at its first
    // non-zero outcome, so "01" means: first readout 0, second readout 1.
    std::map<std::string, std::uint64_t> outcome_histogram;
    std::uint64_t seed = 0;

    bool operator==(const TrialStats &) const = default;
};

/// Label for an outcome pattern: digits concatenated, comma separated once any outcome exceeds 9.
std::string pattern_label(const std::vector<std::size_t> &pattern);

/// Seed of trial `index`'s private stream: SplitMix64 finalizer applied to
/// seed + (index + 1) * golden-ratio increment, i.e. the index-th output of a
/// SplitMix64 generator started at `seed`. The stream itself is std::mt19937_64.
std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t index);

/// Exact probability of each truncated pattern, folded from full branch records.
std::map<std::string, double> truncated_branch_probabilities(const std::vector<BranchRecord> &branches);

TrialStats run_trials(const WPrimeSpec &spec, const TrialConfig &config);

/// Wilson score interval, clamped to [0, 1] and widened to contain empirical_p.
std::pair<double, double> confidence_interval(const TrialStats &stats, double z);

}  // namespace wdistill

#endif
