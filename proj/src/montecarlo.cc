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

#include <algorithm>
#include <cmath>
#include <thread>

#include "wdistill/errors.h"

namespace wdistill {

namespace {

// Conditional readout probabilities along the all-zero path. Entry d holds the
// outcome distribution of readout d given that readouts 0..d-1 all gave 0.
std::vector<std::vector<double>> zero_path_probabilities(const EvolvedSystem &sys) {
    std::vector<std::vector<double>> chain;
    StateVector current = sys.state;
    for (std::size_t site : sys.measured_sites) {
        auto probs = outcome_probabilities(current, site);
        chain.push_back(probs);
        Projection proj = project_site(current, site, 0);
        if (proj.probability == 0) {
            break;
        }
        current = std::move(proj.collapsed);
    }
    return chain;
}

struct Tally {
    std::uint64_t successes = 0;
    std::vector<std::vector<std::uint64_t>> failures;  // [depth][outcome]
};

}  // namespace

const char *scheme_name(Scheme scheme) {
    return scheme == Scheme::abstract ? "abstract" : "cavity";
}

Scheme parse_scheme(const std::string &name) {
    if (name == "abstract") {
        return Scheme::abstract;
    }
    if (name == "cavity") {
        return Scheme::cavity;
    }
    throw ValidationError("unknown scheme '" + name + "' (expected abstract or cavity)");
}

std::string pattern_label(const std::vector<std::size_t> &pattern) {
    bool wide = std::any_of(pattern.begin(), pattern.end(), [](std::size_t o) { return o > 9; });
    std::string s;
    for (std::size_t i = 0; i < pattern.size(); i++) {
        if (wide && i > 0) {
            s += ',';
        }
        s += std::to_string(pattern[i]);
    }
    return s;
}

std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::map<std::string, double> truncated_branch_probabilities(const std::vector<BranchRecord> &branches) {
    std::map<std::string, double> out;
    for (const auto &b : branches) {
        std::vector<std::size_t> prefix;
        for (std::size_t o : b.pattern) {
            prefix.push_back(o);
            if (o != 0) {
                break;
            }
        }
        out[pattern_label(prefix)] += b.probability;
    }
    return out;
}

TrialStats run_trials(const WPrimeSpec &spec, const TrialConfig &config) {
    if (config.trials < 1) {
        throw ValidationError("trials must be at least 1");
    }
    EvolvedSystem sys;
    if (config.scheme == Scheme::cavity) {
        if (!config.params) {
            throw ValidationError("cavity scheme requires JC parameters");
        }
        sys = evolve_cavity(spec, *config.params);
    } else {
        sys = evolve_abstract(spec);
    }
    const auto chain = zero_path_probabilities(sys);
    const std::size_t readouts = sys.measured_sites.size();

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.trials));

    std::vector<Tally> tallies(threads);
    auto worker = [&](unsigned t) {
        Tally &tally = tallies[t];
        tally.failures.resize(chain.size());
        for (std::size_t d = 0; d < chain.size(); d++) {
            tally.failures[d].assign(chain[d].size(), 0);
        }
        const std::uint64_t begin = config.trials * t / threads;
        const std::uint64_t end = config.trials * (t + 1) / threads;
        for (std::uint64_t i = begin; i < end; i++) {
            RandomStream rng(trial_stream_seed(config.seed, i));
            bool failed = false;
            for (std::size_t d = 0; d < chain.size(); d++) {
                std::size_t outcome = pick_outcome(chain[d], rng.uniform());
                if (outcome != 0) {
                    tally.failures[d][outcome]++;
                    failed = true;
                    break;
                }
            }
            if (!failed) {
                tally.successes++;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back(worker, t);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    TrialStats stats;
    stats.trials = config.trials;
    stats.seed = config.seed;
    for (const auto &tally : tallies) {
        stats.successes += tally.successes;
        for (std::size_t d = 0; d < tally.failures.size(); d++) {
            for (std::size_t o = 1; o < tally.failures[d].size(); o++) {
                if (tally.failures[d][o] == 0) {
                    continue;
                }
                std::vector<std::size_t> pattern(d, 0);
                pattern.push_back(o);
                stats.outcome_histogram[pattern_label(pattern)] += tally.failures[d][o];
            }
        }
    }
    if (stats.successes > 0) {
        stats.outcome_histogram[pattern_label(std::vector<std::size_t>(readouts, 0))] = stats.successes;
    }

    const double m = static_cast<double>(stats.trials);
    stats.empirical_p = static_cast<double>(stats.successes) / m;
    stats.analytic_p = analytic_success_probability(spec);
    stats.std_error = std::sqrt(stats.empirical_p * (1 - stats.empirical_p) / m);
    const double diff = stats.empirical_p - stats.analytic_p;
    if (diff == 0) {
        stats.z_score = 0;
    } else {
        // At p-hat in {0, 1} the sample error vanishes; fall back to the
        // analytic binomial error, then to a one-count resolution.
        double sigma = stats.std_error;
        if (sigma == 0) {
            sigma = std::sqrt(stats.analytic_p * (1 - stats.analytic_p) / m);
        }
        if (sigma == 0) {
            sigma = 1 / m;
        }
        stats.z_score = diff / sigma;
    }
    return stats;
}

std::pair<double, double> confidence_interval(const TrialStats &stats, double z) {
    if (stats.trials < 1) {
        throw ValidationError("confidence_interval needs at least one trial");
    }
    const double m = static_cast<double>(stats.trials);
    const double p = static_cast<double>(stats.successes) / m;
    const double z2 = z * z;
    const double denom = 1 + z2 / m;
    const double center = (p + z2 / (2 * m)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / m + z2 / (4 * m * m));
    double lo = std::clamp(center - half, 0.0, 1.0);
    double hi = std::clamp(center + half, 0.0, 1.0);
    if (stats.successes == 0) {
        lo = 0;
    }
    if (stats.successes == stats.trials) {
        hi = 1;
    }
    return {std::min(lo, p), std::max(hi, p)};
}

}  // namespace wdistill
