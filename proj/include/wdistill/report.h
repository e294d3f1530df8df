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

#ifndef WDISTILL_REPORT_H
#define WDISTILL_REPORT_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wdistill/cavity.h"
#include "wdistill/linalg.h"
#include "wdistill/montecarlo.h"
#include "wdistill/protocol.h"

namespace wdistill {

inline constexpr const char *kToolVersion = "0.1.0";

/// Sum-of-squares tolerance applied to spec files before exact renormalization.
inline constexpr double kSpecFileNormTol = 1e-6;

struct SpecFile {
    std::vector<Complex> coefficients;
    bool normalize = false;
};

/// Parses `{"coefficients": [[re, im], ...], "normalize": bool}`. Throws ValidationError.
SpecFile parse_spec_file(const std::string &text);

struct LoadedSpec {
    WPrimeSpec spec;
    double normalization_factor = 1;
};

/// Applies the file-level normalization check (skipped when renormalization is
/// requested), rescales to exact unit norm and rejects zero coefficients.
LoadedSpec load_spec(const SpecFile &file, bool allow_unnormalized = false);

struct ReportBranch {
    std::string pattern;
    double probability = 0;
    std::string terminal;
    bool operator==(const ReportBranch &) const = default;
};

struct ReportStep {
    std::size_t user = 0;  // 1-based
    std::optional<double> delta_t;
    std::optional<Complex> z;
    bool operator==(const ReportStep &) const = default;
};

struct ReportInterval {
    double lo = 0;
    double hi = 1;
    double z = 1.96;
    bool operator==(const ReportInterval &) const = default;
};

struct ReportJC {
    double omega = 0;
    double omega0 = 0;
    double epsilon = 0;
    std::size_t fock_cutoff = 1;
    bool operator==(const ReportJC &) const = default;
};

/// Machine-readable result of one CLI run. User indices are 1-based.
struct Report {
    std::string command;
    std::string scheme;
    std::size_t n = 0;
    std::size_t min_index = 0;
    double normalization_factor = 1;
    double success_probability_analytic = 0;
    std::optional<double> success_probability_exact;
    std::optional<double> fidelity_with_w;
    std::vector<ReportBranch> branches;
    std::vector<ReportStep> steps;
    std::optional<ReportJC> jc_params;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> successes;
    std::optional<double> empirical_p;
    std::optional<double> std_error;
    std::optional<double> z_score;
    std::optional<ReportInterval> interval;
    std::map<std::string, std::uint64_t> histogram;
    std::string tool_version = kToolVersion;

    bool operator==(const Report &) const = default;
};

/// Report for an exact run; `params` is required for the cavity scheme.
Report make_report(const DistillationReport &result, Scheme scheme, double normalization_factor,
                   const JCParams *params = nullptr);
Report make_report(const TrialStats &stats, const WPrimeSpec &spec, const TrialConfig &config, double z,
                   double normalization_factor);

/// UTF-8 JSON with sorted keys, 17 significant digits per float and a trailing newline.
std::string serialize_report(const Report &report);
/// Inverse of serialize_report. Throws ValidationError on malformed input or
/// probabilities outside [0, 1].
Report parse_report(const std::string &text);

/// "%.17g" formatting used for every float in reports and CSV output.
std::string format_real(double value);

}  // namespace wdistill

#endif
