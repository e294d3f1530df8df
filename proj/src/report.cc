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

#include "wdistill/report.h"

#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "wdistill/errors.h"

namespace wdistill {

using nlohmann::json;

namespace {

void write_json(const json &j, std::string &out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += inner + json(it.key()).dump() + ": ";
                write_json(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); i++) {
                if (i > 0) {
                    out += ",\n";
                }
                out += inner;
                write_json(j[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_real(j.get<double>());
            return;
        default:
            out += j.dump(-1, ' ', false, json::error_handler_t::strict);
            return;
    }
}

double require_probability(const json &j, const char *key) {
    // Round-off may put a probability or fidelity a few ulps outside [0, 1].
    double p = j.at(key).get<double>();
    if (!(p >= -kAlgebraicTol && p <= 1 + kAlgebraicTol)) {
        throw ValidationError(std::string("report field ") + key + " is not a probability");
    }
    return p;
}

json complex_pair(Complex z) {
    return json::array({z.real(), z.imag()});
}

}  // namespace

std::string format_real(double value) {
    if (!std::isfinite(value)) {
        throw NumericalError("non-finite value in report");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    std::string s = buf;
    // Keep floats recognizable as floats after a round trip.
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

SpecFile parse_spec_file(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("spec file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("coefficients") || !j["coefficients"].is_array()) {
        throw ValidationError("spec file needs a 'coefficients' array");
    }
    SpecFile file;
    for (const auto &pair : j["coefficients"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw ValidationError("each coefficient must be a [re, im] pair of numbers");
        }
        file.coefficients.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    if (file.coefficients.size() < 2) {
        throw ValidationError("spec file needs at least 2 coefficients");
    }
    if (j.contains("normalize")) {
        if (!j["normalize"].is_boolean()) {
            throw ValidationError("'normalize' must be a boolean");
        }
        file.normalize = j["normalize"].get<bool>();
    }
    return file;
}

LoadedSpec load_spec(const SpecFile &file, bool allow_unnormalized) {
    if (file.coefficients.size() < 2) {
        throw ValidationError("a W-class state needs at least 2 coefficients");
    }
    double s = 0;
    for (const auto &c : file.coefficients) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("coefficients must be finite");
        }
        s += std::norm(c);
    }
    if (!file.normalize && !allow_unnormalized && std::abs(s - 1) > kSpecFileNormTol) {
        throw ValidationError("coefficients are not normalized: sum |c_k|^2 = " + std::to_string(s));
    }
    double factor = 1;
    WPrimeSpec spec = WPrimeSpec::renormalized(file.coefficients, &factor);
    require_nonzero_coefficients(spec);
    return {std::move(spec), factor};
}

Report make_report(const DistillationReport &result, Scheme scheme, double normalization_factor,
                   const JCParams *params) {
    Report r;
    r.command = scheme == Scheme::abstract ? "distill" : "cavity";
    r.scheme = scheme_name(scheme);
    if (scheme == Scheme::cavity) {
        if (!params) {
            throw ValidationError("cavity report needs JC parameters");
        }
        r.jc_params = ReportJC{params->omega, params->omega0, params->epsilon, params->fock_cutoff};
    }
    r.n = result.n;
    r.min_index = result.min_index + 1;
    r.normalization_factor = normalization_factor;
    r.success_probability_analytic = result.success_probability_analytic;
    r.success_probability_exact = result.success_probability_exact;
    r.fidelity_with_w = result.fidelity_with_w;
    for (const auto &b : result.branches) {
        r.branches.push_back({pattern_label(b.pattern), b.probability, b.terminal});
    }
    for (const auto &s : result.steps) {
        r.steps.push_back({s.k + 1, std::nullopt, s.z});
    }
    for (std::size_t i = 0; i < result.interaction_times.size(); i++) {
        r.steps.push_back({result.acting_users[i] + 1, result.interaction_times[i], std::nullopt});
    }
    return r;
}

Report make_report(const TrialStats &stats, const WPrimeSpec &spec, const TrialConfig &config, double z,
                   double normalization_factor) {
    Report r;
    r.command = "sample";
    r.scheme = scheme_name(config.scheme);
    r.n = spec.n();
    r.min_index = min_coefficient_index(spec) + 1;
    r.normalization_factor = normalization_factor;
    r.success_probability_analytic = stats.analytic_p;
    r.seed = stats.seed;
    r.trials = stats.trials;
    r.successes = stats.successes;
    r.empirical_p = stats.empirical_p;
    r.std_error = stats.std_error;
    r.z_score = stats.z_score;
    auto [lo, hi] = confidence_interval(stats, z);
    r.interval = ReportInterval{lo, hi, z};
    r.histogram = stats.outcome_histogram;
    if (config.scheme == Scheme::cavity && config.params) {
        const auto &p = *config.params;
        r.jc_params = ReportJC{p.omega, p.omega0, p.epsilon, p.fock_cutoff};
    }
    return r;
}

std::string serialize_report(const Report &r) {
    json j = json::object();
    j["command"] = r.command;
    j["scheme"] = r.scheme;
    j["n"] = r.n;
    j["min_index"] = r.min_index;
    j["normalization_factor"] = r.normalization_factor;
    j["success_probability_analytic"] = r.success_probability_analytic;
    j["tool_version"] = r.tool_version;
    if (r.success_probability_exact) {
        j["success_probability_exact"] = *r.success_probability_exact;
    }
    if (r.fidelity_with_w) {
        j["fidelity_with_w"] = *r.fidelity_with_w;
    }
    if (!r.branches.empty()) {
        json arr = json::array();
        for (const auto &b : r.branches) {
            arr.push_back({{"pattern", b.pattern}, {"probability", b.probability}, {"terminal", b.terminal}});
        }
        j["branches"] = std::move(arr);
    }
    if (!r.steps.empty()) {
        json arr = json::array();
        for (const auto &s : r.steps) {
            json e = {{"user", s.user}};
            if (s.delta_t) {
                e["delta_t"] = *s.delta_t;
            }
            if (s.z) {
                e["z"] = complex_pair(*s.z);
            }
            arr.push_back(std::move(e));
        }
        j["steps"] = std::move(arr);
    }
    if (r.jc_params) {
        j["jc_params"] = {
            {"omega", r.jc_params->omega},
            {"omega0", r.jc_params->omega0},
            {"epsilon", r.jc_params->epsilon},
            {"fock_cutoff", r.jc_params->fock_cutoff},
        };
    }
    if (r.seed) {
        j["seed"] = *r.seed;
    }
    if (r.trials) {
        j["trials"] = *r.trials;
    }
    if (r.successes) {
        j["successes"] = *r.successes;
    }
    if (r.empirical_p) {
        j["empirical_p"] = *r.empirical_p;
    }
    if (r.std_error) {
        j["std_error"] = *r.std_error;
    }
    if (r.z_score) {
        j["z_score"] = *r.z_score;
    }
    if (r.interval) {
        j["interval"] = {{"lo", r.interval->lo}, {"hi", r.interval->hi}, {"z", r.interval->z}};
    }
    if (!r.histogram.empty()) {
        j["histogram"] = r.histogram;
    }
    std::string out;
    write_json(j, out, 0);
    out += '\n';
    return out;
}

Report parse_report(const std::string &text) {
    try {
        json j = json::parse(text);
        Report r;
        r.command = j.at("command").get<std::string>();
        r.scheme = j.at("scheme").get<std::string>();
        r.n = j.at("n").get<std::size_t>();
        r.min_index = j.at("min_index").get<std::size_t>();
        r.normalization_factor = j.at("normalization_factor").get<double>();
        r.success_probability_analytic = require_probability(j, "success_probability_analytic");
        r.tool_version = j.at("tool_version").get<std::string>();
        if (j.contains("success_probability_exact")) {
            r.success_probability_exact = require_probability(j, "success_probability_exact");
        }
        if (j.contains("fidelity_with_w")) {
            r.fidelity_with_w = require_probability(j, "fidelity_with_w");
        }
        if (j.contains("branches")) {
            for (const auto &b : j["branches"]) {
                r.branches.push_back({b.at("pattern").get<std::string>(), require_probability(b, "probability"),
                                      b.at("terminal").get<std::string>()});
            }
        }
        if (j.contains("steps")) {
            for (const auto &s : j["steps"]) {
                ReportStep step;
                step.user = s.at("user").get<std::size_t>();
                if (s.contains("delta_t")) {
                    step.delta_t = s["delta_t"].get<double>();
                }
                if (s.contains("z")) {
                    step.z = Complex(s["z"].at(0).get<double>(), s["z"].at(1).get<double>());
                }
                r.steps.push_back(step);
            }
        }
        if (j.contains("jc_params")) {
            const auto &p = j["jc_params"];
            r.jc_params = ReportJC{p.at("omega").get<double>(), p.at("omega0").get<double>(),
                                   p.at("epsilon").get<double>(), p.at("fock_cutoff").get<std::size_t>()};
        }
        if (j.contains("seed")) {
            r.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("trials")) {
            r.trials = j["trials"].get<std::uint64_t>();
        }
        if (j.contains("successes")) {
            r.successes = j["successes"].get<std::uint64_t>();
        }
        if (j.contains("empirical_p")) {
            r.empirical_p = require_probability(j, "empirical_p");
        }
        if (j.contains("std_error")) {
            r.std_error = j["std_error"].get<double>();
        }
        if (j.contains("z_score")) {
            r.z_score = j["z_score"].get<double>();
        }
        if (j.contains("interval")) {
            const auto &iv = j["interval"];
            r.interval = ReportInterval{require_probability(iv, "lo"), require_probability(iv, "hi"),
                                        iv.at("z").get<double>()};
        }
        if (j.contains("histogram")) {
            r.histogram = j["histogram"].get<std::map<std::string, std::uint64_t>>();
        }
        return r;
    } catch (const json::exception &e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

}  // namespace wdistill
