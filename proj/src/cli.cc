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

#include "wdistill/cli.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wdistill/cavity.h"
#include "wdistill/errors.h"
#include "wdistill/montecarlo.h"
#include "wdistill/protocol.h"
#include "wdistill/report.h"

namespace wdistill::cli {

namespace {

// Thrown for unreadable inputs and unwritable outputs.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string &text, const std::optional<std::string> &path, std::ostream &out) {
    if (!path || *path == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) {
        throw UsageError("cannot write '" + *path + "'");
    }
}

int guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError &e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidSpec;
    } catch (const IndexError &e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidSpec;
    } catch (const UnsupportedModeError &e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidSpec;
    } catch (const std::exception &e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}

LoadedSpec load(const std::string &path, bool allow_unnormalized) {
    return load_spec(parse_spec_file(read_file(path)), allow_unnormalized);
}

void check_exact(const DistillationReport &r) {
    double total = 0;
    for (const auto &b : r.branches) {
        total += b.probability;
    }
    if (std::abs(total - 1) > kIterativeTol) {
        throw NumericalError("branch probabilities sum to " + format_real(total));
    }
    if (std::abs(r.success_probability_exact - r.success_probability_analytic) > kIterativeTol) {
        throw NumericalError("simulated success probability " + format_real(r.success_probability_exact) +
                             " disagrees with N * min|c|^2 = " + format_real(r.success_probability_analytic));
    }
    if (std::abs(r.fidelity_with_w - 1) > kAlgebraicTol) {
        throw NumericalError("corrected output fidelity " + format_real(r.fidelity_with_w) + " is not 1");
    }
}

JCParams jc_from(double epsilon, double omega, std::optional<double> omega0, std::size_t fock) {
    JCParams p;
    p.epsilon = epsilon;
    p.omega = omega;
    p.omega0 = omega0.value_or(omega);
    p.fock_cutoff = fock;
    p.validate();
    return p;
}

}  // namespace

int cmd_distill(const DistillOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        LoadedSpec loaded = load(opts.spec_path, opts.allow_unnormalized);
        DistillationReport result = run_exact(loaded.spec);
        check_exact(result);
        emit(serialize_report(make_report(result, Scheme::abstract, loaded.normalization_factor)), opts.out_path, out);
        return kOk;
    });
}

int cmd_cavity(const CavityOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        JCParams params = jc_from(opts.epsilon, opts.omega, opts.omega0, opts.fock);
        LoadedSpec loaded = load(opts.spec_path, opts.allow_unnormalized);
        DistillationReport result = run_physical(loaded.spec, params);
        check_exact(result);
        emit(serialize_report(make_report(result, Scheme::cavity, loaded.normalization_factor, &params)),
             opts.out_path, out);
        return kOk;
    });
}

int cmd_sample(const SampleOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        if (opts.trials < 1) {
            throw UsageError("--trials must be at least 1");
        }
        TrialConfig config;
        config.trials = opts.trials;
        config.seed = opts.seed;
        try {
            config.scheme = parse_scheme(opts.scheme);
        } catch (const ValidationError &e) {
            throw UsageError(e.what());
        }
        config.threads = opts.threads;
        if (config.scheme == Scheme::cavity) {
            config.params = jc_from(opts.epsilon, opts.omega, opts.omega0, opts.fock);
        }
        LoadedSpec loaded = load(opts.spec_path, opts.allow_unnormalized);
        TrialStats stats = run_trials(loaded.spec, config);
        emit(serialize_report(make_report(stats, loaded.spec, config, opts.z, loaded.normalization_factor)),
             opts.out_path, out);
        return kOk;
    });
}

int cmd_sweep(const SweepOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        if (opts.n < 2 || opts.steps < 2) {
            throw UsageError("sweep needs --n >= 2 and --steps >= 2");
        }
        // One coefficient carries m = i / (n * steps); the rest share 1 - m equally.
        std::string csv = "min_coeff_sq,analytic_p,exact_p\n";
        const double n = static_cast<double>(opts.n);
        for (std::size_t i = 1; i <= opts.steps; i++) {
            const double m = static_cast<double>(i) / (n * static_cast<double>(opts.steps));
            std::vector<Complex> coeffs(opts.n, std::sqrt((1 - m) / (n - 1)));
            coeffs.back() = std::sqrt(m);
            WPrimeSpec spec(std::move(coeffs));
            const double analytic = analytic_success_probability(spec);
            const double exact = run_exact(spec).success_probability_exact;
            if (std::abs(exact - analytic) > kIterativeTol) {
                throw NumericalError("sweep row " + std::to_string(i) + " breaches exact/analytic tolerance");
            }
            csv += format_real(m) + "," + format_real(analytic) + "," + format_real(exact) + "\n";
        }
        emit(csv, opts.out_path, out);
        return kOk;
    });
}

int cmd_wstate(const WStateOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        if (opts.n < 2) {
            throw UsageError("wstate needs --n >= 2");
        }
        StateVector w = make_w_state(opts.n);
        std::string table;
        auto amps = w.amps();
        for (std::size_t f = amps.size(); f-- > 0;) {
            if (amps[f] == Complex{}) {
                continue;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.8f", amps[f].real());
            table += w.layout().ket_label(f) + " " + buf + "\n";
        }
        out << table;
        return kOk;
    });
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact and sampled simulation of W-class entanglement distillation"};
    app.require_subcommand(1);

    DistillOptions distill;
    auto *distill_cmd = app.add_subcommand("distill", "Run the abstract protocol exactly on a spec file");
    distill_cmd->add_option("spec", distill.spec_path, "Spec file (JSON)")->required();
    distill_cmd->add_option("--out", distill.out_path, "Report path (default: stdout)");
    distill_cmd->add_flag("--allow-unnormalized", distill.allow_unnormalized, "Renormalize the coefficients");

    CavityOptions cavity;
    auto *cavity_cmd = app.add_subcommand("cavity", "Run the Jaynes-Cummings cavity scheme exactly");
    cavity_cmd->add_option("spec", cavity.spec_path, "Spec file (JSON)")->required();
    cavity_cmd->add_option("--epsilon", cavity.epsilon, "Atom-cavity coupling")->capture_default_str();
    cavity_cmd->add_option("--omega", cavity.omega, "Cavity mode frequency")->capture_default_str();
    cavity_cmd->add_option("--omega0", cavity.omega0, "Atomic transition frequency (default: omega)");
    cavity_cmd->add_option("--fock", cavity.fock, "Fock cutoff")->capture_default_str();
    cavity_cmd->add_option("--out", cavity.out_path, "Report path (default: stdout)");
    cavity_cmd->add_flag("--allow-unnormalized", cavity.allow_unnormalized, "Renormalize the coefficients");

    SampleOptions sample;
    auto *sample_cmd = app.add_subcommand("sample", "Monte Carlo trajectories with early stop on failure");
    sample_cmd->add_option("spec", sample.spec_path, "Spec file (JSON)")->required();
    sample_cmd->add_option("--trials", sample.trials, "Number of trials")->capture_default_str();
    sample_cmd->add_option("--seed", sample.seed, "Base seed")->capture_default_str();
    sample_cmd->add_option("--scheme", sample.scheme, "abstract or cavity")->capture_default_str();
    sample_cmd->add_option("--epsilon", sample.epsilon, "Atom-cavity coupling")->capture_default_str();
    sample_cmd->add_option("--omega", sample.omega, "Cavity mode frequency")->capture_default_str();
    sample_cmd->add_option("--omega0", sample.omega0, "Atomic transition frequency (default: omega)");
    sample_cmd->add_option("--fock", sample.fock, "Fock cutoff")->capture_default_str();
    sample_cmd->add_option("--threads", sample.threads, "Worker threads (0: all cores)")->capture_default_str();
    sample_cmd->add_option("--z", sample.z, "Wilson interval z")->capture_default_str();
    sample_cmd->add_option("--out", sample.out_path, "Report path (default: stdout)");
    sample_cmd->add_flag("--allow-unnormalized", sample.allow_unnormalized, "Renormalize the coefficients");

    SweepOptions sweep;
    auto *sweep_cmd = app.add_subcommand("sweep", "Success probability versus smallest coefficient");
    sweep_cmd->add_option("--n", sweep.n, "Number of particles")->capture_default_str();
    sweep_cmd->add_option("--steps", sweep.steps, "Number of rows")->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out_path, "CSV path (default: stdout)");

    WStateOptions wstate;
    auto *wstate_cmd = app.add_subcommand("wstate", "Print the W state amplitudes");
    wstate_cmd->add_option("--n", wstate.n, "Number of particles")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (distill_cmd->parsed()) {
        return cmd_distill(distill, out, err);
    }
    if (cavity_cmd->parsed()) {
        return cmd_cavity(cavity, out, err);
    }
    if (sample_cmd->parsed()) {
        return cmd_sample(sample, out, err);
    }
    if (sweep_cmd->parsed()) {
        return cmd_sweep(sweep, out, err);
    }
    return cmd_wstate(wstate, out, err);
}

}  // namespace wdistill::cli
