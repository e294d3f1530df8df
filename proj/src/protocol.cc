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
#include <numeric>

#include "wdistill/errors.h"

namespace wdistill {

namespace {

void require_finite(std::span<const Complex> coeffs) {
    for (const auto &c : coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("coefficients must be finite");
        }
    }
}

double sum_norm_sq(std::span<const Complex> coeffs) {
    double s = 0;
    for (const auto &c : coeffs) {
        s += std::norm(c);
    }
    return s;
}

std::string describe(const StateVector &particles) {
    const auto &layout = particles.layout();
    auto amps = particles.amps();
    for (std::size_t f = 0; f < amps.size(); f++) {
        if (std::norm(amps[f]) >= 1 - kAlgebraicTol) {
            return layout.ket_label(f);
        }
    }
    for (std::size_t f = 0; f < amps.size(); f++) {
        if (std::norm(amps[f]) > kAlgebraicTol) {
            auto occ = layout.occupation(f);
            if (std::accumulate(occ.begin(), occ.end(), std::size_t{0}) != 1) {
                return "superposition";
            }
        }
    }
    return "single-excitation";
}

void enumerate(
    const StateVector &state,
    const EvolvedSystem &system,
    std::vector<std::size_t> &pattern,
    double prob,
    std::vector<BranchRecord> &out) {
    const std::size_t depth = pattern.size();
    if (depth == system.measured_sites.size()) {
        StateVector particles = slice(state, system.measured_sites, pattern);
        std::string terminal = describe(particles);
        out.push_back({pattern, prob, std::move(particles), std::move(terminal)});
        return;
    }
    const std::size_t site = system.measured_sites[depth];
    const std::size_t dim = state.layout().dim(site);
    for (std::size_t outcome = 0; outcome < dim; outcome++) {
        Projection proj = project_site(state, site, outcome);
        pattern.push_back(outcome);
        if (proj.probability == 0) {
            // Every completion of this prefix is unreachable.
            std::vector<std::size_t> rest(system.measured_sites.size() - pattern.size(), 0);
            std::vector<std::size_t> tail_dims;
            for (std::size_t d = pattern.size(); d < system.measured_sites.size(); d++) {
                tail_dims.push_back(state.layout().dim(system.measured_sites[d]));
            }
            while (true) {
                std::vector<std::size_t> full = pattern;
                full.insert(full.end(), rest.begin(), rest.end());
                out.push_back({std::move(full), 0.0, std::nullopt, "unreachable"});
                std::size_t i = rest.size();
                while (i > 0 && ++rest[i - 1] == tail_dims[i - 1]) {
                    rest[i - 1] = 0;
                    i--;
                }
                if (i == 0) {
                    break;
                }
            }
        } else {
            enumerate(proj.collapsed, system, pattern, prob * proj.probability, out);
        }
        pattern.pop_back();
    }
}

}  // namespace

WPrimeSpec::WPrimeSpec(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) {
        throw ValidationError("a W-class state needs at least 2 coefficients");
    }
    require_finite(coeffs_);
    double s = sum_norm_sq(coeffs_);
    if (std::abs(s - 1) > kNormalizationTol) {
        throw ValidationError("coefficients are not normalized: sum |c_k|^2 = " + std::to_string(s));
    }
}

WPrimeSpec WPrimeSpec::renormalized(std::vector<Complex> coeffs, double *factor) {
    require_finite(coeffs);
    double s = sum_norm_sq(coeffs);
    if (s == 0) {
        throw DegenerateCoefficientError("all coefficients are zero");
    }
    double f = 1 / std::sqrt(s);
    for (auto &c : coeffs) {
        c *= f;
    }
    if (factor) {
        *factor = f;
    }
    return WPrimeSpec(std::move(coeffs));
}

StateVector make_w_state(std::size_t n) {
    if (n < 2) {
        throw ValidationError("W state needs n >= 2");
    }
    SubsystemLayout layout(std::vector<std::size_t>(n, 2));
    std::vector<Complex> amps(layout.total_dim());
    const double a = 1 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; i++) {
        amps[layout.stride(i)] = a;
    }
    return StateVector(layout, std::move(amps));
}

std::size_t min_coefficient_index(const WPrimeSpec &spec) {
    double smallest = std::abs(spec.coeff(0));
    for (const auto &c : spec.coeffs()) {
        smallest = std::min(smallest, std::abs(c));
    }
    for (std::size_t k = 0; k < spec.n(); k++) {
        if (std::abs(spec.coeff(k)) <= smallest + kMagnitudeTieTol) {
            return k;
        }
    }
    return 0;
}

void require_nonzero_coefficients(const WPrimeSpec &spec) {
    for (std::size_t k = 0; k < spec.n(); k++) {
        if (std::abs(spec.coeff(k)) <= kMagnitudeTieTol) {
            throw DegenerateCoefficientError(
                "coefficient c_" + std::to_string(k + 1) + " is zero; success probability would vanish");
        }
    }
}

StepPlan build_step_unitary(const WPrimeSpec &spec, std::size_t k) {
    if (k >= spec.n()) {
        throw IndexError("user index out of range");
    }
    const Complex ck = spec.coeff(k);
    if (std::abs(ck) <= kMagnitudeTieTol) {
        throw DegenerateCoefficientError("coefficient c_" + std::to_string(k + 1) + " is zero");
    }
    const std::size_t j = min_coefficient_index(spec);
    if (k == j) {
        throw MisuseError("user " + std::to_string(k + 1) + " holds the smallest coefficient and does not act");
    }
    const double smallest = std::abs(spec.coeff(j));
    Complex z = smallest / ck;
    // Magnitude ties are resolved to |z| = 1 so the off-diagonal stays real.
    if (std::abs(z) > 1) {
        z /= std::abs(z);
    }
    const double off = std::sqrt(std::max(0.0, 1 - std::norm(z)));
    DenseMatrix u{
        {1, 0, 0, 0},
        {0, z, -off, 0},
        {0, off, std::conj(z), 0},
        {0, 0, 0, 1},
    };
    return {k, z, std::move(u)};
}

Plan plan(const WPrimeSpec &spec) {
    require_nonzero_coefficients(spec);
    Plan p;
    p.min_index = min_coefficient_index(spec);
    for (std::size_t k = 0; k < spec.n(); k++) {
        if (k != p.min_index) {
            p.steps.push_back(build_step_unitary(spec, k));
        }
    }
    return p;
}

double analytic_success_probability(const WPrimeSpec &spec) {
    double smallest_sq = std::norm(spec.coeff(0));
    for (const auto &c : spec.coeffs()) {
        smallest_sq = std::min(smallest_sq, std::norm(c));
    }
    return std::min(1.0, static_cast<double>(spec.n()) * smallest_sq);
}

EvolvedSystem evolve_abstract(const WPrimeSpec &spec, std::span<const std::size_t> step_order) {
    Plan p = plan(spec);
    const std::size_t n = spec.n();

    std::vector<std::size_t> dims(2 * n - 1, 2);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; i++) {
        labels.push_back("p" + std::to_string(i + 1));
    }
    EvolvedSystem sys;
    sys.n = n;
    sys.min_index = p.min_index;
    for (std::size_t s = 0; s < p.steps.size(); s++) {
        labels.push_back("a" + std::to_string(p.steps[s].k + 1));
        sys.acting_users.push_back(p.steps[s].k);
        sys.measured_sites.push_back(n + s);
    }
    SubsystemLayout layout(dims, labels);
    std::vector<Complex> amps(layout.total_dim());
    for (std::size_t i = 0; i < n; i++) {
        amps[layout.stride(i)] = spec.coeff(i);
    }
    StateVector state(layout, std::move(amps));

    std::vector<std::size_t> order(p.steps.size());
    std::iota(order.begin(), order.end(), 0);
    if (!step_order.empty()) {
        std::vector<std::size_t> sorted(step_order.begin(), step_order.end());
        std::sort(sorted.begin(), sorted.end());
        if (sorted != order) {
            throw ValidationError("step_order must be a permutation of the planned steps");
        }
        order.assign(step_order.begin(), step_order.end());
    }
    for (std::size_t s : order) {
        const std::size_t sites[] = {sys.measured_sites[s], p.steps[s].k};
        state = apply_local(state, p.steps[s].unitary, sites);
    }
    sys.state = std::move(state);
    sys.ledger.residual.assign(n, 0.0);
    return sys;
}

std::vector<BranchRecord> enumerate_branches(const EvolvedSystem &system) {
    std::vector<BranchRecord> out;
    std::vector<std::size_t> pattern;
    enumerate(system.state, system, pattern, 1.0, out);
    return out;
}

StateVector phase_correction(const StateVector &state, std::size_t j, Complex c_j, const PhaseLedger &ledger) {
    const SubsystemLayout &layout = state.layout();
    const std::size_t n = layout.num_sites();
    if (j >= n) {
        throw IndexError("phase_correction: site out of range");
    }
    if (ledger.residual.size() != n) {
        throw ShapeError("phase_correction: ledger does not cover every particle");
    }
    auto amps = state.amps();
    for (std::size_t f = 0; f < amps.size(); f++) {
        if (amps[f] == Complex{}) {
            continue;
        }
        auto occ = layout.occupation(f);
        bool single = true;
        std::size_t excited = 0;
        for (std::size_t i = 0; i < n; i++) {
            if (layout.dim(i) != 2) {
                throw ContractError("phase_correction: every site must be a qubit");
            }
            excited += occ[i];
        }
        single = excited == 1;
        if (!single && std::abs(amps[f]) > kAlgebraicTol) {
            throw ContractError("phase_correction: state has support outside the single-excitation sector");
        }
    }

    StateVector out = state;
    for (std::size_t i = 0; i < n; i++) {
        double angle = -ledger.residual[i];
        if (i == j) {
            angle -= std::arg(c_j);
        }
        if (angle == 0) {
            continue;
        }
        const Complex diag[] = {1.0, std::polar(1.0, angle)};
        const std::size_t site[] = {i};
        out = apply_local(out, DenseMatrix::diagonal(diag), site);
    }

    // Global phase: amplitude of |10..0> real and positive.
    Complex lead = out.amp(layout.stride(0));
    if (std::abs(lead) > 0) {
        Complex g = std::conj(lead) / std::abs(lead);
        std::vector<Complex> amps2(out.amps().begin(), out.amps().end());
        for (auto &a : amps2) {
            a *= g;
        }
        out = StateVector(layout, std::move(amps2));
    }
    return out;
}

DistillationReport run_exact(const WPrimeSpec &spec, std::span<const std::size_t> step_order) {
    Plan p = plan(spec);
    EvolvedSystem sys = evolve_abstract(spec, step_order);

    DistillationReport report;
    report.n = spec.n();
    report.min_index = p.min_index;
    report.success_probability_analytic = analytic_success_probability(spec);
    report.steps = p.steps;
    report.acting_users = sys.acting_users;
    report.branches = enumerate_branches(sys);

    const StateVector w = make_w_state(spec.n());
    for (auto &branch : report.branches) {
        bool success = std::all_of(branch.pattern.begin(), branch.pattern.end(), [](std::size_t o) { return o == 0; });
        if (!success) {
            continue;
        }
        report.success_probability_exact = branch.probability;
        if (branch.particles) {
            report.final_state = phase_correction(*branch.particles, p.min_index, spec.coeff(p.min_index), sys.ledger);
            report.fidelity_with_w = fidelity(report.final_state, w);
            if (std::abs(report.fidelity_with_w - 1) <= kAlgebraicTol) {
                branch.terminal = "W";
            }
        }
    }
    return report;
}

}  // namespace wdistill
