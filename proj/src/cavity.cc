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

#include "wdistill/cavity.h"

#include <algorithm>
#include <cmath>

#include "wdistill/errors.h"

namespace wdistill {

void JCParams::validate() const {
    if (!std::isfinite(omega) || !std::isfinite(omega0) || !std::isfinite(epsilon)) {
        throw ValidationError("JC parameters must be finite");
    }
    if (!(epsilon > 0)) {
        throw ValidationError("coupling epsilon must be positive");
    }
    if (fock_cutoff < 1) {
        throw ValidationError("fock_cutoff must be at least 1");
    }
}

bool JCParams::resonant() const {
    return std::abs(omega - omega0) <= 1e-12 * std::max(std::abs(omega), 1.0);
}

DenseMatrix jc_hamiltonian(const JCParams &params) {
    // The decoupled limit epsilon = 0 is a valid Hamiltonian even though no protocol step can use it.
    if (!std::isfinite(params.omega) || !std::isfinite(params.omega0) || !std::isfinite(params.epsilon) ||
        params.epsilon < 0 || params.fock_cutoff < 1) {
        throw ValidationError("JC Hamiltonian needs finite parameters, epsilon >= 0 and fock_cutoff >= 1");
    }
    const std::size_t levels = params.fock_cutoff + 1;
    DenseMatrix h(2 * levels, 2 * levels);
    auto g = [&](std::size_t n) { return n; };
    auto e = [&](std::size_t n) { return levels + n; };
    for (std::size_t n = 0; n < levels; n++) {
        double photons = static_cast<double>(n);
        h(g(n), g(n)) = params.omega * photons - params.omega0 / 2;
        h(e(n), e(n)) = params.omega * photons + params.omega0 / 2;
        if (n + 1 < levels) {
            double coupling = params.epsilon * std::sqrt(photons + 1);
            h(g(n + 1), e(n)) = coupling;
            h(e(n), g(n + 1)) = coupling;
        }
    }
    return h;
}

DenseMatrix jc_propagator_closed(const JCParams &params, double t) {
    params.validate();
    if (!params.resonant()) {
        throw UnsupportedModeError("closed-form JC propagator requires omega == omega0");
    }
    const std::size_t levels = params.fock_cutoff + 1;
    const double w = params.omega;
    DenseMatrix u(2 * levels, 2 * levels);
    auto g = [&](std::size_t n) { return n; };
    auto e = [&](std::size_t n) { return levels + n; };

    u(g(0), g(0)) = std::polar(1.0, w * t / 2);
    for (std::size_t n = 0; n + 1 < levels; n++) {
        double photons = static_cast<double>(n);
        Complex phase = std::polar(1.0, -w * (photons + 0.5) * t);
        double rabi = params.epsilon * std::sqrt(photons + 1) * t;
        Complex c = phase * std::cos(rabi);
        Complex s = phase * Complex(0, -std::sin(rabi));
        u(e(n), e(n)) = c;
        u(g(n + 1), g(n + 1)) = c;
        u(g(n + 1), e(n)) = s;
        u(e(n), g(n + 1)) = s;
    }
    const double top = static_cast<double>(params.fock_cutoff);
    u(e(params.fock_cutoff), e(params.fock_cutoff)) = std::polar(1.0, -w * (top + 0.5) * t);
    return u;
}

CavityStepPlan optimal_interaction_time(const AtomicWPrimeSpec &spec, std::size_t k, double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
        throw ValidationError("coupling epsilon must be positive");
    }
    if (k >= spec.n()) {
        throw IndexError("user index out of range");
    }
    const double ck = std::abs(spec.coeff(k));
    if (ck <= kMagnitudeTieTol) {
        throw DegenerateCoefficientError("coefficient c_" + std::to_string(k + 1) + " is zero");
    }
    const std::size_t j = min_coefficient_index(spec);
    if (k == j) {
        throw MisuseError("user " + std::to_string(k + 1) + " holds the smallest coefficient and does not act");
    }
    const double ratio = std::min(1.0, std::abs(spec.coeff(j)) / ck);
    CavityStepPlan step;
    step.k = k;
    step.delta_t = std::acos(ratio) / epsilon;
    return step;
}

CavityStepPlan plan_cavity_step(const AtomicWPrimeSpec &spec, std::size_t k, const JCParams &params) {
    CavityStepPlan step = optimal_interaction_time(spec, k, params.epsilon);
    step.excited_phase = -params.omega * step.delta_t / 2;
    step.spectator_phase = params.omega * step.delta_t / 2;
    return step;
}

StateVector ramsey_phase(const StateVector &state, std::size_t site, double phi) {
    if (site >= state.layout().num_sites()) {
        throw IndexError("ramsey_phase: site out of range");
    }
    if (state.layout().dim(site) != 2) {
        throw ValidationError("ramsey_phase: site " + std::to_string(site) + " is not a two-level atom");
    }
    const Complex diag[] = {1.0, std::polar(1.0, phi)};
    const std::size_t sites[] = {site};
    return apply_local(state, DenseMatrix::diagonal(diag), sites);
}

EvolvedSystem evolve_cavity(const AtomicWPrimeSpec &spec, const JCParams &params) {
    params.validate();
    require_nonzero_coefficients(spec);
    if (!params.resonant()) {
        throw UnsupportedModeError("cavity scheme requires a resonant interaction");
    }
    const std::size_t n = spec.n();
    const std::size_t levels = params.fock_cutoff + 1;

    EvolvedSystem sys;
    sys.n = n;
    sys.min_index = min_coefficient_index(spec);
    std::vector<std::size_t> dims(n, 2);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; i++) {
        labels.push_back("atom" + std::to_string(i + 1));
    }
    for (std::size_t k = 0; k < n; k++) {
        if (k == sys.min_index) {
            continue;
        }
        sys.measured_sites.push_back(dims.size());
        sys.acting_users.push_back(k);
        dims.push_back(levels);
        labels.push_back("cavity" + std::to_string(k + 1));
    }
    SubsystemLayout layout(dims, labels);
    std::vector<Complex> amps(layout.total_dim());
    sys.ledger.residual.resize(n);
    for (std::size_t i = 0; i < n; i++) {
        amps[layout.stride(i)] = spec.coeff(i);
        sys.ledger.residual[i] = std::arg(spec.coeff(i));
    }
    StateVector state(layout, std::move(amps));

    for (std::size_t s = 0; s < sys.acting_users.size(); s++) {
        const std::size_t k = sys.acting_users[s];
        const std::size_t cavity = sys.measured_sites[s];
        // |e, cutoff> would couple to a Fock level outside the truncation.
        double edge = 0;
        auto a = state.amps();
        for (std::size_t f = 0; f < a.size(); f++) {
            if ((f / layout.stride(k)) % 2 == 1 && (f / layout.stride(cavity)) % levels == params.fock_cutoff) {
                edge += std::norm(a[f]);
            }
        }
        if (edge > kAlgebraicTol) {
            throw TruncationError("fock_cutoff " + std::to_string(params.fock_cutoff) + " too small for cavity " +
                                  std::to_string(k + 1));
        }
        CavityStepPlan step = plan_cavity_step(spec, k, params);
        const std::size_t sites[] = {k, cavity};
        state = apply_local(state, jc_propagator_closed(params, step.delta_t), sites);
        for (std::size_t i = 0; i < n; i++) {
            sys.ledger.residual[i] += i == k ? step.excited_phase : step.spectator_phase;
        }
    }
    sys.state = std::move(state);
    return sys;
}

DistillationReport run_physical(const AtomicWPrimeSpec &spec, const JCParams &params) {
    EvolvedSystem sys = evolve_cavity(spec, params);

    DistillationReport report;
    report.n = spec.n();
    report.min_index = sys.min_index;
    report.success_probability_analytic = analytic_success_probability(spec);
    report.acting_users = sys.acting_users;
    for (std::size_t k : sys.acting_users) {
        report.interaction_times.push_back(optimal_interaction_time(spec, k, params.epsilon).delta_t);
    }
    report.branches = enumerate_branches(sys);

    const StateVector w = make_w_state(spec.n());
    for (auto &branch : report.branches) {
        bool vacuum = std::all_of(branch.pattern.begin(), branch.pattern.end(), [](std::size_t o) { return o == 0; });
        if (!vacuum) {
            continue;
        }
        report.success_probability_exact = branch.probability;
        if (branch.particles) {
            StateVector atoms = *branch.particles;
            for (std::size_t i = 0; i < spec.n(); i++) {
                atoms = ramsey_phase(atoms, i, -sys.ledger.residual[i]);
            }
            report.final_state = std::move(atoms);
            report.fidelity_with_w = fidelity(report.final_state, w);
            if (std::abs(report.fidelity_with_w - 1) <= kAlgebraicTol) {
                branch.terminal = "W";
            }
        }
    }
    return report;
}

}  // namespace wdistill
