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

#ifndef WDISTILL_PROTOCOL_H
#define WDISTILL_PROTOCOL_H

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdistill/linalg.h"
#include "wdistill/statevec.h"

namespace wdistill {

inline constexpr double kNormalizationTol = 1e-9;
/// Magnitudes closer than this count as tied when locating the smallest coefficient.
inline constexpr double kMagnitudeTieTol = 1e-12;

/// Coefficients c_1..c_N of a W-class state sum_k c_k |0..1_k..0>.
class WPrimeSpec {
   public:
    /// Requires N >= 2, finite entries and sum |c_k|^2 = 1 within 1e-9.
    explicit WPrimeSpec(std::vector<Complex> coeffs);

    /// Rescales arbitrary nonzero coefficients to unit norm. `factor` receives
    /// the multiplier that was applied.
    static WPrimeSpec renormalized(std::vector<Complex> coeffs, double *factor = nullptr);

    std::size_t n() const { return coeffs_.size(); }
    std::span<const Complex> coeffs() const { return coeffs_; }
    Complex coeff(std::size_t k) const { return coeffs_.at(k); }

   private:
    std::vector<Complex> coeffs_;
};

/// One user's local operation: z_k = min|c| / c_k and the 4x4 unitary in the
/// basis {|0>_k|0>_a, |1>_k|0>_a, |0>_k|1>_a, |1>_k|1>_a}.
///
/// That basis puts the particle in the fast (least significant) position, so
/// the matrix acts on sites {ancilla, particle} under the big-endian convention.
struct StepPlan {
    std::size_t k = 0;
    Complex z;
    DenseMatrix unitary;
};

/// Phase of each single-excitation term beyond what the correction already
/// knows. `residual[i]` is the phase carried by the term with particle i
/// excited; for the skipped user j it excludes arg(c_j).
struct PhaseLedger {
    std::vector<double> residual;
};

struct BranchRecord {
    std::vector<std::size_t> pattern;   // one outcome per ancilla/cavity, ascending user order
    double probability = 0;
    std::optional<StateVector> particles;  // post-selected particle state; empty when probability is 0
    std::string terminal;                  // basis ket label, "W", or "superposition"
};

struct DistillationReport {
    std::size_t n = 0;
    std::size_t min_index = 0;  // 0-based
    double success_probability_exact = 0;
    double success_probability_analytic = 0;
    std::vector<BranchRecord> branches;
    StateVector final_state;  // corrected particle state after success
    double fidelity_with_w = 0;
    std::vector<StepPlan> steps;          // abstract protocol only
    std::vector<double> interaction_times;  // cavity scheme only, aligned with acting users
    std::vector<std::size_t> acting_users;
};

/// The full system right before the ancillas are read out.
struct EvolvedSystem {
    StateVector state;
    std::size_t n = 0;
    std::size_t min_index = 0;
    std::vector<std::size_t> acting_users;    // ascending
    std::vector<std::size_t> measured_sites;  // ancilla/cavity site of each acting user
    PhaseLedger ledger;
};

StateVector make_w_state(std::size_t n);

/// Index of the smallest |c_k|; ties within 1e-12 go to the lowest index.
std::size_t min_coefficient_index(const WPrimeSpec &spec);
/// Throws DegenerateCoefficientError when some |c_k| <= 1e-12.
void require_nonzero_coefficients(const WPrimeSpec &spec);

StepPlan build_step_unitary(const WPrimeSpec &spec, std::size_t k);

struct Plan {
    std::size_t min_index = 0;
    std::vector<StepPlan> steps;
};
Plan plan(const WPrimeSpec &spec);

double analytic_success_probability(const WPrimeSpec &spec);

/// Particles 0..N-1 followed by one ancilla per acting user, all ancillas in |0>.
/// `step_order` permutes the application order of the planned steps; empty
/// means ascending user order.
EvolvedSystem evolve_abstract(const WPrimeSpec &spec, std::span<const std::size_t> step_order = {});

/// Enumerates every outcome pattern of `system.measured_sites` by sequential
/// projection. Subtrees below a zero-probability outcome are recorded with
/// probability 0 and no particle state.
std::vector<BranchRecord> enumerate_branches(const EvolvedSystem &system);

/// Single-site phase gates that make the post-selected amplitudes real, positive
/// and equal. Site j gets diag(1, e^{-i arg c_j}); every other site gets the
/// inverse of its ledger residual. Throws ContractError when the state has
/// support outside the single-excitation sector.
StateVector phase_correction(const StateVector &state, std::size_t j, Complex c_j, const PhaseLedger &ledger);

DistillationReport run_exact(const WPrimeSpec &spec, std::span<const std::size_t> step_order = {});

}  // namespace wdistill

#endif
