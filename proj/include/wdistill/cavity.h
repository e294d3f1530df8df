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

#ifndef WDISTILL_CAVITY_H
#define WDISTILL_CAVITY_H

#include <cstddef>
#include <vector>

#include "wdistill/linalg.h"
#include "wdistill/protocol.h"
#include "wdistill/statevec.h"

namespace wdistill {

/// Jaynes-Cummings model H = omega a^dag a + omega0 S_z + epsilon (a S+ + a^dag S-), hbar = 1.
struct JCParams {
    double omega = 1;
    double omega0 = 1;
    double epsilon = 1;
    std::size_t fock_cutoff = 1;

    /// Throws ValidationError unless epsilon > 0, fock_cutoff >= 1 and all values are finite.
    void validate() const;
    bool resonant() const;
};

/// Atomic levels map |g> -> 0 and |e> -> 1; the coefficient layout is that of WPrimeSpec.
using AtomicWPrimeSpec = WPrimeSpec;

struct CavityStepPlan {
    std::size_t k = 0;
    double delta_t = 0;
    // Phase picked up by the atom-k term (-omega dt / 2) and by every other term (+omega dt / 2).
    double excited_phase = 0;
    double spectator_phase = 0;
};

/// Matrix on atom (x) Fock, atom most significant: index = level * (cutoff + 1) + n.
DenseMatrix jc_hamiltonian(const JCParams &params);

/// exp(-i H t) at resonance, assembled sector by sector:
///   |g,0>   -> e^{+i omega t / 2} |g,0>
///   |e,n>   -> e^{-i omega (n + 1/2) t} (cos(eps sqrt(n+1) t) |e,n> - i sin(eps sqrt(n+1) t) |g,n+1>)
///   |g,n+1> -> e^{-i omega (n + 1/2) t} (cos(eps sqrt(n+1) t) |g,n+1> - i sin(eps sqrt(n+1) t) |e,n>)
/// |e,cutoff> has no partner inside the truncation and only picks up its bare phase.
/// Throws UnsupportedModeError off resonance.
DenseMatrix jc_propagator_closed(const JCParams &params, double t);

/// Interaction time making |c_k| cos(eps dt) equal the smallest coefficient magnitude.
CavityStepPlan optimal_interaction_time(const AtomicWPrimeSpec &spec, std::size_t k, double epsilon);

/// Same as optimal_interaction_time, with the resonance phases filled in from `params.omega`.
CavityStepPlan plan_cavity_step(const AtomicWPrimeSpec &spec, std::size_t k, const JCParams &params);

/// diag(1, e^{i phi}) on an atomic site. Throws ValidationError for sites that are not two-level.
StateVector ramsey_phase(const StateVector &state, std::size_t site, double phi);

/// Atoms 0..N-1 followed by one vacuum cavity per acting user, each atom sent
/// through its cavity for the optimal interaction time. The ledger records the
/// total phase of every single-excitation term (coefficient phase included).
EvolvedSystem evolve_cavity(const AtomicWPrimeSpec &spec, const JCParams &params);

DistillationReport run_physical(const AtomicWPrimeSpec &spec, const JCParams &params);

}  // namespace wdistill

#endif
