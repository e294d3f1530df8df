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

#ifndef WDISTILL_STATEVEC_H
#define WDISTILL_STATEVEC_H

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wdistill/linalg.h"

namespace wdistill {

inline constexpr std::size_t kDefaultMaxStateDim = std::size_t{1} << 20;

/// Cap on the total Hilbert-space dimension. `WDISTILL_MAX_DIM` overrides the default.
std::size_t max_state_dim();

/// Ordered list of subsystems. Site 0 is the most significant digit of the flat index.
class SubsystemLayout {
   public:
    SubsystemLayout() = default;
    explicit SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels = {});

    std::size_t num_sites() const { return dims_.size(); }
    std::size_t dim(std::size_t site) const { return dims_.at(site); }
    std::span<const std::size_t> dims() const { return dims_; }
    std::span<const std::string> labels() const { return labels_; }
    std::size_t total_dim() const { return total_; }
    /// Flat-index stride of a site.
    std::size_t stride(std::size_t site) const { return strides_.at(site); }

    std::size_t flat_index(std::span<const std::size_t> occupation) const;
    std::vector<std::size_t> occupation(std::size_t flat) const;
    /// Ket label such as "|100>".
    std::string ket_label(std::size_t flat) const;

    bool operator==(const SubsystemLayout &other) const { return dims_ == other.dims_; }

   private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

/// Dense amplitude vector over a SubsystemLayout.
///
/// A state can be flagged null: it is the result of projecting onto an
/// outcome of zero probability and carries no amplitudes. Reading amplitudes
/// of a null state throws ContractError.
class StateVector {
   public:
    StateVector() = default;
    StateVector(SubsystemLayout layout, std::vector<Complex> amps);

    static StateVector null_state(SubsystemLayout layout);

    const SubsystemLayout &layout() const { return layout_; }
    bool is_null() const { return null_; }
    std::span<const Complex> amps() const;
    Complex amp(std::size_t flat) const;

    double norm_sq() const;
    bool is_normalized(double tol = 1e-9) const;

   private:
    SubsystemLayout layout_;
    std::vector<Complex> amps_;
    bool null_ = false;
};

struct Projection {
    double probability = 0;
    StateVector collapsed;  // null when probability == 0
};

struct Sample {
    std::size_t outcome = 0;
    double probability = 0;
    StateVector collapsed;
};

/// Seeded single-consumer random stream. Every draw is a 53-bit uniform in [0, 1).
class RandomStream {
   public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    double uniform();

   private:
    std::mt19937_64 engine_;
};

StateVector basis_state(const SubsystemLayout &layout, std::span<const std::size_t> occupation);
StateVector apply_local(const StateVector &state, const DenseMatrix &op, std::span<const std::size_t> sites);

std::vector<double> outcome_probabilities(const StateVector &state, std::size_t site);
/// Outcome selected by a uniform draw `u` against cumulative probabilities.
std::size_t pick_outcome(std::span<const double> probabilities, double u);

Projection project_site(const StateVector &state, std::size_t site, std::size_t outcome);
Sample sample_site(const StateVector &state, std::size_t site, RandomStream &rng);

/// Drops `sites`, keeping the amplitudes where each dropped site sits at the
/// matching entry of `values`. The result is not renormalized.
StateVector slice(const StateVector &state, std::span<const std::size_t> sites, std::span<const std::size_t> values);

Complex inner_product(const StateVector &x, const StateVector &y);
double fidelity(const StateVector &x, const StateVector &y);

}  // namespace wdistill

#endif
