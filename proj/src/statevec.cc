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

#include "wdistill/statevec.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "wdistill/errors.h"

namespace wdistill {

std::size_t max_state_dim() {
    if (const char *env = std::getenv("WDISTILL_MAX_DIM")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return kDefaultMaxStateDim;
}

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty()) {
        throw ValidationError("layout needs at least one site");
    }
    if (!labels_.empty() && labels_.size() != dims_.size()) {
        throw ValidationError("layout label count does not match site count");
    }
    const std::size_t cap = max_state_dim();
    total_ = 1;
    for (std::size_t d : dims_) {
        if (d < 2) {
            throw ValidationError("every site dimension must be at least 2");
        }
        if (total_ > cap / d) {
            throw ValidationError("state dimension exceeds cap of " + std::to_string(cap));
        }
        total_ *= d;
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size() - 1; i > 0; i--) {
        strides_[i - 1] = strides_[i] * dims_[i];
    }
}

std::size_t SubsystemLayout::flat_index(std::span<const std::size_t> occupation) const {
    if (occupation.size() != dims_.size()) {
        throw IndexError("occupation length does not match site count");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims_.size(); i++) {
        if (occupation[i] >= dims_[i]) {
            throw IndexError(
                "occupation " + std::to_string(occupation[i]) + " out of range for site " + std::to_string(i));
        }
        flat += occupation[i] * strides_[i];
    }
    return flat;
}

std::vector<std::size_t> SubsystemLayout::occupation(std::size_t flat) const {
    if (flat >= total_) {
        throw IndexError("flat index out of range");
    }
    std::vector<std::size_t> occ(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); i++) {
        occ[i] = (flat / strides_[i]) % dims_[i];
    }
    return occ;
}

std::string SubsystemLayout::ket_label(std::size_t flat) const {
    auto occ = occupation(flat);
    bool wide = std::any_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d > 10; });
    std::string s = "|";
    for (std::size_t i = 0; i < occ.size(); i++) {
        if (wide && i > 0) {
            s += ',';
        }
        s += std::to_string(occ[i]);
    }
    return s + ">";
}

StateVector::StateVector(SubsystemLayout layout, std::vector<Complex> amps)
    : layout_(std::move(layout)), amps_(std::move(amps)) {
    if (amps_.size() != layout_.total_dim()) {
        throw ShapeError("amplitude count does not match layout dimension");
    }
    for (const auto &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("state amplitudes must be finite");
        }
    }
}

StateVector StateVector::null_state(SubsystemLayout layout) {
    StateVector s;
    s.layout_ = std::move(layout);
    s.null_ = true;
    return s;
}

std::span<const Complex> StateVector::amps() const {
    if (null_) {
        throw ContractError("amplitudes of a null (zero-probability) state were requested");
    }
    return amps_;
}

Complex StateVector::amp(std::size_t flat) const {
    auto a = amps();
    if (flat >= a.size()) {
        throw IndexError("amplitude index out of range");
    }
    return a[flat];
}

double StateVector::norm_sq() const {
    double s = 0;
    for (const auto &a : amps()) {
        s += std::norm(a);
    }
    return s;
}

bool StateVector::is_normalized(double tol) const {
    return !null_ && std::abs(norm_sq() - 1) <= tol;
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

StateVector basis_state(const SubsystemLayout &layout, std::span<const std::size_t> occupation) {
    std::vector<Complex> amps(layout.total_dim());
    amps[layout.flat_index(occupation)] = 1.0;
    return StateVector(layout, std::move(amps));
}

StateVector apply_local(const StateVector &state, const DenseMatrix &op, std::span<const std::size_t> sites) {
    const SubsystemLayout &layout = state.layout();
    std::set<std::size_t> seen;
    std::size_t local_dim = 1;
    for (std::size_t s : sites) {
        if (s >= layout.num_sites()) {
            throw IndexError("site " + std::to_string(s) + " out of range");
        }
        if (!seen.insert(s).second) {
            throw ValidationError("apply_local: duplicate site " + std::to_string(s));
        }
        local_dim *= layout.dim(s);
    }
    if (sites.empty()) {
        throw ValidationError("apply_local: no sites given");
    }
    if (!op.is_square() || op.rows() != local_dim) {
        throw ShapeError(
            "apply_local: operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
            " but sites span dimension " + std::to_string(local_dim));
    }

    // offsets[l]: flat displacement of local index l, first listed site most significant.
    std::vector<std::size_t> offsets(local_dim, 0);
    for (std::size_t l = 0; l < local_dim; l++) {
        std::size_t rem = l;
        for (std::size_t i = sites.size(); i-- > 0;) {
            std::size_t d = layout.dim(sites[i]);
            offsets[l] += (rem % d) * layout.stride(sites[i]);
            rem /= d;
        }
    }

    auto in = state.amps();
    std::vector<Complex> out(in.size());
    std::vector<Complex> local(local_dim);
    for (std::size_t base = 0; base < in.size(); base++) {
        bool at_origin = true;
        for (std::size_t s : sites) {
            if ((base / layout.stride(s)) % layout.dim(s) != 0) {
                at_origin = false;
                break;
            }
        }
        if (!at_origin) {
            continue;
        }
        for (std::size_t l = 0; l < local_dim; l++) {
            local[l] = in[base + offsets[l]];
        }
        for (std::size_t r = 0; r < local_dim; r++) {
            Complex acc = 0;
            for (std::size_t c = 0; c < local_dim; c++) {
                acc += op(r, c) * local[c];
            }
            out[base + offsets[r]] = acc;
        }
    }
    return StateVector(layout, std::move(out));
}

std::vector<double> outcome_probabilities(const StateVector &state, std::size_t site) {
    const SubsystemLayout &layout = state.layout();
    if (site >= layout.num_sites()) {
        throw IndexError("site " + std::to_string(site) + " out of range");
    }
    std::vector<double> probs(layout.dim(site), 0.0);
    auto amps = state.amps();
    const std::size_t stride = layout.stride(site);
    const std::size_t d = layout.dim(site);
    for (std::size_t f = 0; f < amps.size(); f++) {
        probs[(f / stride) % d] += std::norm(amps[f]);
    }
    return probs;
}

std::size_t pick_outcome(std::span<const double> probabilities, double u) {
    double total = 0;
    for (double p : probabilities) {
        total += p;
    }
    double target = u * total;
    double acc = 0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < probabilities.size(); i++) {
        if (probabilities[i] > 0) {
            last_nonzero = i;
        }
        acc += probabilities[i];
        if (target < acc && probabilities[i] > 0) {
            return i;
        }
    }
    return last_nonzero;
}

Projection project_site(const StateVector &state, std::size_t site, std::size_t outcome) {
    const SubsystemLayout &layout = state.layout();
    if (site >= layout.num_sites()) {
        throw IndexError("site " + std::to_string(site) + " out of range");
    }
    if (outcome >= layout.dim(site)) {
        throw IndexError("outcome " + std::to_string(outcome) + " out of range for site " + std::to_string(site));
    }
    auto amps = state.amps();
    const std::size_t stride = layout.stride(site);
    const std::size_t d = layout.dim(site);
    double prob = 0;
    for (std::size_t f = 0; f < amps.size(); f++) {
        if ((f / stride) % d == outcome) {
            prob += std::norm(amps[f]);
        }
    }
    if (prob == 0) {
        return {0.0, StateVector::null_state(layout)};
    }
    // Probability is relative to the input norm, so unnormalized inputs still give Born ratios.
    double total = state.norm_sq();
    double scale = 1 / std::sqrt(prob);
    std::vector<Complex> out(amps.size());
    for (std::size_t f = 0; f < amps.size(); f++) {
        if ((f / stride) % d == outcome) {
            out[f] = amps[f] * scale;
        }
    }
    return {prob / total, StateVector(layout, std::move(out))};
}

Sample sample_site(const StateVector &state, std::size_t site, RandomStream &rng) {
    auto probs = outcome_probabilities(state, site);
    std::size_t outcome = pick_outcome(probs, rng.uniform());
    Projection proj = project_site(state, site, outcome);
    return {outcome, proj.probability, std::move(proj.collapsed)};
}

StateVector slice(const StateVector &state, std::span<const std::size_t> sites, std::span<const std::size_t> values) {
    const SubsystemLayout &layout = state.layout();
    if (sites.size() != values.size()) {
        throw ShapeError("slice: site and value counts differ");
    }
    std::vector<bool> dropped(layout.num_sites(), false);
    for (std::size_t i = 0; i < sites.size(); i++) {
        if (sites[i] >= layout.num_sites()) {
            throw IndexError("slice: site out of range");
        }
        if (dropped[sites[i]]) {
            throw ValidationError("slice: duplicate site");
        }
        if (values[i] >= layout.dim(sites[i])) {
            throw IndexError("slice: value out of range");
        }
        dropped[sites[i]] = true;
    }
    std::vector<std::size_t> kept_dims;
    std::vector<std::string> kept_labels;
    std::vector<std::size_t> kept_sites;
    for (std::size_t s = 0; s < layout.num_sites(); s++) {
        if (!dropped[s]) {
            kept_sites.push_back(s);
            kept_dims.push_back(layout.dim(s));
            if (!layout.labels().empty()) {
                kept_labels.push_back(layout.labels()[s]);
            }
        }
    }
    if (kept_sites.empty()) {
        throw ValidationError("slice: cannot drop every site");
    }
    SubsystemLayout sub(kept_dims, kept_labels);
    std::size_t base = 0;
    for (std::size_t i = 0; i < sites.size(); i++) {
        base += values[i] * layout.stride(sites[i]);
    }
    if (state.is_null()) {
        return StateVector::null_state(sub);
    }
    auto amps = state.amps();
    std::vector<Complex> out(sub.total_dim());
    for (std::size_t f = 0; f < out.size(); f++) {
        std::size_t src = base;
        for (std::size_t i = 0; i < kept_sites.size(); i++) {
            src += ((f / sub.stride(i)) % sub.dim(i)) * layout.stride(kept_sites[i]);
        }
        out[f] = amps[src];
    }
    return StateVector(sub, std::move(out));
}

Complex inner_product(const StateVector &x, const StateVector &y) {
    if (!(x.layout() == y.layout())) {
        throw ShapeError("inner_product: layouts differ");
    }
    auto xa = x.amps();
    auto ya = y.amps();
    Complex s = 0;
    for (std::size_t i = 0; i < xa.size(); i++) {
        s += std::conj(xa[i]) * ya[i];
    }
    return s;
}

double fidelity(const StateVector &x, const StateVector &y) {
    return std::norm(inner_product(x, y));
}

}  // namespace wdistill
