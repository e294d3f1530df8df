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

#ifndef WDISTILL_ERRORS_H
#define WDISTILL_ERRORS_H

#include <stdexcept>
#include <string>

namespace wdistill {

/// Operand dimensions do not line up.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input violates a documented invariant (normalization, hermiticity, ranges).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Basis index or occupation outside a site's local dimension.
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// A W-class coefficient is zero, so the state is not an N-party W-class state.
struct DegenerateCoefficientError : ValidationError {
    using ValidationError::ValidationError;
};

/// An operation was asked to do something its caller should never request,
/// e.g. building a step unitary for the user holding the smallest coefficient.
struct MisuseError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A state handed to an operation lies outside the sector the operation requires.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Requested dynamics are outside what the closed-form path supports.
struct UnsupportedModeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The Fock cutoff cannot hold the populated photon levels.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical result breached its tolerance.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wdistill

#endif
