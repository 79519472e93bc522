// Copyright 2026 The opgrowth Authors
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

#pragma once

#include "opgrowth/lanczos.hpp"
#include "opgrowth/model.hpp"
#include "opgrowth/pauli.hpp"

namespace opgrowth {

// 2^L x 2^L complex matrices; L = 8 is 1 MiB per operator.
inline constexpr int kMaxDenseSites = 8;

/// Brute-force Lanczos on a periodic chain of `sites` spins, with explicit
/// matrix commutators and the normalized trace inner product. The complex
/// recursion is run as written, without the real-form reduction. Agrees with
/// the infinite-chain engine until the operator support wraps (n <~ L - 2).
LanczosSequence dense_lanczos_oracle(const HamiltonianSpec& H,
                                     const ObservableSpec& O, int sites,
                                     int n_max);

// O0 must be supported on sites [0, sites).
LanczosSequence dense_lanczos_oracle(const HamiltonianSpec& H,
                                     const PauliString& O0, int sites,
                                     int n_max);

/// Max |(O_i|O_j)| over 0 <= i < j <= n_check for the dense recursion.
double dense_overlap_check(const HamiltonianSpec& H, const ObservableSpec& O,
                           int sites, int n_check);

}  // namespace opgrowth
