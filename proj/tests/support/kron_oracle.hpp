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

#include <Eigen/Dense>

#include "opgrowth/model.hpp"
#include "opgrowth/operator_vector.hpp"
#include "opgrowth/pauli.hpp"

namespace testsupport {

using DenseMatrix = Eigen::MatrixXcd;

// Open chain of `sites` spins covering lattice sites origin .. origin+sites-1,
// built from 2x2 Pauli matrices with Kronecker products (site origin is the
// leftmost factor).
DenseMatrix pauli_matrix(const opgrowth::PauliString& s, int origin,
                         int sites);
DenseMatrix operator_matrix(const opgrowth::OperatorVector& a, int origin,
                            int sites);

// Every bond, X and Z term of H lying inside the open window.
DenseMatrix open_chain_hamiltonian(const opgrowth::HamiltonianSpec& H,
                                   int origin, int sites);

// Tr(A^dagger B) / D.
std::complex<double> trace_inner(const DenseMatrix& a, const DenseMatrix& b);

// Complex Lanczos recursion with explicit commutators on the open window.
// Exact for the infinite chain while O_n stays clear of the window edges.
std::vector<double> open_chain_lanczos(const opgrowth::HamiltonianSpec& H,
                                       const opgrowth::PauliString& o0,
                                       int origin, int sites, int n_max);

}  // namespace testsupport
