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

#include "opgrowth/dense_oracle.hpp"

#include <bit>
#include <chrono>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "opgrowth/error.hpp"

namespace opgrowth {
namespace {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

constexpr double kExhaustedRelative = 1e-10;

void check_sites(int sites) {
  if (sites < 2 || sites > kMaxDenseSites) {
    fail(ErrorCode::dimension_cap,
         "dense oracle supports 2.." + std::to_string(kMaxDenseSites) +
             " sites, got " + std::to_string(sites));
  }
}

// Pauli string with per-site masks acting on basis states |s>, bit l = site l:
// P|s> = i^{#Y} (-1)^{popcount(z & s)} |s ^ x>, from Y = i X Z.
Matrix pauli_matrix(int sites, std::uint32_t x, std::uint32_t z) {
  const int dim = 1 << sites;
  Matrix m = Matrix::Zero(dim, dim);
  static constexpr cplx kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx phase = kPhase[std::popcount(x & z) & 3];
  for (int s = 0; s < dim; ++s) {
    const auto us = static_cast<std::uint32_t>(s);
    const double sign = (std::popcount(z & us) & 1) ? -1.0 : 1.0;
    m(static_cast<int>(us ^ x), s) = sign * phase;
  }
  return m;
}

Matrix hamiltonian_matrix(const HamiltonianSpec& H, int sites) {
  const int dim = 1 << sites;
  Matrix h = Matrix::Zero(dim, dim);
  for (int l = 0; l < sites; ++l) {
    const std::uint32_t here = 1u << l;
    const std::uint32_t next = 1u << ((l + 1) % sites);
    h += HamiltonianSpec::coupling_J * pauli_matrix(sites, 0, here | next);
    if (H.h != 0.0) {
      h += HamiltonianSpec::coupling_J * H.h * pauli_matrix(sites, here, 0);
    }
    const double g = H.field_at(l);
    if (g != 0.0) {
      h += HamiltonianSpec::coupling_J * g * pauli_matrix(sites, 0, here);
    }
  }
  return h;
}

Matrix observable_matrix(const PauliString& O0, int sites) {
  if (O0.is_identity()) return Matrix::Identity(1 << sites, 1 << sites);
  if (O0.window_start() < 0 || O0.window_end() >= sites) {
    fail(ErrorCode::invalid_argument,
         "observable " + O0.to_string() + " does not fit on " +
             std::to_string(sites) + " sites");
  }
  const auto shift = O0.window_start();
  const auto x = static_cast<std::uint32_t>(O0.x_mask() << shift);
  const auto z = static_cast<std::uint32_t>(O0.z_mask() << shift);
  return pauli_matrix(sites, x, z);
}

double inner(const Matrix& a, const Matrix& b) {
  // (A|B) = Tr(A^dagger B) / D; real for the Hermitian/anti-Hermitian pairs
  // the recursion produces.
  return (a.conjugate().cwiseProduct(b)).sum().real() /
         static_cast<double>(a.rows());
}

template <class Visit>
void dense_recursion(const Matrix& h, const Matrix& o0, int n_max,
                     Visit&& visit) {
  Matrix previous = Matrix::Zero(o0.rows(), o0.cols());
  Matrix current = o0;
  double b_prev = 0.0, b_largest = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    Matrix a = h * current - current * h;
    if (n >= 2) a -= b_prev * previous;
    const double bn = std::sqrt(std::max(0.0, inner(a, a)));
    if (bn == 0.0 || bn <= kExhaustedRelative * b_largest) {
      visit(n, 0.0, a);
      return;
    }
    a /= bn;
    visit(n, bn, a);
    b_largest = std::max(b_largest, bn);
    previous = std::move(current);
    current = std::move(a);
    b_prev = bn;
  }
}

}  // namespace

LanczosSequence dense_lanczos_oracle(const HamiltonianSpec& H,
                                     const PauliString& O0, int sites,
                                     int n_max) {
  check_sites(sites);
  if (n_max < 1) fail(ErrorCode::invalid_argument, "n_max must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  LanczosSequence seq;
  LanczosMeta& meta = seq.meta;
  meta.model.hamiltonian = H;
  meta.initial_operator = O0.to_string();
  meta.n_max = n_max;
  meta.source = "dense_oracle";
  meta.oracle_sites = sites;
  meta.term_counts.push_back(1);

  const Matrix h = hamiltonian_matrix(H, sites);
  dense_recursion(h, observable_matrix(O0, sites), n_max,
                  [&](int n, double bn, const Matrix&) {
                    if (bn == 0.0) {
                      meta.status = LanczosStatus::krylov_exhausted;
                      meta.terminated_at = n;
                      return;
                    }
                    seq.b.push_back(bn);
                  });
  meta.wall_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return seq;
}

LanczosSequence dense_lanczos_oracle(const HamiltonianSpec& H,
                                     const ObservableSpec& O, int sites,
                                     int n_max) {
  LanczosSequence seq = dense_lanczos_oracle(H, O.string(), sites, n_max);
  seq.meta.model.observable = O;
  seq.meta.initial_operator.clear();
  return seq;
}

double dense_overlap_check(const HamiltonianSpec& H, const ObservableSpec& O,
                           int sites, int n_check) {
  check_sites(sites);
  if (n_check < 1) fail(ErrorCode::invalid_argument, "n_check must be >= 1");
  std::vector<Matrix> basis{observable_matrix(O.string(), sites)};
  dense_recursion(hamiltonian_matrix(H, sites), basis.front(), n_check,
                  [&](int, double bn, const Matrix& a) {
                    if (bn != 0.0) basis.push_back(a);
                  });
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const cplx ov = (basis[i].conjugate().cwiseProduct(basis[j])).sum() /
                      static_cast<double>(basis[i].rows());
      worst = std::max(worst, std::abs(ov));
    }
  }
  return worst;
}

}  // namespace opgrowth
