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

#include <cmath>

#include <doctest.h>

#include "kron_oracle.hpp"
#include "opgrowth/dense_oracle.hpp"
#include "opgrowth/error.hpp"
#include "opgrowth/lanczos.hpp"

using namespace opgrowth;

TEST_CASE("transverse-field Ising, Z observable: b_n = 2 sqrt(n)") {
  auto seq = run_lanczos(HamiltonianSpec::transverse(1.0),
                         ObservableSpec::parse("z"), 16);
  REQUIRE(seq.depth() == 16);
  CHECK(seq.complete());
  CHECK(seq.b[0] == 0.0);
  CHECK(seq.b[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(seq.b[2] == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  for (int n = 1; n <= 16; ++n) {
    CHECK(std::abs(seq.b[n] - 2.0 * std::sqrt(n)) < 1e-10);
  }
  CHECK(seq.meta.term_counts.size() == 17);
}

TEST_CASE("hand-derived prefixes") {
  // h = 1, g = 0, X: [H, X_0] touches two bonds, b_1^2 = 8.
  auto x = run_lanczos(HamiltonianSpec::transverse(1.0),
                       ObservableSpec::parse("x"), 2);
  CHECK(x.b[1] == doctest::Approx(std::sqrt(8.0)));
  // Adding g = 1 gives a third anticommuting term, b_1^2 = 12.
  auto tl = run_lanczos(HamiltonianSpec::uniform(1.0, 1.0),
                        ObservableSpec::parse("x"), 1);
  CHECK(tl.b[1] == doctest::Approx(std::sqrt(12.0)));
  // h = 0, Z commutes with H.
  auto frozen = run_lanczos(HamiltonianSpec::transverse(0.0),
                            ObservableSpec::parse("z"), 5);
  CHECK(frozen.depth() == 0);
  CHECK(frozen.meta.status == LanczosStatus::krylov_exhausted);
  CHECK(frozen.meta.terminated_at == 1);
}

TEST_CASE("matches the open-chain Kronecker oracle") {
  const HamiltonianSpec models[] = {HamiltonianSpec::transverse(1.0),
                                    HamiltonianSpec::uniform(1.0, 1.0),
                                    HamiltonianSpec::uniform(0.6, -0.3),
                                    HamiltonianSpec::single_site(1.0, 0.1)};
  for (const auto& H : models) {
    for (const char* name : {"x", "y", "z", "zz", "xx"}) {
      const auto O = ObservableSpec::parse(name);
      // Sites -4..4; each step grows the support by at most one site per side.
      const auto oracle = testsupport::open_chain_lanczos(H, O.string(), -4, 9, 4);
      const auto seq = run_lanczos(H, O, 4);
      REQUIRE(seq.b.size() == oracle.size());
      for (std::size_t n = 1; n < oracle.size(); ++n) {
        CHECK(std::abs(seq.b[n] - oracle[n]) < 1e-10);
      }
    }
  }
}

TEST_CASE("matches the periodic dense oracle") {
  for (double g : {0.0, 1.0}) {
    for (const char* name : {"x", "z"}) {
      const auto H = HamiltonianSpec::uniform(1.0, g);
      const auto O = ObservableSpec::parse(name);
      const auto dense = dense_lanczos_oracle(H, O, 5, 3);
      const auto sparse = run_lanczos(H, O, 3);
      CHECK(dense.meta.source == "dense_oracle");
      for (int n = 1; n <= 3; ++n) {
        CHECK(std::abs(dense.b[n] - sparse.b[n]) < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(dense_lanczos_oracle(HamiltonianSpec::transverse(1.0),
                                       ObservableSpec::parse("x"), 9, 3),
                  Error);
  CHECK_THROWS_AS(dense_lanczos_oracle(HamiltonianSpec::transverse(1.0),
                                       ObservableSpec::parse("x"), 1, 3),
                  Error);
}

TEST_CASE("self-duality of X and ZZ at g = 0") {
  const auto H = HamiltonianSpec::transverse(1.0);
  auto x = run_lanczos(H, ObservableSpec::parse("x"), 14);
  auto zz = run_lanczos(H, ObservableSpec::parse("zz"), 14);
  for (int n = 1; n <= 14; ++n) CHECK(std::abs(x.b[n] - zz.b[n]) < 1e-10);
}

TEST_CASE("Krylov basis stays orthonormal") {
  const auto H = HamiltonianSpec::uniform(1.0, 1.0);
  CHECK(krylov_basis_overlap_check(H, ObservableSpec::parse("x"), 10) < 1e-12);
  CHECK(dense_overlap_check(H, ObservableSpec::parse("x"), 6, 6) < 1e-12);
  CHECK_THROWS_AS(krylov_basis_overlap_check(H, ObservableSpec::parse("x"), 21),
                  Error);
}

TEST_CASE("bit-identical across thread counts") {
  const auto H = HamiltonianSpec::uniform(1.0, 1.0);
  const auto O = ObservableSpec::parse("x");
  auto one = run_lanczos(H, O, 14, {.threads = 1});
  auto four = run_lanczos(H, O, 14, {.threads = 4});
  CHECK(one.b == four.b);
  CHECK(one.meta.term_counts == four.meta.term_counts);
}

TEST_CASE("term budget ends the run with a status") {
  auto seq = run_lanczos(HamiltonianSpec::uniform(1.0, 1.0),
                         ObservableSpec::parse("x"), 30, {.max_terms = 500});
  CHECK(seq.meta.status == LanczosStatus::memory_budget_exceeded);
  CHECK(seq.depth() + 1 == seq.meta.terminated_at);
  CHECK(seq.depth() >= 3);
  const auto j = to_json(seq.meta);
  CHECK(j.at("status") == "memory_budget_exceeded");
  CHECK(j.at("observable") == "x");
}

TEST_CASE("pruning trades accuracy for size") {
  const auto H = HamiltonianSpec::uniform(1.0, 1.0);
  const auto O = ObservableSpec::parse("x");
  auto exact = run_lanczos(H, O, 12);
  auto pruned = run_lanczos(H, O, 12, {.epsilon = 1e-3});
  CHECK(pruned.meta.discarded_weight > 0.0);
  CHECK(pruned.meta.term_counts.back() < exact.meta.term_counts.back());
  CHECK(std::abs(pruned.b[3] - exact.b[3]) < 1e-12);
}

TEST_CASE("explicit initial operator") {
  auto o = OperatorVector::from_terms({{PauliString::parse("X@0"), std::sqrt(0.5)},
                                       {PauliString::parse("Z@0 Z@1"), std::sqrt(0.5)}});
  auto seq = run_lanczos(HamiltonianSpec::transverse(1.0), o, 4);
  CHECK(seq.depth() >= 1);
  const auto j = to_json(seq.meta);
  CHECK(j.at("observable").is_null());
  CHECK(j.at("initial_operator") == "2 terms");
  CHECK_THROWS_AS(run_lanczos(HamiltonianSpec::transverse(1.0),
                              OperatorVector(PauliString::parse("X@0"), 2.0), 3),
                  Error);
  CHECK_THROWS_AS(run_lanczos(HamiltonianSpec::transverse(1.0),
                              ObservableSpec::parse("x"), 0),
                  Error);
}
