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

#include <random>

#include <doctest.h>

#include "kron_oracle.hpp"
#include "opgrowth/error.hpp"
#include "opgrowth/pauli.hpp"
#include "random_ops.hpp"

using namespace opgrowth;

namespace {

PhasedString times(const PhasedString& a, const PhasedString& b) {
  PhasedString p = multiply(a.string, b.string);
  p.phase = (p.phase + a.phase + b.phase) & 3;
  return p;
}

const std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

TEST_CASE("parse and print") {
  auto s = PauliString::parse("X@0 Z@2");
  CHECK(s.window_start() == 0);
  CHECK(s.window_length() == 3);
  CHECK(s.at(0) == Pauli::X);
  CHECK(s.at(1) == Pauli::I);
  CHECK(s.at(2) == Pauli::Z);
  CHECK(s.to_string() == "X@0 Z@2");
  CHECK(PauliString::parse("Z@2 X@0") == s);
  CHECK(PauliString::parse("I").is_identity());
  CHECK(PauliString::parse("").is_identity());
  CHECK(PauliString::parse("Y@-3 Y@4").window_length() == 8);
  CHECK_THROWS_AS(PauliString::parse("Q@1"), Error);
  CHECK_THROWS_AS(PauliString::parse("X@1 Z@1"), Error);
  CHECK_THROWS_AS(PauliString::parse("X1"), Error);
}

TEST_CASE("single-site products follow Y = iXZ") {
  const auto X = PauliString::single(0, Pauli::X);
  const auto Y = PauliString::single(0, Pauli::Y);
  const auto Z = PauliString::single(0, Pauli::Z);
  // XZ = -iY
  CHECK(multiply(X, Z) == PhasedString{Y, 3});
  CHECK(multiply(Z, X) == PhasedString{Y, 1});
  CHECK(multiply(X, Y) == PhasedString{Z, 1});
  CHECK(multiply(Y, Z) == PhasedString{X, 1});
  CHECK(multiply(Y, Y) == PhasedString{PauliString(), 0});
  CHECK(commutation_parity(X, Z) == 1);
  CHECK(commutation_parity(X, X) == 0);
}

TEST_CASE("commutator of a bond with a transverse term") {
  auto zz = PauliString::parse("Z@0 Z@1");
  auto x0 = PauliString::parse("X@0");
  auto c = commutator(zz, x0);
  REQUIRE(c.has_value());
  // Z0 Z1 X0 = i Y0 Z1
  CHECK(c->string == PauliString::parse("Y@0 Z@1"));
  CHECK(c->phase == 1);
  CHECK_FALSE(commutator(zz, PauliString::parse("Z@5")).has_value());
  CHECK_FALSE(commutator(zz, PauliString::parse("X@0 X@1")).has_value());
}

TEST_CASE("random products: associativity and involution") {
  std::mt19937_64 rng(20261016);
  for (int k = 0; k < 10000; ++k) {
    const int lo = static_cast<int>(rng() % 200) - 100;
    // Keep the combined support inside one 128-site window.
    const int span = 1 + static_cast<int>(rng() % 64);
    PhasedString a{testsupport::random_string(rng, lo, span), 0};
    PhasedString b{testsupport::random_string(rng, lo + static_cast<int>(rng() % 30), span), 0};
    PhasedString c{testsupport::random_string(rng, lo - static_cast<int>(rng() % 30), span), 0};
    REQUIRE(times(times(a, b), c) == times(a, times(b, c)));
    REQUIRE(multiply(a.string, a.string) == PhasedString{PauliString(), 0});
    const int parity = commutation_parity(a.string, b.string);
    PhasedString ab = times(a, b), ba = times(b, a);
    REQUIRE(ab.string == ba.string);
    REQUIRE(((ab.phase - ba.phase) & 3) == 2 * parity);
  }
}

TEST_CASE("products agree with Kronecker matrices") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    auto a = testsupport::random_string(rng, 0, 5);
    auto b = testsupport::random_string(rng, 0, 5);
    const auto p = multiply(a, b);
    const testsupport::DenseMatrix lhs = testsupport::pauli_matrix(a, 0, 5) *
                     testsupport::pauli_matrix(b, 0, 5);
    const testsupport::DenseMatrix rhs = kI[p.phase] * testsupport::pauli_matrix(p.string, 0, 5);
    REQUIRE((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("canonical order and hashing") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2000; ++k) {
    auto a = testsupport::random_string(rng, -10, 20);
    auto b = testsupport::random_string(rng, -10, 20);
    CHECK_FALSE(canonical_less(a, a));
    if (a == b) {
      CHECK(a.hash() == b.hash());
    } else {
      CHECK(canonical_less(a, b) != canonical_less(b, a));
    }
    // Translation changes the string, not its shape.
    auto shifted = PauliString::from_masks(a.window_start() + 3, a.x_mask(),
                                           a.z_mask());
    CHECK(shifted.window_length() == a.window_length());
    if (!a.is_identity()) CHECK_FALSE(shifted == a);
  }
}

TEST_CASE("window bookkeeping") {
  auto s = PauliString::from_masks(5, Mask{0b1000}, Mask{0b100000});
  CHECK(s.window_start() == 8);
  CHECK(s.window_end() == 10);
  CHECK(s.weight() == 2);
  auto wide = PauliString::from_masks(0, Mask{1}, Mask{1} << 127);
  CHECK(wide.window_length() == 128);
  CHECK(wide.at(127) == Pauli::Z);
}
