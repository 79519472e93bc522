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

#include "opgrowth/error.hpp"
#include "opgrowth/solvable.hpp"

using namespace opgrowth;

namespace {

const SolvableType kTypes[] = {
    SolvableType::type_I(1.0),         SolvableType::type_I(0.6),
    SolvableType::type_II(1.0),        SolvableType::type_II(2.0),
    SolvableType::type_III(1.0, 1.0),  SolvableType::type_III(0.7, 2.5),
    SolvableType::type_III(1.3, 0.4)};

}  // namespace

TEST_CASE("coefficients") {
  CHECK(closed_form_b(SolvableType::type_I(1.5), 7) == 1.5);
  CHECK(closed_form_b(SolvableType::type_II(2.0), 4) == 4.0);
  CHECK(closed_form_b(SolvableType::type_III(1.0, 1.0), 5) == 5.0);
  CHECK(closed_form_b(SolvableType::type_III(1.0, 3.0), 2) == doctest::Approx(std::sqrt(8.0)));
  CHECK(closed_form_sequence(SolvableType::type_II(1.0), 3).size() == 4);
  CHECK_THROWS_AS(SolvableType::type_II(0.0), Error);
  CHECK_THROWS_AS(SolvableType::type_III(1.0, -1.0), Error);
  CHECK(SolvableType::parse_kind("type_iii") == SolvableType::Kind::type_III);
  CHECK(SolvableType::parse_kind("II") == SolvableType::Kind::type_II);
  CHECK_THROWS_AS(SolvableType::parse_kind("IV"), Error);
}

TEST_CASE("explicit formulas") {
  for (double t : {0.1, 0.8, 2.0, 3.7}) {
    // type I: (n+1) J_{n+1}(2at) / (at)
    for (int n = 0; n < 8; ++n) {
      const double ref = (n + 1) * std::cyl_bessel_j(n + 1.0, 2 * t) / t;
      CHECK(closed_form_phi(SolvableType::type_I(1.0), n, t) ==
            doctest::Approx(ref).epsilon(1e-12));
    }
    // type II: Gaussian autocorrelation, depth (at)^2
    CHECK(closed_form_autocorrelation(SolvableType::type_II(2.0), t) ==
          doctest::Approx(std::exp(-2 * t * t)).epsilon(1e-13));
    CHECK(closed_form_mean_depth(SolvableType::type_II(1.5), t) ==
          doctest::Approx(2.25 * t * t));
    // type III: sech^eta, depth eta sinh^2
    CHECK(closed_form_autocorrelation(SolvableType::type_III(1.0, 2.0), t) ==
          doctest::Approx(std::pow(1 / std::cosh(t), 2.0)).epsilon(1e-13));
    CHECK(closed_form_phi(SolvableType::type_III(1.0, 1.0), 3, t) ==
          doctest::Approx(std::pow(std::tanh(t), 3) / std::cosh(t)).epsilon(1e-13));
    CHECK(closed_form_mean_depth(SolvableType::type_III(1.0, 2.0), t) ==
          doctest::Approx(2 * std::sinh(t) * std::sinh(t)));
  }
  CHECK(gaussian_cz(1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(brandt_jacoby_cx(0.0) == 1.0);
  CHECK(brandt_jacoby_cx(0.4) ==
        doctest::Approx(std::pow(std::cyl_bessel_j(0.0, 1.6), 2) +
                        std::pow(std::cyl_bessel_j(1.0, 1.6), 2)));
}

TEST_CASE("closed forms solve the chain equations") {
  // d/dt phi_n = b_n phi_{n-1} - b_{n+1} phi_{n+1}, by central differences.
  const double dt = 1e-4;
  for (const auto& s : kTypes) {
    for (double t : {0.3, 1.1, 2.6}) {
      const auto lo = closed_form_phi_all(s, 40, t - dt);
      const auto mid = closed_form_phi_all(s, 41, t);
      const auto hi = closed_form_phi_all(s, 40, t + dt);
      for (int n = 0; n <= 30; ++n) {
        const double lhs = (hi[n] - lo[n]) / (2 * dt);
        const double rhs = (n > 0 ? closed_form_b(s, n) * mid[n - 1] : 0.0) -
                           closed_form_b(s, n + 1) * mid[n + 1];
        CHECK(std::abs(lhs - rhs) < 1e-6);
      }
    }
  }
}

TEST_CASE("normalization and depth") {
  for (const auto& s : kTypes) {
    for (double t : {0.5, 1.5}) {
      const auto phi = closed_form_phi_all(s, 400, t);
      double norm = 0, depth = 0;
      for (int n = 0; n <= 400; ++n) {
        norm += phi[n] * phi[n];
        depth += n * phi[n] * phi[n];
      }
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(depth == doctest::Approx(closed_form_mean_depth(s, t)).epsilon(1e-10));
      CHECK(phi[0] == doctest::Approx(closed_form_autocorrelation(s, t)));
    }
  }
  CHECK(closed_form_phi(SolvableType::type_II(1.0), 0, 0.0) == 1.0);
  CHECK(closed_form_phi(SolvableType::type_II(1.0), 2, 0.0) == 0.0);
  CHECK_THROWS_AS(closed_form_phi(SolvableType::type_II(1.0), 2, -1.0), Error);
}

TEST_CASE("type I depth grows linearly") {
  const auto s = SolvableType::type_I(1.0);
  const double slope = (closed_form_mean_depth(s, 400.0) -
                        closed_form_mean_depth(s, 300.0)) / 100.0;
  CHECK(slope == doctest::Approx(type_I_depth_slope(1.0)).epsilon(2e-3));
  CHECK(type_I_depth_slope(2.0) == doctest::Approx(32.0 / (3.0 * M_PI)));
}
