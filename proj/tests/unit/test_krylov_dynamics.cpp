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
#include "opgrowth/krylov_dynamics.hpp"
#include "opgrowth/solvable.hpp"
#include "opgrowth/special_functions.hpp"

using namespace opgrowth;

TEST_CASE("type II chain reproduces the Gaussian") {
  const auto s = SolvableType::type_II(1.0);
  const auto grid = uniform_grid(3.0, 0.25);
  CHECK(grid.size() == 13);
  const auto st = evolve(closed_form_sequence(s, 120), grid, 120);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(st.c[i] - closed_form_autocorrelation(s, grid[i])) < 1e-9);
    CHECK(std::abs(st.depth[i] - closed_form_mean_depth(s, grid[i])) < 1e-8);
    for (int n = 0; n < 30; ++n) {
      CHECK(std::abs(st.phi[i][n] - closed_form_phi(s, n, grid[i])) < 1e-9);
    }
  }
  CHECK(st.certified_until() == 3.0);
  CHECK(st.max_unitarity_error() < 1e-10);
}

TEST_CASE("unitarity for an irregular sequence") {
  std::vector<double> b{0.0};
  for (int n = 1; n <= 300; ++n) b.push_back(1.0 + 0.5 * std::sin(1.7 * n) + 0.01 * n);
  const auto st = evolve(b, uniform_grid(20.0, 0.5), 300);
  for (double p : st.norm_sq) CHECK(std::abs(p - 1.0) < 1e-10);
  CHECK(st.total_steps > 0);
}

TEST_CASE("fourth-order convergence") {
  const auto s = SolvableType::type_III(1.0, 1.0);
  const auto b = closed_form_sequence(s, 200);
  const std::vector<double> grid{0.0, 1.5};
  const double exact = closed_form_autocorrelation(s, 1.5);
  EvolveOptions o;
  o.step = 0.02;
  const double e1 = std::abs(evolve(b, grid, 200, o).c.back() - exact);
  o.step = 0.01;
  const double e2 = std::abs(evolve(b, grid, 200, o).c.back() - exact);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("the wall does not matter while leakage is small") {
  const auto b = closed_form_sequence(SolvableType::type_I(1.0), 200);
  // The front moves at 2 alpha: it reaches n = 60 near t = 30.
  const auto grid = uniform_grid(40.0, 1.0);
  const auto near = evolve(b, grid, 60);
  const auto far = evolve(b, grid, 200);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (near.certified[i]) CHECK(std::abs(near.c[i] - far.c[i]) < 1e-9);
  }
  CHECK(near.certified_until() > 15.0);
  CHECK(near.certified_until() < 40.0);
  CHECK(far.certified_until() == 40.0);
}

TEST_CASE("depth slope") {
  const auto b = closed_form_sequence(SolvableType::type_II(1.0), 80);
  const auto st = evolve(b, uniform_grid(2.0, 0.1), 80);
  // d(t^2)/dt averaged over [1, 2]
  CHECK(depth_slope(st, 1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK_THROWS_AS(depth_slope(st, 5.0, 6.0), Error);
}

TEST_CASE("extension rules") {
  std::vector<double> b{0.0};
  for (int n = 1; n <= 20; ++n) b.push_back(n / (0.4 * lambert_w(n) + 0.7));
  auto same = extend_sequence(b, 10, Extension::none);
  CHECK(same.b.size() == 11);
  CHECK_THROWS_AS(extend_sequence(b, 30, Extension::none), Error);
  auto frozen = extend_sequence(b, 30, Extension::freeze_last);
  CHECK(frozen.b[30] == b[20]);
  auto w = extend_sequence(b, 60, Extension::linear_over_w);
  CHECK(w.slope == doctest::Approx(0.4));
  CHECK(w.intercept == doctest::Approx(0.7));
  CHECK(w.b[60] == doctest::Approx(60 / (0.4 * lambert_w(60) + 0.7)));
  CHECK(to_json(w).at("fit").at("window")[0] == 10);
  CHECK(parse_extension("freeze_last") == Extension::freeze_last);
  CHECK_THROWS_AS(parse_extension("linear"), Error);
}

TEST_CASE("input validation") {
  const auto b = closed_form_sequence(SolvableType::type_I(1.0), 10);
  CHECK_THROWS_AS(evolve(b, {0.0, 1.0}, 11), Error);
  CHECK_THROWS_AS(evolve(b, {1.0, 0.5}, 10), Error);
  CHECK_THROWS_AS(evolve(b, {}, 10), Error);
  auto bad = b;
  bad[4] = 0.0;
  CHECK_THROWS_AS(evolve(bad, {0.0, 1.0}, 10), Error);
  const auto st = evolve(b, {0.0}, 10);
  CHECK(st.c.front() == 1.0);
  CHECK(st.total_steps == 0);
}
