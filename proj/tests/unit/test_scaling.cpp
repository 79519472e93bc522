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
#include "opgrowth/scaling.hpp"
#include "opgrowth/special_functions.hpp"

using namespace opgrowth;

namespace {

std::vector<double> make(int depth, double (*f)(int)) {
  std::vector<double> b{0.0};
  for (int n = 1; n <= depth; ++n) b.push_back(f(n));
  return b;
}

}  // namespace

TEST_CASE("exact lines fit with zero residual") {
  auto sq = make(30, [](int n) { return 2.0 * std::sqrt(double(n)) + 0.3; });
  auto r = fit_scaling(sq, FitKind::linear_in_sqrt_n);
  CHECK(r.n_lo == 15);
  CHECK(r.n_hi == 30);
  CHECK(r.slope == doctest::Approx(2.0));
  CHECK(r.intercept == doctest::Approx(0.3));
  CHECK(r.rms_residual < 1e-12);
  CHECK(std::abs(r.curvature_diagnostic) < 1e-9);

  auto w = make(30, [](int n) { return n / (0.5 * lambert_w(n) + 0.2); });
  auto rw = fit_scaling(w, FitKind::n_over_bn_vs_W, 8, 30);
  CHECK(rw.slope == doctest::Approx(0.5));
  CHECK(rw.intercept == doctest::Approx(0.2));
  CHECK(rw.points.size() == 23);
  CHECK(rw.points.front().w == doctest::Approx(lambert_w(8)));
  CHECK(std::abs(rw.curvature_diagnostic) < 1e-9);

  auto lin = make(10, [](int n) { return 1.0 + n * 0.5; });
  CHECK(fit_scaling(lin, FitKind::linear_in_n, 1, 10).rms_residual < 1e-13);
}

TEST_CASE("curvature sign and scale") {
  // y = x^2 over [0, 1]: residual parabola c2 = 1, span 1.
  std::vector<double> b{0.0};
  for (int n = 1; n <= 101; ++n) b.push_back(std::pow((n - 1) / 100.0, 2));
  auto r = fit_scaling(b, FitKind::linear_in_n, 1, 101);
  // Range in x is 100, y(x) = ((x-1)/100)^2 has c2 = 1e-4: 2 c2 100^2 / 1 = 2
  CHECK(r.curvature_diagnostic == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.second_difference_diagnostic > 0.0);
  CHECK(r.normalized_rms_residual > 0.0);
  // sqrt(n) is concave in n
  auto c = fit_scaling(make(40, [](int n) { return std::sqrt(double(n)); }),
                       FitKind::linear_in_n, 1, 40);
  CHECK(c.curvature_diagnostic < 0.0);
}

TEST_CASE("fit windows are validated") {
  auto b = make(10, [](int n) { return double(n); });
  CHECK_THROWS_AS(fit_scaling(b, FitKind::linear_in_n, 8, 10), Error);
  CHECK_THROWS_AS(fit_scaling(b, FitKind::linear_in_n, 0, 10), Error);
  CHECK_THROWS_AS(fit_scaling(b, FitKind::linear_in_n, 3, 11), Error);
  CHECK(parse_fit_kind("n_over_bn_vs_W") == FitKind::n_over_bn_vs_W);
  CHECK_THROWS_AS(parse_fit_kind("log"), Error);
  CHECK(to_json(fit_scaling(b, FitKind::linear_in_n)).at("fit_kind") == "linear_in_n");
}

TEST_CASE("synthetic crossover collapses with constant shift per decade") {
  // b_n(g) = b_n(0) (1 + g^2 f + g^4 f^2), f = exp(n / kappa): the scaled
  // deviation is f (1 + g^2 f), leaving the collapse at g^2 f ~ threshold.
  const double kappa = 2.0;
  const int depth = 60;
  auto b0 = make(depth, [](int n) { return 2.0 * std::sqrt(double(n)); });
  std::vector<CollapseRun> runs;
  for (double g : {1e-1, 1e-4, 1e-2, 1e-3}) {
    CollapseRun run{g, b0};
    for (int n = 1; n <= depth; ++n) {
      const double f = std::exp(n / kappa);
      run.b[n] = b0[n] * (1 + g * g * f + g * g * g * g * f * f);
    }
    runs.push_back(run);
  }
  auto r = collapse(b0, runs, {.threshold = 0.2, .n_min = 1, .depth_slope = 2.0});
  REQUIRE(r.curves.size() == 4);
  CHECK(r.reference_g == 1e-4);
  CHECK(r.curves.back().g == 1e-1);
  CHECK(r.detected == 3);
  CHECK(r.pairwise_collapse_error < 0.2);
  // n_c = kappa (2 |ln g| + ln 0.2): slope 2 kappa.
  CHECK(r.n_c_slope == doctest::Approx(2 * kappa).epsilon(0.05));
  REQUIRE(r.shifts_per_decade.size() == 2);
  CHECK(r.shifts_per_decade[0] == doctest::Approx(2 * kappa * std::log(10.0)).epsilon(0.05));
  CHECK(r.shift_relative_spread < 0.05);
  CHECK(r.window_hi < r.curves.back().n_c);
  const auto j = to_json(r);
  CHECK(j.contains("curves"));
  const std::string csv = collapse_csv(r);
  CHECK(csv.rfind("n,g,scaled_delta_b\n", 0) == 0);
}

TEST_CASE("collapse input checks") {
  auto b0 = make(10, [](int n) { return double(n); });
  CHECK_THROWS_AS(collapse(b0, {{0.1, b0}}), Error);
  CHECK_THROWS_AS(collapse(b0, {{0.1, b0}, {0.0, b0}}), Error);
  auto short_b = b0;
  short_b.pop_back();
  CHECK_THROWS_AS(collapse(b0, {{0.1, b0}, {0.2, short_b}}), Error);
}
