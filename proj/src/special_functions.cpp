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

#include "opgrowth/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "opgrowth/error.hpp"

namespace opgrowth {

std::vector<double> bessel_j_sequence(int n_max, double x) {
  if (n_max < 0) fail(ErrorCode::invalid_argument, "bessel order must be >= 0");
  if (!std::isfinite(x)) {
    fail(ErrorCode::invalid_argument, "bessel argument must be finite");
  }
  std::vector<double> j(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double ax = std::abs(x);
  if (ax > 1e6) {
    fail(ErrorCode::invalid_argument, "bessel argument too large");
  }

  // Start well above both the requested order and the turning point n ~ x.
  const double top = std::max<double>(n_max, ax);
  int start = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
  start += start & 1;

  std::vector<double> back(static_cast<std::size_t>(start) + 2, 0.0);
  back[start] = 1.0;
  const double two_over_x = 2.0 / ax;
  for (int k = start; k >= 1; --k) {
    back[k - 1] = k * two_over_x * back[k] - back[k + 1];
    if (std::abs(back[k - 1]) > 1e250) {
      for (int m = k - 1; m <= start; ++m) back[m] *= 1e-250;
    }
  }
  double sum = back[0];
  for (int k = 2; k <= start; k += 2) sum += 2.0 * back[k];
  for (int k = 0; k <= n_max; ++k) {
    double v = back[k] / sum;
    if (x < 0.0 && (k & 1)) v = -v;
    j[k] = v;
  }
  return j;
}

double bessel_j(int n, double x) {
  if (n < 0) {
    const double v = bessel_j(-n, x);
    return (n & 1) ? -v : v;
  }
  return bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
}

double lambert_w(double x) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  if (std::isnan(x) || x < -inv_e) {
    fail(ErrorCode::invalid_argument,
         "lambert_w argument must be >= -1/e, got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == -inv_e) return -1.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.25) {
    // Branch-point expansion in p = sqrt(2(e x + 1)).
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = std::log1p(x);
    w *= 1.0 - std::log1p(w) / (2.0 + w);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley iteration on f(w) = w e^w - x.
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace opgrowth
