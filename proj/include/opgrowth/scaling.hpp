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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace opgrowth {

// Transforms fitted to a straight line y = slope * x + intercept:
//   linear_in_n       x = n,     y = b_n
//   linear_in_sqrt_n  x = sqrt n, y = b_n
//   n_over_bn_vs_W    x = W(n),  y = n / b_n
enum class FitKind { linear_in_n, linear_in_sqrt_n, n_over_bn_vs_W };

std::string fit_kind_name(FitKind k);
FitKind parse_fit_kind(std::string_view s);

struct FitPoint {
  int n = 0;
  double x = 0.0;
  double y = 0.0;
  double fitted = 0.0;
  double residual = 0.0;
  double w = 0.0;  // W(n), emitted for every kind
};

struct ScalingReport {
  FitKind kind = FitKind::linear_in_n;
  int n_lo = 0;
  int n_hi = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  // rms_residual / (max y - min y) over the window; comparable across kinds.
  double normalized_rms_residual = 0.0;
  // Quadratic coefficient c2 of a least-squares fit of the residuals in x,
  // as 2 c2 (x_hi - x_lo)^2 / (y_hi - y_lo): the bow of the data relative to
  // the rise of the line. Signed; positive is convex.
  double curvature_diagnostic = 0.0;
  // Mean second difference of the residuals divided by rms_residual.
  double second_difference_diagnostic = 0.0;
  std::vector<FitPoint> points;
};

/// Least-squares line through the transformed b_n over [n_lo, n_hi]. A
/// negative bound selects the default window, the upper half of the
/// available depth. Needs at least 4 points.
ScalingReport fit_scaling(const std::vector<double>& b, FitKind kind,
                          int n_lo = -1, int n_hi = -1);

nlohmann::json to_json(const ScalingReport& r);

struct CollapseRun {
  double g = 0.0;
  std::vector<double> b;  // b[0..N], same N for every run
};

struct CollapseOptions {
  double threshold = 0.2;  // relative departure that marks the crossover
  int n_min = 1;
  // Mean-depth growth rate of the reference dynamics; when > 0 each n_c is
  // also reported as a crossover time t_c = n_c / depth_slope.
  double depth_slope = 0.0;
};

struct CollapseCurve {
  double g = 0.0;
  std::vector<double> scaled;  // g^-2 (b_n(g) - b_n(0)) / b_n(0); [0] is NaN
  int n_c = -1;                // first n past the threshold, -1 if none
  double n_c_interpolated = -1.0;
};

struct CollapseReport {
  double threshold = 0.0;
  double reference_g = 0.0;  // smallest |g|; the curve others are compared to
  std::vector<CollapseCurve> curves;  // ascending |g|
  int window_lo = 0;
  int window_hi = 0;  // shared pre-crossover window
  double pairwise_collapse_error = 0.0;
  // n_c (interpolated) = slope * |ln g| + intercept over detected curves.
  int detected = 0;
  double n_c_slope = 0.0;
  double n_c_intercept = 0.0;
  std::vector<double> shifts_per_decade;  // consecutive detected curves
  double shift_relative_spread = 0.0;     // (max - min) / mean
  double depth_slope = 0.0;
};

CollapseReport collapse(const std::vector<double>& b_ref,
                        const std::vector<CollapseRun>& runs,
                        const CollapseOptions& options = {});

nlohmann::json to_json(const CollapseReport& r);

// "n,g,scaled_delta_b" rows for every curve and n >= 1.
std::string collapse_csv(const CollapseReport& r);

}  // namespace opgrowth
