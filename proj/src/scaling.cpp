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

#include "opgrowth/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "format.hpp"
#include "opgrowth/error.hpp"
#include "opgrowth/special_functions.hpp"

namespace opgrowth {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::window_too_small, "degenerate fit abscissa");
  const double s = sxy / sxx;
  return {s, my - s * mx};
}

// Quadratic coefficient of the least-squares parabola through (x, r), in
// units of r per (x range)^2 / 4: x is mapped onto [-1, 1] first.
double quadratic_coefficient(const std::vector<double>& x,
                             const std::vector<double>& r) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double mid = 0.5 * (*lo + *hi);
  const double half = 0.5 * (*hi - *lo);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(x.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - mid) / half;
    const auto row = static_cast<Eigen::Index>(i);
    v(row, 0) = 1.0;
    v(row, 1) = u;
    v(row, 2) = u * u;
    rhs(row) = r[i];
  }
  const Eigen::VectorXd c = v.colPivHouseholderQr().solve(rhs);
  return c(2);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return (v.size() & 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

std::string fit_kind_name(FitKind k) {
  switch (k) {
    case FitKind::linear_in_sqrt_n:
      return "linear_in_sqrt_n";
    case FitKind::n_over_bn_vs_W:
      return "n_over_bn_vs_W";
    case FitKind::linear_in_n:
      break;
  }
  return "linear_in_n";
}

FitKind parse_fit_kind(std::string_view s) {
  if (s == "linear_in_n") return FitKind::linear_in_n;
  if (s == "linear_in_sqrt_n") return FitKind::linear_in_sqrt_n;
  if (s == "n_over_bn_vs_W") return FitKind::n_over_bn_vs_W;
  fail(ErrorCode::invalid_argument,
       "unknown fit kind '" + std::string(s) +
           "' (expected linear_in_n, linear_in_sqrt_n or n_over_bn_vs_W)");
}

ScalingReport fit_scaling(const std::vector<double>& b, FitKind kind,
                          int n_lo, int n_hi) {
  const int depth = static_cast<int>(b.size()) - 1;
  if (n_hi < 0) n_hi = depth;
  if (n_lo < 0) n_lo = std::max(1, (depth + 1) / 2);
  if (n_lo < 1 || n_hi > depth || n_lo > n_hi) {
    fail(ErrorCode::window_too_small,
         "fit window [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) +
             "] is outside the available n range [1, " +
             std::to_string(depth) + "]");
  }
  if (n_hi - n_lo + 1 < 4) {
    fail(ErrorCode::window_too_small,
         "fit window [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) +
             "] has fewer than 4 points");
  }

  ScalingReport r;
  r.kind = kind;
  r.n_lo = n_lo;
  r.n_hi = n_hi;
  std::vector<double> xs, ys;
  for (int n = n_lo; n <= n_hi; ++n) {
    FitPoint p;
    p.n = n;
    p.w = lambert_w(n);
    switch (kind) {
      case FitKind::linear_in_n:
        p.x = n;
        p.y = b[n];
        break;
      case FitKind::linear_in_sqrt_n:
        p.x = std::sqrt(static_cast<double>(n));
        p.y = b[n];
        break;
      case FitKind::n_over_bn_vs_W:
        if (b[n] == 0.0) {
          fail(ErrorCode::invalid_argument,
               "b_" + std::to_string(n) + " = 0 inside the fit window");
        }
        p.x = p.w;
        p.y = n / b[n];
        break;
    }
    xs.push_back(p.x);
    ys.push_back(p.y);
    r.points.push_back(p);
  }

  const Line line = fit_line(xs, ys);
  r.slope = line.slope;
  r.intercept = line.intercept;
  std::vector<double> res;
  double ss = 0.0;
  for (FitPoint& p : r.points) {
    p.fitted = r.slope * p.x + r.intercept;
    p.residual = p.y - p.fitted;
    res.push_back(p.residual);
    ss += p.residual * p.residual;
  }
  r.rms_residual = std::sqrt(ss / static_cast<double>(res.size()));
  const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());
  const double span = *yhi - *ylo;

  // With x mapped to [-1, 1], c2 (x range)^2 in original units is 4 c2_u.
  const double c2u = quadratic_coefficient(xs, res);
  if (span > 0.0) {
    r.normalized_rms_residual = r.rms_residual / span;
    r.curvature_diagnostic = 2.0 * 4.0 * c2u / span;
  }
  if (r.rms_residual > 0.0) {
    double d2 = 0.0;
    for (std::size_t i = 1; i + 1 < res.size(); ++i) {
      d2 += res[i + 1] - 2.0 * res[i] + res[i - 1];
    }
    r.second_difference_diagnostic =
        d2 / static_cast<double>(res.size() - 2) / r.rms_residual;
  }
  return r;
}

nlohmann::json to_json(const ScalingReport& r) {
  return {{"fit_kind", fit_kind_name(r.kind)},
          {"window", {r.n_lo, r.n_hi}},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"rms_residual", r.rms_residual},
          {"normalized_rms_residual", r.normalized_rms_residual},
          {"curvature_diagnostic", r.curvature_diagnostic},
          {"second_difference_diagnostic", r.second_difference_diagnostic}};
}

CollapseReport collapse(const std::vector<double>& b_ref,
                        const std::vector<CollapseRun>& runs,
                        const CollapseOptions& options) {
  if (runs.size() < 2) {
    fail(ErrorCode::invalid_argument, "collapse needs at least two g values");
  }
  if (!(options.threshold > 0.0) || options.n_min < 1) {
    fail(ErrorCode::invalid_argument, "threshold must be > 0 and n_min >= 1");
  }
  const std::size_t len = runs.front().b.size();
  for (const CollapseRun& run : runs) {
    if (run.b.size() != len) {
      fail(ErrorCode::invalid_argument,
           "collapse runs have incompatible n grids (depths " +
               std::to_string(len - 1) + " and " +
               std::to_string(run.b.size() - 1) + ")");
    }
    if (run.g == 0.0 || !std::isfinite(run.g)) {
      fail(ErrorCode::invalid_argument, "collapse g values must be nonzero");
    }
  }
  if (b_ref.size() < len) {
    fail(ErrorCode::invalid_argument,
         "reference sequence is shorter than the runs");
  }
  const int depth = static_cast<int>(len) - 1;
  if (depth < options.n_min) {
    fail(ErrorCode::window_too_small, "runs are shallower than n_min");
  }
  for (int n = 1; n <= depth; ++n) {
    if (b_ref[n] == 0.0) {
      fail(ErrorCode::invalid_argument,
           "reference b_" + std::to_string(n) + " = 0");
    }
  }

  CollapseReport r;
  r.threshold = options.threshold;
  r.depth_slope = options.depth_slope;
  std::vector<const CollapseRun*> order;
  for (const CollapseRun& run : runs) order.push_back(&run);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return std::abs(a->g) < std::abs(b->g);
  });
  for (const CollapseRun* run : order) {
    CollapseCurve c;
    c.g = run->g;
    c.scaled.assign(len, kNaN);
    for (int n = 1; n <= depth; ++n) {
      c.scaled[n] = (run->b[n] - b_ref[n]) / b_ref[n] / (run->g * run->g);
    }
    r.curves.push_back(std::move(c));
  }
  r.reference_g = r.curves.front().g;
  const std::vector<double>& ref = r.curves.front().scaled;

  for (std::size_t k = 1; k < r.curves.size(); ++k) {
    CollapseCurve& c = r.curves[k];
    double prev = 0.0;
    for (int n = options.n_min; n <= depth; ++n) {
      const double d = ref[n] == 0.0
                           ? (c.scaled[n] == 0.0 ? 0.0 : kNaN)
                           : std::abs(c.scaled[n] - ref[n]) / std::abs(ref[n]);
      if (std::isnan(d) || d > options.threshold) {
        c.n_c = n;
        c.n_c_interpolated =
            (n == options.n_min || std::isnan(d))
                ? n
                : (n - 1) + (options.threshold - prev) / (d - prev);
        break;
      }
      prev = d;
    }
  }

  r.window_lo = options.n_min;
  r.window_hi = depth;
  for (const CollapseCurve& c : r.curves) {
    if (c.n_c > 0) r.window_hi = std::min(r.window_hi, c.n_c - 1);
  }
  if (r.window_hi >= r.window_lo) {
    for (std::size_t a = 0; a < r.curves.size(); ++a) {
      for (std::size_t b = a + 1; b < r.curves.size(); ++b) {
        std::vector<double> gaps;
        for (int n = r.window_lo; n <= r.window_hi; ++n) {
          gaps.push_back(relative_gap(r.curves[a].scaled[n],
                                      r.curves[b].scaled[n]));
        }
        r.pairwise_collapse_error =
            std::max(r.pairwise_collapse_error, median(gaps));
      }
    }
  } else {
    r.pairwise_collapse_error = kNaN;
  }

  std::vector<double> lx, ly;
  const CollapseCurve* last = nullptr;
  for (const CollapseCurve& c : r.curves) {
    if (c.n_c < 0) continue;
    lx.push_back(std::abs(std::log(std::abs(c.g))));
    ly.push_back(c.n_c_interpolated);
    if (last != nullptr) {
      const double decades = std::log10(std::abs(c.g) / std::abs(last->g));
      r.shifts_per_decade.push_back(
          (last->n_c_interpolated - c.n_c_interpolated) / decades);
    }
    last = &c;
  }
  r.detected = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    const Line line = fit_line(lx, ly);
    r.n_c_slope = line.slope;
    r.n_c_intercept = line.intercept;
  }
  if (r.shifts_per_decade.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(r.shifts_per_decade.begin(),
                                              r.shifts_per_decade.end());
    const double mean = std::accumulate(r.shifts_per_decade.begin(),
                                        r.shifts_per_decade.end(), 0.0) /
                        static_cast<double>(r.shifts_per_decade.size());
    r.shift_relative_spread = mean != 0.0 ? (*hi - *lo) / std::abs(mean) : kNaN;
  }
  return r;
}

nlohmann::json to_json(const CollapseReport& r) {
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json curves = nlohmann::json::array();
  for (const CollapseCurve& c : r.curves) {
    nlohmann::json e{{"g", c.g}};
    if (c.n_c > 0) {
      e["n_c"] = c.n_c;
      e["n_c_interpolated"] = c.n_c_interpolated;
      if (r.depth_slope > 0.0) e["t_c"] = c.n_c_interpolated / r.depth_slope;
    } else {
      e["n_c"] = nullptr;
    }
    curves.push_back(e);
  }
  return {{"threshold", r.threshold},
          {"reference_g", r.reference_g},
          {"g_values", [&] {
             std::vector<double> g;
             for (const auto& c : r.curves) g.push_back(c.g);
             return g;
           }()},
          {"curves", curves},
          {"window", {r.window_lo, r.window_hi}},
          {"pairwise_collapse_error", num(r.pairwise_collapse_error)},
          {"detected", r.detected},
          {"n_c_slope_vs_abs_ln_g", num(r.n_c_slope)},
          {"n_c_intercept", num(r.n_c_intercept)},
          {"shifts_per_decade", r.shifts_per_decade},
          {"shift_relative_spread", num(r.shift_relative_spread)},
          {"depth_slope",
           r.depth_slope > 0.0 ? nlohmann::json(r.depth_slope)
                               : nlohmann::json(nullptr)}};
}

std::string collapse_csv(const CollapseReport& r) {
  std::string out = "n,g,scaled_delta_b\n";
  for (const CollapseCurve& c : r.curves) {
    for (std::size_t n = 1; n < c.scaled.size(); ++n) {
      out += std::to_string(n) + ',' + format_double(c.g) + ',' +
             format_double(c.scaled[n]) + '\n';
    }
  }
  return out;
}

}  // namespace opgrowth
