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

#include "opgrowth/krylov_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opgrowth/error.hpp"
#include "opgrowth/special_functions.hpp"

namespace opgrowth {
namespace {

// k = L x on the truncated chain, b has n_trunc + 1 entries.
void rhs(const std::vector<double>& b, const std::vector<double>& x,
         std::vector<double>& k) {
  const std::size_t N = b.size() - 1;
  k[0] = -b[1] * x[1];
  for (std::size_t n = 1; n < N; ++n) {
    k[n] = b[n] * x[n - 1] - b[n + 1] * x[n + 1];
  }
  k[N] = b[N] * x[N - 1];
}

// |L^5 e_0|^2, the squared norm of the fifth time derivative. L is
// antisymmetric, so this is conserved along the trajectory.
double fifth_derivative_norm_sq(const std::vector<double>& b) {
  std::vector<double> x(b.size(), 0.0), y(b.size(), 0.0);
  x[0] = 1.0;
  for (int p = 0; p < 5; ++p) {
    rhs(b, x, y);
    x.swap(y);
  }
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::window_too_small, "degenerate fit abscissa");
  const double s = sxy / sxx;
  return {s, my - s * mx};
}

}  // namespace

std::string extension_name(Extension e) {
  switch (e) {
    case Extension::freeze_last:
      return "freeze_last";
    case Extension::linear_over_w:
      return "linear_over_w";
    case Extension::none:
      break;
  }
  return "none";
}

Extension parse_extension(std::string_view s) {
  if (s == "none") return Extension::none;
  if (s == "freeze_last") return Extension::freeze_last;
  if (s == "linear_over_w") return Extension::linear_over_w;
  fail(ErrorCode::invalid_argument,
       "unknown extension '" + std::string(s) +
           "' (expected none, freeze_last or linear_over_w)");
}

ExtendedSequence extend_sequence(const std::vector<double>& b, int n_trunc,
                                 Extension rule) {
  if (n_trunc < 1) fail(ErrorCode::invalid_argument, "n_trunc must be >= 1");
  if (b.size() < 2) {
    fail(ErrorCode::invalid_argument, "sequence needs at least b_1");
  }
  ExtendedSequence e;
  e.rule = rule;
  e.measured_depth = static_cast<int>(b.size()) - 1;
  const auto want = static_cast<std::size_t>(n_trunc) + 1;
  if (b.size() >= want) {
    e.b.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(want));
    return e;
  }
  if (rule == Extension::none) {
    fail(ErrorCode::invalid_argument,
         "sequence depth " + std::to_string(e.measured_depth) +
             " is below n_trunc " + std::to_string(n_trunc) +
             "; choose an extension rule");
  }
  e.b = b;
  if (rule == Extension::freeze_last) {
    e.b.resize(want, b.back());
    return e;
  }

  // linear_over_w: fit the upper half of the measured sequence.
  e.fit_hi = e.measured_depth;
  e.fit_lo = std::max(2, e.measured_depth / 2);
  if (e.fit_hi - e.fit_lo + 1 < 4) {
    fail(ErrorCode::window_too_small,
         "linear_over_w extension needs a measured depth of at least 8");
  }
  std::vector<double> x, y;
  for (int n = e.fit_lo; n <= e.fit_hi; ++n) {
    x.push_back(lambert_w(n));
    y.push_back(n / b[n]);
  }
  const Line line = least_squares(x, y);
  e.slope = line.slope;
  e.intercept = line.intercept;
  for (int n = e.measured_depth + 1; n <= n_trunc; ++n) {
    const double denom = e.slope * lambert_w(n) + e.intercept;
    if (!(denom > 0.0)) {
      fail(ErrorCode::numerical,
           "linear_over_w continuation is not positive at n = " +
               std::to_string(n));
    }
    e.b.push_back(n / denom);
  }
  return e;
}

nlohmann::json to_json(const ExtendedSequence& e) {
  nlohmann::json j{{"rule", extension_name(e.rule)},
                   {"measured_depth", e.measured_depth},
                   {"n_trunc", static_cast<int>(e.b.size()) - 1}};
  if (e.rule == Extension::linear_over_w &&
      static_cast<int>(e.b.size()) - 1 > e.measured_depth) {
    j["fit"] = {{"slope", e.slope},
                {"intercept", e.intercept},
                {"window", {e.fit_lo, e.fit_hi}}};
  }
  return j;
}

double KrylovState::certified_until() const {
  double t = -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!certified[i]) break;
    t = times[i];
  }
  return t;
}

double KrylovState::max_unitarity_error() const {
  double e = 0.0;
  for (std::size_t i = 0; i < norm_sq.size(); ++i) {
    if (certified[i]) e = std::max(e, std::abs(norm_sq[i] - 1.0));
  }
  return e;
}

KrylovState evolve(const std::vector<double>& b_in,
                   const std::vector<double>& times, int n_trunc,
                   const EvolveOptions& options) {
  if (n_trunc < 1) fail(ErrorCode::invalid_argument, "n_trunc must be >= 1");
  if (b_in.size() < static_cast<std::size_t>(n_trunc) + 1) {
    fail(ErrorCode::invalid_argument,
         "sequence shorter than n_trunc + 1; extend it first");
  }
  if (times.empty()) fail(ErrorCode::invalid_argument, "time grid is empty");
  if (!(times.front() >= 0.0)) {
    fail(ErrorCode::invalid_argument, "time grid must start at t >= 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      fail(ErrorCode::invalid_argument, "time grid must be strictly ascending");
    }
  }
  if (!(options.tolerance > 0.0) || options.step < 0.0 ||
      !(options.leakage_threshold >= 0.0)) {
    fail(ErrorCode::invalid_argument,
         "tolerance must be > 0, step and leakage threshold >= 0");
  }
  std::vector<double> b(b_in.begin(), b_in.begin() + n_trunc + 1);
  b[0] = 0.0;
  double b_max = 0.0;
  for (int n = 1; n <= n_trunc; ++n) {
    if (!(b[n] > 0.0) || !std::isfinite(b[n])) {
      fail(ErrorCode::invalid_argument,
           "b_" + std::to_string(n) + " must be finite and > 0");
    }
    b_max = std::max(b_max, b[n]);
  }

  // Fixed step per grid interval: the stability limit 1/b_max (the spectrum
  // of L lies within +-2i b_max), and the accuracy step from the RK4 global
  // error bound T h^4 |L^5 phi| / 120 <= tolerance.
  double h = options.step;
  if (h == 0.0) {
    h = 1.0 / b_max;
    const double T = times.back();
    const double d5 = std::sqrt(fifth_derivative_norm_sq(b));
    if (T > 0.0 && d5 > 0.0) {
      h = std::min(h, std::pow(120.0 * options.tolerance / (T * d5), 0.25));
    }
  }

  KrylovState st;
  st.times = times;
  st.n_trunc = n_trunc;
  st.leakage_threshold = options.leakage_threshold;
  st.tolerance = options.tolerance;
  st.step_min = std::numeric_limits<double>::infinity();

  const std::size_t dim = static_cast<std::size_t>(n_trunc) + 1;
  std::vector<double> y(dim, 0.0), tmp(dim), k1(dim), k2(dim), k3(dim),
      k4(dim);
  y[0] = 1.0;

  auto record = [&] {
    double norm = 0.0, depth = 0.0;
    for (std::size_t n = 0; n < dim; ++n) {
      const double p = y[n] * y[n];
      norm += p;
      depth += static_cast<double>(n) * p;
    }
    if (!std::isfinite(norm) || !std::isfinite(depth)) {
      fail(ErrorCode::numerical,
           "integration diverged; the step is too large for this sequence");
    }
    st.c.push_back(y[0]);
    st.depth.push_back(depth);
    st.norm_sq.push_back(norm);
    const double leak = y[n_trunc] * y[n_trunc];
    st.leakage.push_back(leak);
    st.certified.push_back(leak < options.leakage_threshold ? 1 : 0);
    if (options.store_phi) st.phi.push_back(y);
  };

  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto m = static_cast<std::size_t>(
          std::max(1.0, std::ceil(span / h * (1.0 - 1e-12))));
      const double hh = span / static_cast<double>(m);
      st.step_max = std::max(st.step_max, hh);
      st.step_min = std::min(st.step_min, hh);
      for (std::size_t s = 0; s < m; ++s) {
        rhs(b, y, k1);
        for (std::size_t n = 0; n < dim; ++n) tmp[n] = y[n] + 0.5 * hh * k1[n];
        rhs(b, tmp, k2);
        for (std::size_t n = 0; n < dim; ++n) tmp[n] = y[n] + 0.5 * hh * k2[n];
        rhs(b, tmp, k3);
        for (std::size_t n = 0; n < dim; ++n) tmp[n] = y[n] + hh * k3[n];
        rhs(b, tmp, k4);
        for (std::size_t n = 0; n < dim; ++n) {
          y[n] += hh / 6.0 * (k1[n] + 2.0 * (k2[n] + k3[n]) + k4[n]);
        }
      }
      st.total_steps += m;
    }
    t = target;
    record();
  }
  if (st.total_steps == 0) st.step_min = 0.0;
  return st;
}

std::vector<double> autocorrelation(const KrylovState& state) {
  return state.c;
}

std::vector<double> mean_depth(const KrylovState& state) {
  return state.depth;
}

double depth_slope(const KrylovState& state, double t_lo, double t_hi) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < state.times.size(); ++i) {
    if (state.times[i] >= t_lo && state.times[i] <= t_hi) {
      x.push_back(state.times[i]);
      y.push_back(state.depth[i]);
    }
  }
  if (x.size() < 2) {
    fail(ErrorCode::window_too_small, "depth slope window holds < 2 times");
  }
  return least_squares(x, y).slope;
}

std::vector<double> uniform_grid(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0) || !std::isfinite(t_max)) {
    fail(ErrorCode::invalid_argument, "grid needs dt > 0 and finite t_max >= 0");
  }
  const auto count = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  if (count > 10'000'000) {
    fail(ErrorCode::invalid_argument, "time grid exceeds 10^7 points");
  }
  std::vector<double> t(count + 1);
  for (std::size_t i = 0; i <= count; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

nlohmann::json to_json(const KrylovState& state) {
  const double until = state.certified_until();
  return {{"n_trunc", state.n_trunc},
          {"times", state.times.size()},
          {"tolerance", state.tolerance},
          {"leakage_threshold", state.leakage_threshold},
          {"certified_until",
           until >= 0.0 ? nlohmann::json(until) : nlohmann::json(nullptr)},
          {"max_unitarity_error", state.max_unitarity_error()},
          {"step_max", state.step_max},
          {"step_min", state.step_min},
          {"total_steps", state.total_steps}};
}

}  // namespace opgrowth
