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

#include "opgrowth/solvable.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "opgrowth/error.hpp"
#include "opgrowth/special_functions.hpp"

namespace opgrowth {
namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::invalid_argument, "time must be finite and >= 0");
  }
}

// log sech(x) for x >= 0 without overflow in cosh.
double log_sech(double x) {
  return -(x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2);
}

// Type I: phi_n = (n+1) J_{n+1}(2at)/(at) = J_n(2at) + J_{n+2}(2at).
std::vector<double> type_I_phi(double alpha, int n_max, double t) {
  const std::vector<double> j = bessel_j_sequence(n_max + 2, 2.0 * alpha * t);
  std::vector<double> phi(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) phi[n] = j[n] + j[n + 2];
  return phi;
}

double log_phi(const SolvableType& s, int n, double t) {
  const double at = s.alpha * t;
  if (s.kind == SolvableType::Kind::type_II) {
    return n * std::log(at) - 0.5 * std::lgamma(n + 1.0) - 0.5 * at * at;
  }
  return 0.5 * (std::lgamma(s.eta + n) - std::lgamma(s.eta) -
                std::lgamma(n + 1.0)) +
         n * std::log(std::tanh(at)) + s.eta * log_sech(at);
}

}  // namespace

SolvableType SolvableType::type_I(double alpha) {
  SolvableType s{Kind::type_I, alpha, 1.0};
  s.validate();
  return s;
}

SolvableType SolvableType::type_II(double alpha) {
  SolvableType s{Kind::type_II, alpha, 1.0};
  s.validate();
  return s;
}

SolvableType SolvableType::type_III(double alpha, double eta) {
  SolvableType s{Kind::type_III, alpha, eta};
  s.validate();
  return s;
}

SolvableType::Kind SolvableType::parse_kind(std::string_view s) {
  std::string k;
  for (char c : s) k.push_back(static_cast<char>(std::toupper(c)));
  if (k.starts_with("TYPE_")) k = k.substr(5);
  if (k == "I" || k == "1") return Kind::type_I;
  if (k == "II" || k == "2") return Kind::type_II;
  if (k == "III" || k == "3") return Kind::type_III;
  fail(ErrorCode::invalid_argument,
       "unknown solvable type '" + std::string(s) + "' (expected I, II, III)");
}

std::string SolvableType::name() const {
  switch (kind) {
    case Kind::type_I:
      return "I";
    case Kind::type_II:
      return "II";
    case Kind::type_III:
      break;
  }
  return "III";
}

void SolvableType::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::invalid_argument, "alpha must be finite and > 0");
  }
  if (kind == Kind::type_III && (!(eta > 0.0) || !std::isfinite(eta))) {
    fail(ErrorCode::invalid_argument, "eta must be finite and > 0");
  }
}

double closed_form_b(const SolvableType& s, int n) {
  s.validate();
  if (n < 0) fail(ErrorCode::invalid_argument, "n must be >= 0");
  if (n == 0) return 0.0;
  switch (s.kind) {
    case SolvableType::Kind::type_I:
      return s.alpha;
    case SolvableType::Kind::type_II:
      return s.alpha * std::sqrt(static_cast<double>(n));
    case SolvableType::Kind::type_III:
      break;
  }
  return s.alpha * std::sqrt(n * (n - 1.0 + s.eta));
}

std::vector<double> closed_form_sequence(const SolvableType& s, int n_max) {
  if (n_max < 0) fail(ErrorCode::invalid_argument, "n_max must be >= 0");
  std::vector<double> b(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) b[n] = closed_form_b(s, n);
  return b;
}

double closed_form_phi(const SolvableType& s, int n, double t) {
  s.validate();
  check_time(t);
  if (n < 0) fail(ErrorCode::invalid_argument, "n must be >= 0");
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  if (s.kind == SolvableType::Kind::type_I) {
    return type_I_phi(s.alpha, n, t)[static_cast<std::size_t>(n)];
  }
  return std::exp(log_phi(s, n, t));
}

std::vector<double> closed_form_phi_all(const SolvableType& s, int n_max,
                                        double t) {
  s.validate();
  check_time(t);
  if (n_max < 0) fail(ErrorCode::invalid_argument, "n_max must be >= 0");
  std::vector<double> phi(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (t == 0.0) {
    phi[0] = 1.0;
    return phi;
  }
  if (s.kind == SolvableType::Kind::type_I) {
    return type_I_phi(s.alpha, n_max, t);
  }
  for (int n = 0; n <= n_max; ++n) phi[n] = std::exp(log_phi(s, n, t));
  return phi;
}

double closed_form_autocorrelation(const SolvableType& s, double t) {
  return closed_form_phi(s, 0, t);
}

double closed_form_mean_depth(const SolvableType& s, double t) {
  s.validate();
  check_time(t);
  const double at = s.alpha * t;
  switch (s.kind) {
    case SolvableType::Kind::type_II:
      return at * at;
    case SolvableType::Kind::type_III: {
      const double sh = std::sinh(at);
      return s.eta * sh * sh;
    }
    case SolvableType::Kind::type_I:
      break;
  }
  if (t == 0.0) return 0.0;
  // J_n(x) is below 1e-30 once n exceeds x by a few times x^(1/3) + 40.
  const int n_max = static_cast<int>(2.0 * at + 60.0 + 10.0 * std::cbrt(at));
  const std::vector<double> phi = type_I_phi(s.alpha, n_max, t);
  double depth = 0.0;
  for (int n = 1; n <= n_max; ++n) depth += n * phi[n] * phi[n];
  return depth;
}

double type_I_depth_slope(double alpha) {
  return 16.0 * alpha / (3.0 * std::numbers::pi);
}

double brandt_jacoby_cx(double t) {
  check_time(t);
  const std::vector<double> j = bessel_j_sequence(1, 4.0 * t);
  return j[0] * j[0] + j[1] * j[1];
}

double gaussian_cz(double t) {
  check_time(t);
  return std::exp(-2.0 * t * t);
}

}  // namespace opgrowth
