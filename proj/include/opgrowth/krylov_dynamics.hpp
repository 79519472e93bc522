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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace opgrowth {

// How to continue a measured sequence past its last coefficient.
enum class Extension { none, freeze_last, linear_over_w };

std::string extension_name(Extension e);
Extension parse_extension(std::string_view s);

struct ExtendedSequence {
  std::vector<double> b;  // b[0..n_trunc]
  Extension rule = Extension::none;
  int measured_depth = 0;
  // linear_over_w: n / b_n = slope * W(n) + intercept, fit on [fit_lo, fit_hi]
  double slope = 0.0;
  double intercept = 0.0;
  int fit_lo = 0;
  int fit_hi = 0;
};

/// Returns b[0..n_trunc]. Without an extension rule the measured sequence
/// must already reach n_trunc.
ExtendedSequence extend_sequence(const std::vector<double>& b, int n_trunc,
                                 Extension rule);

nlohmann::json to_json(const ExtendedSequence& e);

struct EvolveOptions {
  // Target for the global integration error of the amplitude vector. Sets
  // the step through the conserved norm |L^5 phi|.
  double tolerance = 1e-10;
  double leakage_threshold = 1e-10;  // on phi_{n_trunc}^2
  double step = 0.0;                 // > 0 overrides the automatic step
  bool store_phi = true;
};

/// Amplitudes on the Krylov chain truncated at n_trunc, real form:
///   d/dt phi_n = b_n phi_{n-1} - b_{n+1} phi_{n+1},  phi_n(0) = delta_{n0},
/// hard wall phi_{n_trunc+1} = 0.
struct KrylovState {
  std::vector<double> times;
  int n_trunc = 0;
  std::vector<std::vector<double>> phi;  // per time, n = 0..n_trunc (if stored)
  std::vector<double> c;                 // phi_0
  std::vector<double> depth;             // sum_n n phi_n^2
  std::vector<double> norm_sq;           // sum_n phi_n^2
  std::vector<double> leakage;           // phi_{n_trunc}^2
  std::vector<char> certified;           // leakage < threshold
  double leakage_threshold = 0.0;
  double tolerance = 0.0;
  double step_max = 0.0;
  double step_min = 0.0;
  std::size_t total_steps = 0;

  // Largest grid time up to which every stored time is certified, or -1.
  double certified_until() const;
  double max_unitarity_error() const;
};

KrylovState evolve(const std::vector<double>& b,
                   const std::vector<double>& times, int n_trunc,
                   const EvolveOptions& options = {});

std::vector<double> autocorrelation(const KrylovState& state);
std::vector<double> mean_depth(const KrylovState& state);

// Least-squares slope of mean depth against t over times in [t_lo, t_hi].
double depth_slope(const KrylovState& state, double t_lo, double t_hi);

// Uniform grid 0, dt, ..., t_max (t_max included up to rounding).
std::vector<double> uniform_grid(double t_max, double dt);

nlohmann::json to_json(const KrylovState& state);

}  // namespace opgrowth
