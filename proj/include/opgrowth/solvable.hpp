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

namespace opgrowth {

// Exactly solvable Krylov chains:
//   type I    b_n = alpha                       (n >= 1)
//   type II   b_n = alpha sqrt(n)
//   type III  b_n = alpha sqrt(n (n - 1 + eta))
struct SolvableType {
  enum class Kind { type_I = 1, type_II = 2, type_III = 3 };

  Kind kind = Kind::type_II;
  double alpha = 1.0;
  double eta = 1.0;  // type III only

  static SolvableType type_I(double alpha);
  static SolvableType type_II(double alpha);
  static SolvableType type_III(double alpha, double eta);

  // "I", "II", "III" (case-insensitive, optional "type_" prefix)
  static Kind parse_kind(std::string_view s);
  std::string name() const;
  void validate() const;
};

double closed_form_b(const SolvableType& s, int n);
std::vector<double> closed_form_sequence(const SolvableType& s, int n_max);

double closed_form_phi(const SolvableType& s, int n, double t);
// phi_0(t) .. phi_{n_max}(t) in one pass.
std::vector<double> closed_form_phi_all(const SolvableType& s, int n_max,
                                        double t);

double closed_form_autocorrelation(const SolvableType& s, double t);

// Types II and III in closed form; type I by summing n phi_n^2 until the
// Bessel tail is below double precision.
double closed_form_mean_depth(const SolvableType& s, double t);

// Late-time slope of the type I mean depth, 16 alpha / (3 pi).
double type_I_depth_slope(double alpha);

// Transverse-field Ising chain at h = 1 (J = 1), infinite temperature.
double brandt_jacoby_cx(double t);  // J_0(4t)^2 + J_1(4t)^2
double gaussian_cz(double t);       // exp(-2 t^2)

}  // namespace opgrowth
