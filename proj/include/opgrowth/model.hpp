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

#include "opgrowth/operator_vector.hpp"
#include "opgrowth/pauli.hpp"

namespace opgrowth {

enum class FieldProfile { none, uniform, single_site };

struct LongitudinalField {
  FieldProfile profile = FieldProfile::none;
  double g = 0.0;
  int site = 0;  // single_site only
};

/// Ising chain with transverse and longitudinal fields on the infinite
/// lattice:
///   H = J sum_l [ Z_l Z_{l+1} + h X_l + g_l Z_l ],  J = 1.
struct HamiltonianSpec {
  static constexpr double coupling_J = 1.0;

  double h = 1.0;
  LongitudinalField longitudinal;

  double field_at(int site) const noexcept;

  static HamiltonianSpec transverse(double h);
  static HamiltonianSpec uniform(double h, double g);
  static HamiltonianSpec single_site(double h, double g, int site = 0);
};

struct ObservableSpec {
  enum class Kind { one_body, two_body };

  Kind kind = Kind::one_body;
  Pauli axis = Pauli::Z;

  // "x", "y", "z", "xx", "yy", "zz"
  static ObservableSpec parse(std::string_view name);
  std::string name() const;
  PauliString string() const;
  OperatorVector to_operator() const;
};

struct HamiltonianTerm {
  PhasedString term;
  double coeff = 0.0;
};

// Terms of H whose support intersects [lo, hi], in site order: for each
// site l, the bond Z_l Z_{l+1}, then h X_l, then g_l Z_l.
std::vector<HamiltonianTerm> hamiltonian_terms_in_window(
    const HamiltonianSpec& H, int lo, int hi);

struct LiouvillianOptions {
  int threads = 1;
  std::size_t max_terms = 0;  // 0: unlimited
};

/// B with [H, A] = i B, for A a real combination of Pauli strings.
///
/// Output coefficients are accumulated per hash shard, in input order, so the
/// result is bit-identical for any thread count. Throws ErrorCode::convention
/// if a surviving commutator carries an even power of i, and
/// ErrorCode::memory_budget if the output exceeds options.max_terms.
OperatorVector apply_liouvillian(const HamiltonianSpec& H,
                                 const OperatorVector& a,
                                 const LiouvillianOptions& options = {});

struct ModelConfig {
  HamiltonianSpec hamiltonian;
  ObservableSpec observable;
};

// {"h": number, "g": number, "g_profile": "uniform"|"site0"|"none",
//  "observable": "x"|"y"|"z"|"xx"|"yy"|"zz"}. Missing keys take defaults
// h = 1, g = 0, observable "z"; g_profile defaults to "uniform". An optional
// "J" must equal 1.
// Throws ErrorCode::invalid_argument naming the offending field.
ModelConfig parse_model_config(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& m);
nlohmann::json to_json(const HamiltonianSpec& H);

std::string field_profile_name(FieldProfile p);

}  // namespace opgrowth
