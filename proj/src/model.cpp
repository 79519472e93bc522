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

#include "opgrowth/model.hpp"

#include <cctype>
#include <cmath>

#include "opgrowth/error.hpp"

namespace opgrowth {

double HamiltonianSpec::field_at(int site) const noexcept {
  switch (longitudinal.profile) {
    case FieldProfile::uniform:
      return longitudinal.g;
    case FieldProfile::single_site:
      return site == longitudinal.site ? longitudinal.g : 0.0;
    case FieldProfile::none:
      break;
  }
  return 0.0;
}

HamiltonianSpec HamiltonianSpec::transverse(double h) {
  HamiltonianSpec H;
  H.h = h;
  return H;
}

HamiltonianSpec HamiltonianSpec::uniform(double h, double g) {
  HamiltonianSpec H;
  H.h = h;
  H.longitudinal = {FieldProfile::uniform, g, 0};
  return H;
}

HamiltonianSpec HamiltonianSpec::single_site(double h, double g, int site) {
  HamiltonianSpec H;
  H.h = h;
  H.longitudinal = {FieldProfile::single_site, g, site};
  return H;
}

ObservableSpec ObservableSpec::parse(std::string_view name) {
  auto axis_of = [&](char c) -> Pauli {
    switch (c) {
      case 'x': return Pauli::X;
      case 'y': return Pauli::Y;
      case 'z': return Pauli::Z;
      default:
        fail(ErrorCode::invalid_argument,
             "unknown observable '" + std::string(name) + "'");
    }
  };
  ObservableSpec o;
  if (name.size() == 1) {
    o.kind = Kind::one_body;
    o.axis = axis_of(name[0]);
  } else if (name.size() == 2 && name[0] == name[1]) {
    o.kind = Kind::two_body;
    o.axis = axis_of(name[0]);
  } else {
    fail(ErrorCode::invalid_argument,
         "unknown observable '" + std::string(name) + "'");
  }
  return o;
}

std::string ObservableSpec::name() const {
  const char c = static_cast<char>(std::tolower(pauli_letter(axis)));
  return kind == Kind::one_body ? std::string(1, c) : std::string(2, c);
}

PauliString ObservableSpec::string() const {
  const auto bits = static_cast<unsigned>(axis);
  const Mask sites = kind == Kind::one_body ? Mask{1} : Mask{3};
  return PauliString::from_masks(0, (bits & 1u) ? sites : 0,
                                 (bits & 2u) ? sites : 0);
}

OperatorVector ObservableSpec::to_operator() const {
  return OperatorVector(string(), 1.0);
}

std::vector<HamiltonianTerm> hamiltonian_terms_in_window(
    const HamiltonianSpec& H, int lo, int hi) {
  if (hi < lo) {
    fail(ErrorCode::invalid_argument, "hamiltonian window must be nonempty");
  }
  std::vector<HamiltonianTerm> terms;
  for (int l = lo - 1; l <= hi; ++l) {
    terms.push_back({{PauliString::from_masks(l, 0, Mask{3}), 0},
                     HamiltonianSpec::coupling_J});
    if (l < lo) continue;
    if (H.h != 0.0) {
      terms.push_back({{PauliString::single(l, Pauli::X), 0},
                       HamiltonianSpec::coupling_J * H.h});
    }
    const double g = H.field_at(l);
    if (g != 0.0) {
      terms.push_back({{PauliString::single(l, Pauli::Z), 0},
                       HamiltonianSpec::coupling_J * g});
    }
  }
  return terms;
}

std::string field_profile_name(FieldProfile p) {
  switch (p) {
    case FieldProfile::uniform:
      return "uniform";
    case FieldProfile::single_site:
      return "site0";
    case FieldProfile::none:
      break;
  }
  return "none";
}

ModelConfig parse_model_config(const nlohmann::json& j) {
  auto bad = [](const std::string& field, const std::string& why) {
    fail(ErrorCode::invalid_argument, "model." + field + ": " + why);
  };
  if (!j.is_object()) bad("", "model block must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "h" && key != "g" && key != "g_profile" &&
        key != "observable" && key != "J") {
      bad(key, "unknown key");
    }
  }
  auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) bad(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(key, "must be finite");
    return d;
  };
  // J is the energy unit; accepted so that to_json output parses back.
  if (number("J", HamiltonianSpec::coupling_J) != HamiltonianSpec::coupling_J) {
    bad("J", "only J = 1 is supported");
  }
  ModelConfig m;
  m.hamiltonian.h = number("h", 1.0);
  const double g = number("g", 0.0);
  std::string profile = "uniform";
  if (j.contains("g_profile")) {
    if (!j.at("g_profile").is_string()) bad("g_profile", "expected a string");
    profile = j.at("g_profile").get<std::string>();
  }
  if (profile == "uniform") {
    m.hamiltonian.longitudinal = {g == 0.0 ? FieldProfile::none
                                           : FieldProfile::uniform,
                                  g, 0};
  } else if (profile == "site0") {
    m.hamiltonian.longitudinal = {g == 0.0 ? FieldProfile::none
                                           : FieldProfile::single_site,
                                  g, 0};
  } else if (profile == "none") {
    if (g != 0.0) bad("g", "must be 0 when g_profile is \"none\"");
    m.hamiltonian.longitudinal = {};
  } else {
    bad("g_profile", "unknown profile '" + profile +
                         "' (expected uniform, site0 or none)");
  }
  std::string observable = "z";
  if (j.contains("observable")) {
    if (!j.at("observable").is_string()) bad("observable", "expected a string");
    observable = j.at("observable").get<std::string>();
  }
  try {
    m.observable = ObservableSpec::parse(observable);
  } catch (const Error& e) {
    bad("observable", e.what());
  }
  return m;
}

nlohmann::json to_json(const HamiltonianSpec& H) {
  return {{"J", HamiltonianSpec::coupling_J},
          {"h", H.h},
          {"g", H.longitudinal.g},
          {"g_profile", field_profile_name(H.longitudinal.profile)}};
}

nlohmann::json to_json(const ModelConfig& m) {
  nlohmann::json j = to_json(m.hamiltonian);
  j["observable"] = m.observable.name();
  return j;
}

}  // namespace opgrowth
