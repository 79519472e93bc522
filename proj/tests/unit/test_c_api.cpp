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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "opgrowth/opgrowth.h"

namespace {

og_model* model(const char* json) {
  og_model* m = nullptr;
  REQUIRE(og_model_from_json(json, &m) == OG_OK);
  return m;
}

template <class F>
std::string text(F&& f) {
  size_t needed = 0;
  REQUIRE(f(nullptr, 0, &needed) == OG_OK);
  std::string s(needed, '\0');
  REQUIRE(f(s.data(), s.size(), &needed) == OG_OK);
  s.resize(needed - 1);
  return s;
}

std::vector<double> b_of(const og_sequence* s) {
  std::vector<double> b(og_sequence_length(s));
  REQUIRE(og_sequence_copy_b(s, b.data(), b.size()) == OG_OK);
  return b;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(og_version()).size() > 0);
  CHECK(std::string(og_status_name(OG_ERR_PARSE)) == "parse");
  CHECK(std::string(og_status_name(OG_ERR_INTERNAL)) == "internal");
}

TEST_CASE("model errors carry a message") {
  og_model* m = nullptr;
  CHECK(og_model_from_json("{\"observable\": \"w\"}", &m) == OG_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(std::string(og_last_error()).find("unknown observable") != std::string::npos);
  CHECK(og_model_from_json("{not json", &m) == OG_ERR_PARSE);
  CHECK(og_model_from_json(nullptr, &m) == OG_ERR_INVALID_ARGUMENT);
  og_model_free(nullptr);
}

TEST_CASE("lanczos through handles") {
  og_model* m = model("{\"h\": 1, \"g\": 0, \"observable\": \"z\"}");
  const auto js = nlohmann::json::parse(text([&](char* b, size_t c, size_t* n) {
    return og_model_to_json(m, b, c, n);
  }));
  CHECK(js.at("observable") == "z");

  int calls = 0;
  og_lanczos_options o = og_lanczos_options_default();
  og_sequence* s = nullptr;
  REQUIRE(og_lanczos_run(m, 10,  &o,
                         [](void* user, int, double, uint64_t, double) {
                           ++*static_cast<int*>(user);
                         },
                         &calls, &s) == OG_OK);
  CHECK(calls == 10);
  const auto b = b_of(s);
  REQUIRE(b.size() == 11);
  for (int n = 1; n <= 10; ++n) CHECK(std::abs(b[n] - 2 * std::sqrt(n)) < 1e-10);
  CHECK(og_sequence_status(s) == OG_LANCZOS_COMPLETE);
  const auto meta = nlohmann::json::parse(text([&](char* buf, size_t c, size_t* n) {
    return og_sequence_meta_json(s, buf, c, n);
  }));
  CHECK(meta.at("status") == "complete");
  CHECK(meta.at("term_counts").size() == 11);

  double small[3];
  CHECK(og_sequence_copy_b(s, small, 3) == OG_ERR_INVALID_ARGUMENT);
  char tiny[4];
  size_t needed = 0;
  CHECK(og_sequence_meta_json(s, tiny, sizeof tiny, &needed) == OG_ERR_INVALID_ARGUMENT);
  CHECK(needed > sizeof tiny);

  double overlap = 1.0;
  CHECK(og_overlap_check(m, 8, nullptr, &overlap) == OG_OK);
  CHECK(overlap < 1e-12);

  og_sequence* dense = nullptr;
  REQUIRE(og_oracle_dense(m, 6, 3, &dense) == OG_OK);
  const auto bd = b_of(dense);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(bd[n] - b[n]) < 1e-10);
  og_sequence* none = nullptr;
  CHECK(og_oracle_dense(m, 12, 3, &none) == OG_ERR_DIMENSION_CAP);

  og_sequence_free(dense);
  og_sequence_free(s);
  og_model_free(m);
}

TEST_CASE("term budget is a status, not an error") {
  og_model* m = model("{\"h\": 1, \"g\": 1, \"observable\": \"x\"}");
  og_lanczos_options o = og_lanczos_options_default();
  o.max_terms = 200;
  og_sequence* s = nullptr;
  REQUIRE(og_lanczos_run(m, 30, &o, nullptr, nullptr, &s) == OG_OK);
  CHECK(og_sequence_status(s) == OG_LANCZOS_MEMORY_BUDGET_EXCEEDED);
  CHECK(og_sequence_length(s) < 31);
  og_sequence_free(s);
  og_model_free(m);
}

TEST_CASE("closed forms and special functions") {
  og_solvable s{OG_TYPE_III, 1.0, 1.0};
  double v = 0;
  REQUIRE(og_closed_form_b(&s, 3, &v) == OG_OK);
  CHECK(v == doctest::Approx(3.0));
  REQUIRE(og_closed_form_autocorrelation(&s, 1.0, &v) == OG_OK);
  CHECK(v == doctest::Approx(1 / std::cosh(1.0)));
  REQUIRE(og_closed_form_mean_depth(&s, 1.0, &v) == OG_OK);
  CHECK(v == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)));
  og_solvable bad{static_cast<og_solvable_kind>(7), 1.0, 1.0};
  CHECK(og_closed_form_b(&bad, 1, &v) == OG_ERR_INVALID_ARGUMENT);
  og_solvable neg{OG_TYPE_I, -1.0, 1.0};
  CHECK(og_closed_form_phi(&neg, 1, 1.0, &v) == OG_ERR_INVALID_ARGUMENT);
  REQUIRE(og_lambert_w(std::exp(1.0), &v) == OG_OK);
  CHECK(v == doctest::Approx(1.0));
  CHECK(og_lambert_w(-1.0, &v) == OG_ERR_INVALID_ARGUMENT);
  REQUIRE(og_bessel_j(1, 2.0, &v) == OG_OK);
  CHECK(v == doctest::Approx(0.5767248077568734));
  REQUIRE(og_brandt_jacoby_cx(0.0, &v) == OG_OK);
  CHECK(v == 1.0);
  REQUIRE(og_gaussian_cz(0.5, &v) == OG_OK);
  CHECK(v == doctest::Approx(std::exp(-0.5)));
  CHECK(og_type_I_depth_slope(1.0) == doctest::Approx(16 / (3 * M_PI)));
}

TEST_CASE("evolve a closed-form chain") {
  og_solvable s{OG_TYPE_II, 1.0, 1.0};
  og_sequence* seq = nullptr;
  REQUIRE(og_closed_form_sequence(&s, 80, &seq) == OG_OK);
  std::vector<double> t{0.0, 0.5, 1.0, 1.5, 2.0};
  og_evolve_options o = og_evolve_options_default();
  og_state* st = nullptr;
  REQUIRE(og_evolve(seq, t.data(), t.size(), 80, &o, &st) == OG_OK);
  REQUIRE(og_state_time_count(st) == 5);
  CHECK(og_state_n_trunc(st) == 80);
  std::vector<double> c(5), d(5), norm(5), leak(5), times(5), phi(81);
  REQUIRE(og_state_autocorrelation(st, c.data(), 5) == OG_OK);
  REQUIRE(og_state_mean_depth(st, d.data(), 5) == OG_OK);
  REQUIRE(og_state_norm_sq(st, norm.data(), 5) == OG_OK);
  REQUIRE(og_state_leakage(st, leak.data(), 5) == OG_OK);
  REQUIRE(og_state_times(st, times.data(), 5) == OG_OK);
  REQUIRE(og_state_phi(st, 4, phi.data(), phi.size()) == OG_OK);
  for (int i = 0; i < 5; ++i) {
    CHECK(c[i] == doctest::Approx(std::exp(-t[i] * t[i] / 2)).epsilon(1e-9));
    CHECK(d[i] == doctest::Approx(t[i] * t[i]).epsilon(1e-8));
    CHECK(norm[i] == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(phi[0] == doctest::Approx(c[4]));
  CHECK(og_state_certified_until(st) == 2.0);
  double slope = 0;
  REQUIRE(og_state_depth_slope(st, 1.0, 2.0, &slope) == OG_OK);
  CHECK(slope == doctest::Approx(3.0).epsilon(0.05));
  CHECK(og_state_phi(st, 9, phi.data(), phi.size()) == OG_ERR_INVALID_ARGUMENT);
  const auto meta = nlohmann::json::parse(text([&](char* b, size_t cap, size_t* n) {
    return og_state_meta_json(st, b, cap, n);
  }));
  CHECK(meta.contains("extension"));
  og_state_free(st);

  // A short sequence needs an extension rule.
  CHECK(og_evolve(seq, t.data(), t.size(), 200, &o, &st) == OG_ERR_INVALID_ARGUMENT);
  o.extension = OG_EXTEND_FREEZE_LAST;
  REQUIRE(og_evolve(seq, t.data(), t.size(), 200, &o, &st) == OG_OK);
  og_state_free(st);
  og_sequence_free(seq);
}

TEST_CASE("sequences from raw coefficients, fits and collapse") {
  std::vector<double> b{0.0};
  for (int n = 1; n <= 30; ++n) b.push_back(3.0 * std::sqrt(n));
  og_sequence* seq = nullptr;
  REQUIRE(og_sequence_from_b(b.data(), b.size(), &seq) == OG_OK);
  og_fit_report r{};
  REQUIRE(og_fit(seq, OG_FIT_LINEAR_IN_SQRT_N, -1, -1, &r) == OG_OK);
  CHECK(r.slope == doctest::Approx(3.0));
  CHECK(r.n_lo == 15);
  CHECK(r.rms_residual < 1e-12);
  const std::string csv = text([&](char* buf, size_t cap, size_t* n) {
    return og_fit_csv(seq, OG_FIT_N_OVER_BN_VS_W, 8, 30, buf, cap, n);
  });
  CHECK(csv.rfind("n,x,y,fitted,residual,W\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 24);
  const auto rj = nlohmann::json::parse(text([&](char* buf, size_t cap, size_t* n) {
    return og_fit_report_json(&r, buf, cap, n);
  }));
  CHECK(rj.at("fit_kind") == "linear_in_sqrt_n");
  CHECK(og_fit(seq, OG_FIT_LINEAR_IN_N, 28, 30, &r) == OG_ERR_WINDOW_TOO_SMALL);

  std::vector<double> bad{1.0, 2.0};
  og_sequence* nope = nullptr;
  CHECK(og_sequence_from_b(bad.data(), bad.size(), &nope) == OG_ERR_INVALID_ARGUMENT);

  std::vector<std::vector<double>> runs;
  std::vector<og_sequence*> handles;
  const double gs[] = {1e-3, 1e-2, 1e-1};
  for (double g : gs) {
    std::vector<double> bg = b;
    for (int n = 1; n <= 30; ++n) {
      const double f = std::exp(n / 3.0);
      bg[n] *= 1 + g * g * f + g * g * g * g * f * f;
    }
    og_sequence* h = nullptr;
    REQUIRE(og_sequence_from_b(bg.data(), bg.size(), &h) == OG_OK);
    handles.push_back(h);
  }
  og_collapse_options co = og_collapse_options_default();
  CHECK(co.threshold == 0.2);
  og_collapse* col = nullptr;
  REQUIRE(og_collapse_run(seq, gs, handles.data(), 3, &co, &col) == OG_OK);
  CHECK(og_collapse_error(col) < 0.2);
  CHECK(og_collapse_n_c_slope(col) > 0);
  const std::string ccsv = text([&](char* buf, size_t cap, size_t* n) {
    return og_collapse_csv(col, buf, cap, n);
  });
  CHECK(ccsv.rfind("n,g,scaled_delta_b\n", 0) == 0);
  og_collapse_free(col);
  for (auto* h : handles) og_sequence_free(h);
  og_sequence_free(seq);
}

TEST_CASE("operator text and the Liouvillian") {
  og_operator* op = nullptr;
  REQUIRE(og_operator_from_text("# X on site 0\n1\tX@0\n", &op) == OG_OK);
  CHECK(og_operator_size(op) == 1);
  CHECK(og_operator_norm(op) == 1.0);
  og_model* m = model("{\"h\": 1, \"g\": 1}");
  og_operator* b = nullptr;
  REQUIRE(og_operator_apply_liouvillian(m, op, 2, &b) == OG_OK);
  CHECK(og_operator_norm(b) == doctest::Approx(std::sqrt(12.0)));
  const std::string t = text([&](char* buf, size_t cap, size_t* n) {
    return og_operator_to_text(b, buf, cap, n);
  });
  og_operator* again = nullptr;
  REQUIRE(og_operator_from_text(t.c_str(), &again) == OG_OK);
  CHECK(og_operator_size(again) == 3);
  og_operator* broken = nullptr;
  CHECK(og_operator_from_text("1\tW@0\n", &broken) != OG_OK);
  og_operator_free(again);
  og_operator_free(b);
  og_operator_free(op);
  og_model_free(m);
}
