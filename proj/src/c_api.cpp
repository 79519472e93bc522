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

#include "opgrowth/opgrowth.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "format.hpp"
#include "opgrowth/dense_oracle.hpp"
#include "opgrowth/error.hpp"
#include "opgrowth/krylov_dynamics.hpp"
#include "opgrowth/lanczos.hpp"
#include "opgrowth/model.hpp"
#include "opgrowth/scaling.hpp"
#include "opgrowth/solvable.hpp"
#include "opgrowth/special_functions.hpp"

struct og_model {
  opgrowth::ModelConfig config;
};

struct og_sequence {
  opgrowth::LanczosSequence seq;
};

struct og_state {
  opgrowth::KrylovState state;
  opgrowth::ExtendedSequence extension;
};

struct og_collapse {
  opgrowth::CollapseReport report;
};

struct og_operator {
  opgrowth::OperatorVector vector;
};

namespace {

thread_local std::string last_error;

og_status set_error(og_status code, const std::string& what) {
  last_error = what;
  return code;
}

// Runs f, translating exceptions into status codes.
template <class F>
og_status guarded(F&& f) {
  try {
    f();
    return OG_OK;
  } catch (const opgrowth::Error& e) {
    return set_error(static_cast<og_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(OG_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(OG_ERR_MEMORY_BUDGET, "out of memory");
  } catch (const std::exception& e) {
    return set_error(OG_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(OG_ERR_INTERNAL, "unknown exception");
  }
}

og_status null_argument(const char* name) {
  return set_error(OG_ERR_INVALID_ARGUMENT,
                   std::string(name) + " must not be NULL");
}

og_status copy_text(const std::string& text, char* buf, size_t cap,
                    size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (buf == nullptr && cap == 0) return OG_OK;
  if (buf == nullptr) return null_argument("buf");
  if (cap < text.size() + 1) {
    return set_error(OG_ERR_INVALID_ARGUMENT,
                     "buffer of " + std::to_string(cap) + " bytes is too " +
                         "small; " + std::to_string(text.size() + 1) +
                         " needed");
  }
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return OG_OK;
}

og_status copy_values(const std::vector<double>& v, double* out, size_t cap) {
  if (out == nullptr) return null_argument("out");
  if (cap < v.size()) {
    return set_error(OG_ERR_INVALID_ARGUMENT,
                     "output holds " + std::to_string(cap) + " values; " +
                         std::to_string(v.size()) + " needed");
  }
  std::copy(v.begin(), v.end(), out);
  return OG_OK;
}

opgrowth::LanczosOptions lanczos_options(const og_lanczos_options* o) {
  opgrowth::LanczosOptions opt;
  if (o != nullptr) {
    opt.epsilon = o->epsilon;
    opt.max_terms = static_cast<std::size_t>(o->max_terms);
    opt.threads = o->threads < 1 ? 1 : o->threads;
  }
  return opt;
}

opgrowth::SolvableType solvable(const og_solvable* s) {
  if (s == nullptr) {
    opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                   "solvable type must not be NULL");
  }
  if (s->kind < OG_TYPE_I || s->kind > OG_TYPE_III) {
    opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                   "unknown solvable kind");
  }
  opgrowth::SolvableType t{static_cast<opgrowth::SolvableType::Kind>(s->kind),
                           s->alpha, s->eta};
  if (t.kind != opgrowth::SolvableType::Kind::type_III) t.eta = 1.0;
  t.validate();
  return t;
}

opgrowth::FitKind fit_kind(og_fit_kind k) {
  if (k < OG_FIT_LINEAR_IN_N || k > OG_FIT_N_OVER_BN_VS_W) {
    opgrowth::fail(opgrowth::ErrorCode::invalid_argument, "unknown fit kind");
  }
  return static_cast<opgrowth::FitKind>(k);
}

}  // namespace

extern "C" {

const char* og_version(void) { return OPGROWTH_VERSION; }

const char* og_last_error(void) { return last_error.c_str(); }

const char* og_status_name(og_status status) {
  switch (status) {
    case OG_OK: return "ok";
    case OG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case OG_ERR_PARSE: return "parse";
    case OG_ERR_KRYLOV_EXHAUSTED: return "krylov_exhausted";
    case OG_ERR_MEMORY_BUDGET: return "memory_budget";
    case OG_ERR_CONVENTION: return "convention";
    case OG_ERR_WINDOW_TOO_SMALL: return "window_too_small";
    case OG_ERR_DIMENSION_CAP: return "dimension_cap";
    case OG_ERR_NUMERICAL: return "numerical";
    case OG_ERR_IO: return "io";
    case OG_ERR_SUPPORT_OVERFLOW: return "support_overflow";
    case OG_ERR_INTERNAL: break;
  }
  return "internal";
}

// ---- model

og_status og_model_from_json(const char* json, og_model** out) {
  if (json == nullptr) return null_argument("json");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto m = std::make_unique<og_model>();
    m->config = opgrowth::parse_model_config(nlohmann::json::parse(json));
    *out = m.release();
  });
}

og_status og_model_to_json(const og_model* model, char* buf, size_t cap,
                           size_t* needed) {
  if (model == nullptr) return null_argument("model");
  return copy_text(opgrowth::to_json(model->config).dump(), buf, cap, needed);
}

void og_model_free(og_model* model) { delete model; }

// ---- sequences

og_lanczos_options og_lanczos_options_default(void) {
  return {0.0, 0, 1};
}

og_status og_lanczos_run(const og_model* model, int n_max,
                         const og_lanczos_options* options,
                         og_progress_fn progress, void* user,
                         og_sequence** out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    opgrowth::LanczosOptions opt = lanczos_options(options);
    if (progress != nullptr) {
      opt.progress = [progress, user](const opgrowth::LanczosStep& s) {
        progress(user, s.n, s.b, static_cast<uint64_t>(s.terms), s.seconds);
      };
    }
    auto s = std::make_unique<og_sequence>();
    s->seq = opgrowth::run_lanczos(model->config.hamiltonian,
                                   model->config.observable, n_max, opt);
    *out = s.release();
  });
}

og_status og_overlap_check(const og_model* model, int n_check,
                           const og_lanczos_options* options, double* out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = opgrowth::krylov_basis_overlap_check(
        model->config.hamiltonian, model->config.observable, n_check,
        lanczos_options(options));
  });
}

og_status og_oracle_dense(const og_model* model, int sites, int n_max,
                          og_sequence** out) {
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<og_sequence>();
    s->seq = opgrowth::dense_lanczos_oracle(
        model->config.hamiltonian, model->config.observable, sites, n_max);
    *out = s.release();
  });
}

og_status og_sequence_from_b(const double* b, size_t count,
                             og_sequence** out) {
  if (b == nullptr) return null_argument("b");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    if (count < 2) {
      opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                     "sequence needs b_0 and at least b_1");
    }
    if (b[0] != 0.0) {
      opgrowth::fail(opgrowth::ErrorCode::invalid_argument, "b_0 must be 0");
    }
    for (size_t n = 1; n < count; ++n) {
      if (!(b[n] > 0.0) || !std::isfinite(b[n])) {
        opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                       "b_" + std::to_string(n) + " must be finite and > 0");
      }
    }
    auto s = std::make_unique<og_sequence>();
    s->seq.b.assign(b, b + count);
    s->seq.meta.source = "external";
    s->seq.meta.n_max = static_cast<int>(count) - 1;
    *out = s.release();
  });
}

size_t og_sequence_length(const og_sequence* seq) {
  return seq == nullptr ? 0 : seq->seq.b.size();
}

og_status og_sequence_copy_b(const og_sequence* seq, double* out, size_t cap) {
  if (seq == nullptr) return null_argument("seq");
  return copy_values(seq->seq.b, out, cap);
}

og_lanczos_status og_sequence_status(const og_sequence* seq) {
  if (seq == nullptr) return OG_LANCZOS_COMPLETE;
  return static_cast<og_lanczos_status>(seq->seq.meta.status);
}

og_status og_sequence_meta_json(const og_sequence* seq, char* buf, size_t cap,
                                size_t* needed) {
  if (seq == nullptr) return null_argument("seq");
  nlohmann::json j;
  const og_status st =
      guarded([&] { j = opgrowth::to_json(seq->seq.meta); });
  if (st != OG_OK) return st;
  return copy_text(j.dump(), buf, cap, needed);
}

void og_sequence_free(og_sequence* seq) { delete seq; }

// ---- closed forms

og_status og_closed_form_b(const og_solvable* s, int n, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = opgrowth::closed_form_b(solvable(s), n); });
}

og_status og_closed_form_phi(const og_solvable* s, int n, double t,
                             double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = opgrowth::closed_form_phi(solvable(s), n, t); });
}

og_status og_closed_form_autocorrelation(const og_solvable* s, double t,
                                         double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded(
      [&] { *out = opgrowth::closed_form_autocorrelation(solvable(s), t); });
}

og_status og_closed_form_mean_depth(const og_solvable* s, double t,
                                    double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded(
      [&] { *out = opgrowth::closed_form_mean_depth(solvable(s), t); });
}

og_status og_closed_form_sequence(const og_solvable* s, int n_max,
                                  og_sequence** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const opgrowth::SolvableType t = solvable(s);
    if (n_max < 1) {
      opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                     "n_max must be >= 1");
    }
    auto q = std::make_unique<og_sequence>();
    q->seq.b = opgrowth::closed_form_sequence(t, n_max);
    q->seq.meta.source = "closed_form_type_" + t.name();
    q->seq.meta.n_max = n_max;
    *out = q.release();
  });
}

double og_type_I_depth_slope(double alpha) {
  return opgrowth::type_I_depth_slope(alpha);
}

og_status og_lambert_w(double x, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = opgrowth::lambert_w(x); });
}

og_status og_bessel_j(int n, double x, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = opgrowth::bessel_j(n, x); });
}

og_status og_brandt_jacoby_cx(double t, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = opgrowth::brandt_jacoby_cx(t); });
}

og_status og_gaussian_cz(double t, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = opgrowth::gaussian_cz(t); });
}

// ---- dynamics

og_evolve_options og_evolve_options_default(void) {
  const opgrowth::EvolveOptions d;
  return {d.tolerance, d.leakage_threshold, d.step, 1, OG_EXTEND_NONE};
}

og_status og_evolve(const og_sequence* seq, const double* times, size_t count,
                    int n_trunc, const og_evolve_options* options,
                    og_state** out) {
  if (seq == nullptr) return null_argument("seq");
  if (times == nullptr) return null_argument("times");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  const og_evolve_options o =
      options != nullptr ? *options : og_evolve_options_default();
  return guarded([&] {
    if (o.extension < OG_EXTEND_NONE || o.extension > OG_EXTEND_LINEAR_OVER_W) {
      opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                     "unknown extension rule");
    }
    auto s = std::make_unique<og_state>();
    s->extension = opgrowth::extend_sequence(
        seq->seq.b, n_trunc, static_cast<opgrowth::Extension>(o.extension));
    opgrowth::EvolveOptions eo;
    eo.tolerance = o.tolerance;
    eo.leakage_threshold = o.leakage_threshold;
    eo.step = o.step;
    eo.store_phi = o.store_phi != 0;
    s->state = opgrowth::evolve(s->extension.b,
                                std::vector<double>(times, times + count),
                                n_trunc, eo);
    *out = s.release();
  });
}

size_t og_state_time_count(const og_state* state) {
  return state == nullptr ? 0 : state->state.times.size();
}

int og_state_n_trunc(const og_state* state) {
  return state == nullptr ? 0 : state->state.n_trunc;
}

og_status og_state_times(const og_state* state, double* out, size_t cap) {
  if (state == nullptr) return null_argument("state");
  return copy_values(state->state.times, out, cap);
}

og_status og_state_autocorrelation(const og_state* state, double* out,
                                   size_t cap) {
  if (state == nullptr) return null_argument("state");
  return copy_values(opgrowth::autocorrelation(state->state), out, cap);
}

og_status og_state_mean_depth(const og_state* state, double* out,
                              size_t cap) {
  if (state == nullptr) return null_argument("state");
  return copy_values(opgrowth::mean_depth(state->state), out, cap);
}

og_status og_state_norm_sq(const og_state* state, double* out, size_t cap) {
  if (state == nullptr) return null_argument("state");
  return copy_values(state->state.norm_sq, out, cap);
}

og_status og_state_leakage(const og_state* state, double* out, size_t cap) {
  if (state == nullptr) return null_argument("state");
  return copy_values(state->state.leakage, out, cap);
}

og_status og_state_phi(const og_state* state, size_t time_index, double* out,
                       size_t cap) {
  if (state == nullptr) return null_argument("state");
  if (state->state.phi.empty()) {
    return set_error(OG_ERR_INVALID_ARGUMENT,
                     "amplitudes were not stored (store_phi = 0)");
  }
  if (time_index >= state->state.phi.size()) {
    return set_error(OG_ERR_INVALID_ARGUMENT, "time index out of range");
  }
  return copy_values(state->state.phi[time_index], out, cap);
}

double og_state_certified_until(const og_state* state) {
  return state == nullptr ? -1.0 : state->state.certified_until();
}

og_status og_state_depth_slope(const og_state* state, double t_lo,
                               double t_hi, double* out) {
  if (state == nullptr) return null_argument("state");
  if (out == nullptr) return null_argument("out");
  return guarded(
      [&] { *out = opgrowth::depth_slope(state->state, t_lo, t_hi); });
}

og_status og_state_meta_json(const og_state* state, char* buf, size_t cap,
                             size_t* needed) {
  if (state == nullptr) return null_argument("state");
  nlohmann::json j;
  const og_status st = guarded([&] {
    j = opgrowth::to_json(state->state);
    j["extension"] = opgrowth::to_json(state->extension);
  });
  if (st != OG_OK) return st;
  return copy_text(j.dump(), buf, cap, needed);
}

void og_state_free(og_state* state) { delete state; }

// ---- fits

og_status og_fit(const og_sequence* seq, og_fit_kind kind, int n_lo, int n_hi,
                 og_fit_report* out) {
  if (seq == nullptr) return null_argument("seq");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const opgrowth::ScalingReport r =
        opgrowth::fit_scaling(seq->seq.b, fit_kind(kind), n_lo, n_hi);
    *out = {kind,
            r.n_lo,
            r.n_hi,
            r.slope,
            r.intercept,
            r.rms_residual,
            r.normalized_rms_residual,
            r.curvature_diagnostic,
            r.second_difference_diagnostic};
  });
}

og_status og_fit_csv(const og_sequence* seq, og_fit_kind kind, int n_lo,
                     int n_hi, char* buf, size_t cap, size_t* needed) {
  if (seq == nullptr) return null_argument("seq");
  std::string text;
  const og_status st = guarded([&] {
    const opgrowth::ScalingReport r =
        opgrowth::fit_scaling(seq->seq.b, fit_kind(kind), n_lo, n_hi);
    text = "n,x,y,fitted,residual,W\n";
    using opgrowth::format_double;
    for (const opgrowth::FitPoint& p : r.points) {
      text += std::to_string(p.n) + ',' + format_double(p.x) + ',' +
              format_double(p.y) + ',' + format_double(p.fitted) + ',' +
              format_double(p.residual) + ',' + format_double(p.w) + '\n';
    }
  });
  if (st != OG_OK) return st;
  return copy_text(text, buf, cap, needed);
}

og_status og_fit_report_json(const og_fit_report* report, char* buf,
                             size_t cap, size_t* needed) {
  if (report == nullptr) return null_argument("report");
  nlohmann::json j;
  const og_status st = guarded([&] {
    opgrowth::ScalingReport r;
    r.kind = fit_kind(report->kind);
    r.n_lo = report->n_lo;
    r.n_hi = report->n_hi;
    r.slope = report->slope;
    r.intercept = report->intercept;
    r.rms_residual = report->rms_residual;
    r.normalized_rms_residual = report->normalized_rms_residual;
    r.curvature_diagnostic = report->curvature_diagnostic;
    r.second_difference_diagnostic = report->second_difference_diagnostic;
    j = opgrowth::to_json(r);
  });
  if (st != OG_OK) return st;
  return copy_text(j.dump(), buf, cap, needed);
}

// ---- collapse

og_collapse_options og_collapse_options_default(void) {
  const opgrowth::CollapseOptions d;
  return {d.threshold, d.n_min, d.depth_slope};
}

og_status og_collapse_run(const og_sequence* reference, const double* g,
                          const og_sequence* const* runs, size_t count,
                          const og_collapse_options* options,
                          og_collapse** out) {
  if (reference == nullptr) return null_argument("reference");
  if (g == nullptr) return null_argument("g");
  if (runs == nullptr) return null_argument("runs");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  const og_collapse_options o =
      options != nullptr ? *options : og_collapse_options_default();
  return guarded([&] {
    std::vector<opgrowth::CollapseRun> rs;
    for (size_t i = 0; i < count; ++i) {
      if (runs[i] == nullptr) {
        opgrowth::fail(opgrowth::ErrorCode::invalid_argument,
                       "runs[" + std::to_string(i) + "] is NULL");
      }
      rs.push_back({g[i], runs[i]->seq.b});
    }
    auto c = std::make_unique<og_collapse>();
    c->report = opgrowth::collapse(reference->seq.b, rs,
                                   {o.threshold, o.n_min, o.depth_slope});
    *out = c.release();
  });
}

double og_collapse_error(const og_collapse* c) {
  return c == nullptr ? NAN : c->report.pairwise_collapse_error;
}

double og_collapse_n_c_slope(const og_collapse* c) {
  return c == nullptr ? NAN : c->report.n_c_slope;
}

double og_collapse_shift_spread(const og_collapse* c) {
  return c == nullptr ? NAN : c->report.shift_relative_spread;
}

og_status og_collapse_json(const og_collapse* c, char* buf, size_t cap,
                           size_t* needed) {
  if (c == nullptr) return null_argument("collapse");
  return copy_text(opgrowth::to_json(c->report).dump(), buf, cap, needed);
}

og_status og_collapse_csv(const og_collapse* c, char* buf, size_t cap,
                          size_t* needed) {
  if (c == nullptr) return null_argument("collapse");
  return copy_text(opgrowth::collapse_csv(c->report), buf, cap, needed);
}

void og_collapse_free(og_collapse* c) { delete c; }

// ---- operators

og_status og_operator_from_text(const char* text, og_operator** out) {
  if (text == nullptr) return null_argument("text");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto op = std::make_unique<og_operator>();
    op->vector = opgrowth::OperatorVector::from_text(text);
    *out = op.release();
  });
}

og_status og_operator_to_text(const og_operator* op, char* buf, size_t cap,
                              size_t* needed) {
  if (op == nullptr) return null_argument("op");
  return copy_text(op->vector.to_text(), buf, cap, needed);
}

size_t og_operator_size(const og_operator* op) {
  return op == nullptr ? 0 : op->vector.size();
}

double og_operator_norm(const og_operator* op) {
  return op == nullptr ? NAN : opgrowth::norm(op->vector);
}

og_status og_operator_apply_liouvillian(const og_model* model,
                                        const og_operator* op, int threads,
                                        og_operator** out) {
  if (model == nullptr) return null_argument("model");
  if (op == nullptr) return null_argument("op");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<og_operator>();
    r->vector = opgrowth::apply_liouvillian(model->config.hamiltonian,
                                            op->vector,
                                            {.threads = threads, .max_terms = 0});
    *out = r.release();
  });
}

void og_operator_free(og_operator* op) { delete op; }

}  // extern "C"
