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

#include "opgrowth/lanczos.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "opgrowth/error.hpp"

namespace opgrowth {
namespace {

// b_n below this fraction of the largest coefficient so far means the Krylov
// space closed (exactly zero up to rounding).
constexpr double kExhaustedRelative = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate(int n_max, const LanczosOptions& options) {
  if (n_max < 1) fail(ErrorCode::invalid_argument, "n_max must be >= 1");
  if (!(options.epsilon >= 0.0)) {
    fail(ErrorCode::invalid_argument, "epsilon must be >= 0");
  }
}

// One step of the recursion. Returns the unnormalized A_n.
OperatorVector next_residual(const HamiltonianSpec& H,
                             const OperatorVector& current,
                             const OperatorVector& previous, double b_prev,
                             const LanczosOptions& options) {
  OperatorVector a = apply_liouvillian(
      H, current, {.threads = options.threads, .max_terms = options.max_terms});
  if (!previous.empty()) a = axpy(b_prev, previous, a);
  return a;
}

void divide(OperatorVector& v, double d) {
  std::vector<Term> terms(v.terms().begin(), v.terms().end());
  for (Term& t : terms) t.coeff /= d;
  std::erase_if(terms, [](const Term& t) { return t.coeff == 0.0; });
  v = OperatorVector::from_canonical(std::move(terms));
}

}  // namespace

std::string status_name(LanczosStatus s) {
  switch (s) {
    case LanczosStatus::krylov_exhausted:
      return "krylov_exhausted";
    case LanczosStatus::memory_budget_exceeded:
      return "memory_budget_exceeded";
    case LanczosStatus::complete:
      break;
  }
  return "complete";
}

LanczosSequence run_lanczos(const HamiltonianSpec& H, const ObservableSpec& O,
                            int n_max, const LanczosOptions& options) {
  LanczosSequence seq = run_lanczos(H, O.to_operator(), n_max, options);
  seq.meta.model.observable = O;
  seq.meta.initial_operator.clear();
  return seq;
}

LanczosSequence run_lanczos(const HamiltonianSpec& H, const OperatorVector& O0,
                            int n_max, const LanczosOptions& options) {
  validate(n_max, options);
  if (std::abs(norm(O0) - 1.0) > 1e-12) {
    fail(ErrorCode::invalid_argument, "initial operator must have unit norm");
  }
  const auto t_start = Clock::now();

  LanczosSequence seq;
  LanczosMeta& meta = seq.meta;
  meta.model.hamiltonian = H;
  meta.initial_operator = O0.size() == 1
                              ? O0.terms().front().string.to_string()
                              : std::to_string(O0.size()) + " terms";
  meta.n_max = n_max;
  meta.epsilon = options.epsilon;
  meta.max_terms = options.max_terms;
  meta.threads = std::max(1, options.threads);

  OperatorVector previous;
  OperatorVector current = O0;
  meta.term_counts.push_back(current.size());
  double discarded_sq = 0.0;
  double b_largest = 0.0;

  for (int n = 1; n <= n_max; ++n) {
    const auto t_step = Clock::now();
    OperatorVector a;
    try {
      a = next_residual(H, current, previous, seq.b.back(), options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::memory_budget) throw;
      meta.status = LanczosStatus::memory_budget_exceeded;
      meta.terminated_at = n;
      break;
    }
    const std::size_t raw_terms = a.size();
    if (options.epsilon > 0.0) {
      PruneResult pruned = prune(a, options.epsilon);
      discarded_sq += pruned.discarded_weight * pruned.discarded_weight;
      a = std::move(pruned.vector);
    }
    const double bn = norm(a);
    if (bn == 0.0 || bn <= kExhaustedRelative * b_largest) {
      meta.status = LanczosStatus::krylov_exhausted;
      meta.terminated_at = n;
      break;
    }
    b_largest = std::max(b_largest, bn);
    seq.b.push_back(bn);
    divide(a, bn);

    meta.peak_memory_bytes = std::max(
        meta.peak_memory_bytes,
        sizeof(Term) * (previous.size() + current.size() + 2 * raw_terms));
    previous = std::move(current);
    current = std::move(a);
    meta.term_counts.push_back(current.size());
    meta.step_seconds.push_back(seconds_since(t_step));
    if (options.progress) {
      options.progress({n, bn, current.size(), meta.step_seconds.back()});
    }
  }
  meta.discarded_weight = std::sqrt(discarded_sq);
  meta.wall_seconds = seconds_since(t_start);
  return seq;
}

double krylov_basis_overlap_check(const HamiltonianSpec& H,
                                  const ObservableSpec& O, int n_check,
                                  const LanczosOptions& options) {
  validate(n_check, options);
  if (n_check > 20) {
    fail(ErrorCode::invalid_argument,
         "overlap check stores every basis vector; n_check must be <= 20");
  }
  std::vector<OperatorVector> basis{O.to_operator()};
  std::size_t stored = basis.front().size();
  double b_prev = 0.0;
  for (int n = 1; n <= n_check; ++n) {
    const OperatorVector empty;
    OperatorVector a = next_residual(H, basis.back(),
                                     n >= 2 ? basis[n - 2] : empty, b_prev,
                                     options);
    if (options.epsilon > 0.0) a = prune(a, options.epsilon).vector;
    const double bn = norm(a);
    if (bn == 0.0) break;
    divide(a, bn);
    stored += a.size();
    if (options.max_terms != 0 && stored > options.max_terms) {
      fail(ErrorCode::memory_budget,
           "stored Krylov basis exceeds the term budget of " +
               std::to_string(options.max_terms));
    }
    basis.push_back(std::move(a));
    b_prev = bn;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      worst = std::max(worst, std::abs(inner_product(basis[i], basis[j])));
    }
  }
  return worst;
}

nlohmann::json to_json(const LanczosMeta& meta) {
  nlohmann::json j;
  j["source"] = meta.source;
  j["model"] = to_json(meta.model);
  if (meta.initial_operator.empty()) {
    j["observable"] = meta.model.observable.name();
  } else {
    j["model"].erase("observable");
    j["observable"] = nullptr;
    j["initial_operator"] = meta.initial_operator;
  }
  j["n_max"] = meta.n_max;
  j["epsilon"] = meta.epsilon;
  j["max_terms"] = meta.max_terms;
  j["threads"] = meta.threads;
  j["status"] = status_name(meta.status);
  j["terminated_at"] = meta.terminated_at >= 0
                           ? nlohmann::json(meta.terminated_at)
                           : nlohmann::json(nullptr);
  j["discarded_weight"] = meta.discarded_weight;
  j["term_counts"] = meta.term_counts;
  j["step_seconds"] = meta.step_seconds;
  j["peak_memory_bytes"] = meta.peak_memory_bytes;
  j["wall_seconds"] = meta.wall_seconds;
  if (meta.source == "dense_oracle") j["oracle_sites"] = meta.oracle_sites;
  return j;
}

}  // namespace opgrowth
