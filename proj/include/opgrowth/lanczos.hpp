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
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opgrowth/model.hpp"

namespace opgrowth {

enum class LanczosStatus { complete, krylov_exhausted, memory_budget_exceeded };

std::string status_name(LanczosStatus s);

struct LanczosMeta {
  ModelConfig model;
  // Set when O_0 was given explicitly instead of as a named observable.
  std::string initial_operator;
  int n_max = 0;
  double epsilon = 0.0;
  std::size_t max_terms = 0;
  int threads = 1;
  LanczosStatus status = LanczosStatus::complete;
  int terminated_at = -1;  // n at which the run stopped early, else -1
  double discarded_weight = 0.0;  // root-sum-square over all pruning steps
  std::vector<std::size_t> term_counts;  // terms in O_n, n = 0..depth
  std::vector<double> step_seconds;      // n = 1..depth
  std::size_t peak_memory_bytes = 0;
  double wall_seconds = 0.0;
  std::string source = "sparse";  // or "dense_oracle"
  int oracle_sites = 0;
};

/// Lanczos coefficients b[0..depth] with b[0] = 0 and b[n] > 0 otherwise.
/// An early stop is reported in meta.status, never as a zero entry.
struct LanczosSequence {
  std::vector<double> b{0.0};
  LanczosMeta meta;

  int depth() const noexcept { return static_cast<int>(b.size()) - 1; }
  bool complete() const noexcept {
    return meta.status == LanczosStatus::complete;
  }
};

struct LanczosStep {
  int n = 0;
  double b = 0.0;
  std::size_t terms = 0;
  double seconds = 0.0;
};

struct LanczosOptions {
  double epsilon = 0.0;        // pruning threshold on |coefficient|, 0 = exact
  std::size_t max_terms = 0;   // per-vector term cap, 0 = unlimited
  int threads = 1;
  std::function<void(const LanczosStep&)> progress;
};

/// Runs the two-term Krylov recursion on the infinite chain.
///
/// Works in the real representation O_n = i^n R_n with [H, A] = i B(A):
///   A_n = B(R_{n-1}) + b_{n-1} R_{n-2},  b_n = |A_n|,  R_n = A_n / b_n,
/// which is the complex recursion A_n = L O_{n-1} - b_{n-1} O_{n-2} with the
/// phase i^n factored out. Only R_{n-1} and R_{n-2} are held in memory.
LanczosSequence run_lanczos(const HamiltonianSpec& H, const ObservableSpec& O,
                            int n_max, const LanczosOptions& options = {});

/// Same recursion from an explicit unit-norm O_0.
LanczosSequence run_lanczos(const HamiltonianSpec& H, const OperatorVector& O0,
                            int n_max, const LanczosOptions& options = {});

/// Max |(O_i|O_j)| over 0 <= i < j <= n_check. Keeps every basis vector, so
/// n_check is limited to 20 and options.max_terms caps the total stored.
double krylov_basis_overlap_check(const HamiltonianSpec& H,
                                  const ObservableSpec& O, int n_check,
                                  const LanczosOptions& options = {});

nlohmann::json to_json(const LanczosMeta& meta);

}  // namespace opgrowth
