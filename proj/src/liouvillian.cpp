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
#include <exception>
#include <thread>

#include "absl/container/flat_hash_map.h"
#include "opgrowth/error.hpp"
#include "opgrowth/model.hpp"

namespace opgrowth {
namespace {

// Shards are ranges of the cached hash tag; canonical order sorts on the tag
// first, so shards are also contiguous ranges of canonical order.
constexpr int kShardBits = 6;

inline int shard_of(const PauliString& s) noexcept {
  return static_cast<int>(s.tag() >> (32 - kShardBits));
}

struct TagHash {
  std::size_t operator()(const PauliString& s) const noexcept {
    return static_cast<std::size_t>(s.tag()) * 0x9e3779b97f4a7c15ull;
  }
};

using Accumulator = absl::flat_hash_map<PauliString, double, TagHash>;

// Calls emit(string, coeff) for every term of B = -i [H, coeff * s], i.e.
// for every Hamiltonian term anticommuting with s: [t, s] = 2 t s = 2 i^k r
// with k odd, contributing 2 * J_t * coeff * (k == 1 ? +1 : -1) to r.
template <class Emit>
void visit_commutators(const HamiltonianSpec& H, const Term& term,
                       Emit&& emit) {
  const PauliString& s = term.string;
  const int width = s.window_length();
  if (width == 0) return;
  if (width + 2 > PauliString::kMaxWindow) {
    fail(ErrorCode::support_overflow,
         "operator support exceeds " +
             std::to_string(PauliString::kMaxWindow - 2) +
             " sites; Lanczos depth too large for the window");
  }
  // Relative bit r refers to site origin + r; the margin bit 0 is site s-1.
  const int origin = s.window_start() - 1;
  const Mask X = s.x_mask() << 1;
  const Mask Z = s.z_mask() << 1;
  const int nY = detail::popcount(X & Z);

  auto emit_product = [&](Mask tx, Mask tz, double coupling) {
    const Mask x = X ^ tx;
    const Mask z = Z ^ tz;
    const int k =
        (detail::popcount(tx & tz) + nY + 2 * detail::popcount(tz & X) -
         detail::popcount(x & z)) &
        3;
    if ((k & 1) == 0) {
      fail(ErrorCode::convention,
           "commutator of Hermitian Pauli strings produced an even phase at " +
               s.to_string());
    }
    const double c = 2.0 * coupling * term.coeff;
    emit(PauliString::from_masks(origin, x, z), k == 1 ? c : -c);
  };

  // Bonds Z_r Z_{r+1}, r = 0..width, anticommute when exactly one of the two
  // sites carries an x component.
  const Mask bond_window = (Mask{1} << (width + 1)) - 1;
  for (Mask m = (X ^ (X >> 1)) & bond_window; m != 0; m &= m - 1) {
    const int r = detail::ctz(m);
    emit_product(0, Mask{3} << r, HamiltonianSpec::coupling_J);
  }
  // h X_r anticommutes with a z component at r.
  if (H.h != 0.0) {
    for (Mask m = Z; m != 0; m &= m - 1) {
      const int r = detail::ctz(m);
      emit_product(Mask{1} << r, 0, HamiltonianSpec::coupling_J * H.h);
    }
  }
  // g_r Z_r anticommutes with an x component at r.
  if (H.longitudinal.profile != FieldProfile::none &&
      H.longitudinal.g != 0.0) {
    for (Mask m = X; m != 0; m &= m - 1) {
      const int r = detail::ctz(m);
      const double g = H.field_at(origin + r);
      if (g != 0.0) {
        emit_product(0, Mask{1} << r, HamiltonianSpec::coupling_J * g);
      }
    }
  }
}

std::vector<Term> accumulate(const HamiltonianSpec& H, const OperatorVector& a,
                             int worker, int workers, std::size_t max_terms) {
  Accumulator acc;
  acc.reserve(std::min<std::size_t>(a.size() * 3 / std::size_t(workers) + 16,
                                    std::size_t{1} << 26));
  for (const Term& t : a.terms()) {
    visit_commutators(H, t, [&](const PauliString& s, double c) {
      if (workers > 1 && shard_of(s) % workers != worker) return;
      acc[s] += c;
    });
    if (max_terms != 0 && acc.size() > max_terms) {
      fail(ErrorCode::memory_budget,
           "Liouvillian output exceeds the term budget of " +
               std::to_string(max_terms));
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [s, c] : acc) {
    if (c != 0.0) out.push_back({s, c});
  }
  Accumulator().swap(acc);
  std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) {
    return canonical_less(x.string, y.string);
  });
  return out;
}

}  // namespace

OperatorVector apply_liouvillian(const HamiltonianSpec& H,
                                 const OperatorVector& a,
                                 const LiouvillianOptions& options) {
  const int workers = std::clamp(options.threads, 1, 1 << kShardBits);
  if (workers == 1) {
    return OperatorVector::from_canonical(
        accumulate(H, a, 0, 1, options.max_terms));
  }

  std::vector<std::vector<Term>> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          parts[w] = accumulate(H, a, w, workers, options.max_terms);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    try {
      parts[0] = accumulate(H, a, 0, workers, options.max_terms);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Workers own disjoint shards; merging their sorted parts reproduces the
  // single-worker result exactly.
  std::vector<Term> merged = std::move(parts[0]);
  for (int w = 1; w < workers; ++w) {
    const auto mid = static_cast<std::ptrdiff_t>(merged.size());
    merged.insert(merged.end(), parts[w].begin(), parts[w].end());
    std::vector<Term>().swap(parts[w]);
    std::inplace_merge(merged.begin(), merged.begin() + mid, merged.end(),
                       [](const Term& x, const Term& y) {
                         return canonical_less(x.string, y.string);
                       });
  }
  if (options.max_terms != 0 && merged.size() > options.max_terms) {
    fail(ErrorCode::memory_budget,
         "Liouvillian output exceeds the term budget of " +
             std::to_string(options.max_terms));
  }
  return OperatorVector::from_canonical(std::move(merged));
}

}  // namespace opgrowth
