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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opgrowth/pauli.hpp"

namespace opgrowth {

struct Term {
  PauliString string;
  double coeff = 0.0;
};

/// Sparse real combination of Pauli strings, an element of operator space
/// under the infinite-temperature inner product (A|B) = Tr[A^dagger B] / D.
///
/// Terms are kept sorted by canonical_less with unique strings and no exact
/// zeros, so every reduction visits terms in the same order on every run.
class OperatorVector {
 public:
  OperatorVector() = default;
  explicit OperatorVector(PauliString s, double coeff = 1.0);

  // Sorts, sums duplicates (in input order) and drops exact zeros.
  static OperatorVector from_terms(std::vector<Term> terms);
  // Caller guarantees canonical order, unique strings and nonzero coeffs.
  static OperatorVector from_canonical(std::vector<Term> terms);

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  double coefficient(const PauliString& s) const noexcept;

  void scale(double factor);
  OperatorVector scaled(double factor) const;

  // One term per line, "coefficient<TAB>string", canonical order, 17
  // significant digits.
  std::string to_text() const;
  static OperatorVector from_text(std::string_view text);

  friend bool operator==(const OperatorVector& a, const OperatorVector& b);

 private:
  std::vector<Term> terms_;
};

bool operator==(const Term& a, const Term& b);

double inner_product(const OperatorVector& a, const OperatorVector& b);
double norm(const OperatorVector& a);
double squared_norm(const OperatorVector& a);

// alpha * x + y, exact zeros removed.
OperatorVector axpy(double alpha, const OperatorVector& x,
                    const OperatorVector& y);

struct PruneResult {
  OperatorVector vector;
  double discarded_weight = 0.0;  // root-sum-square of dropped coefficients
};

PruneResult prune(const OperatorVector& a, double epsilon);

}  // namespace opgrowth
