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

#include "opgrowth/operator_vector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "opgrowth/error.hpp"
#include "format.hpp"

namespace opgrowth {
namespace {

// Blocked summation in a fixed order: partial sums over fixed-size runs of
// terms, combined left to right. The block size never depends on threads.
class OrderedSum {
 public:
  void add(double v) noexcept {
    partial_ += v;
    if (++count_ == kBlock) {
      total_ += partial_;
      partial_ = 0.0;
      count_ = 0;
    }
  }
  double value() const noexcept { return total_ + partial_; }

 private:
  static constexpr std::size_t kBlock = 4096;
  double total_ = 0.0;
  double partial_ = 0.0;
  std::size_t count_ = 0;
};

bool string_less(const Term& a, const Term& b) {
  return canonical_less(a.string, b.string);
}

}  // namespace

OperatorVector::OperatorVector(PauliString s, double coeff) {
  if (coeff != 0.0) terms_.push_back({s, coeff});
}

OperatorVector OperatorVector::from_terms(std::vector<Term> terms) {
  std::stable_sort(terms.begin(), terms.end(), string_less);
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().string == t.string) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  OperatorVector v;
  v.terms_ = std::move(merged);
  return v;
}

OperatorVector OperatorVector::from_canonical(std::vector<Term> terms) {
  OperatorVector v;
  v.terms_ = std::move(terms);
  return v;
}

double OperatorVector::coefficient(const PauliString& s) const noexcept {
  const auto it = std::lower_bound(
      terms_.begin(), terms_.end(), s,
      [](const Term& t, const PauliString& key) {
        return canonical_less(t.string, key);
      });
  if (it != terms_.end() && it->string == s) return it->coeff;
  return 0.0;
}

void OperatorVector::scale(double factor) {
  if (factor == 0.0) {
    terms_.clear();
    return;
  }
  for (Term& t : terms_) t.coeff *= factor;
  std::erase_if(terms_, [](const Term& t) { return t.coeff == 0.0; });
}

OperatorVector OperatorVector::scaled(double factor) const {
  OperatorVector v = *this;
  v.scale(factor);
  return v;
}

std::string OperatorVector::to_text() const {
  std::string out;
  for (const Term& t : terms_) {
    out += format_double(t.coeff);
    out += '\t';
    out += t.string.to_string();
    out += '\n';
  }
  return out;
}

OperatorVector OperatorVector::from_text(std::string_view text) {
  std::vector<Term> terms;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorCode::parse, "operator text line " + std::to_string(line_no) +
                                 ": expected 'coefficient<TAB>string'");
    }
    double coeff = 0.0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + tab, coeff);
    if (ec != std::errc() || ptr != line.data() + tab) {
      fail(ErrorCode::parse, "operator text line " + std::to_string(line_no) +
                                 ": bad coefficient");
    }
    terms.push_back({PauliString::parse(line.substr(tab + 1)), coeff});
  }
  return from_terms(std::move(terms));
}

bool operator==(const Term& a, const Term& b) {
  return a.string == b.string && a.coeff == b.coeff;
}

bool operator==(const OperatorVector& a, const OperatorVector& b) {
  return a.terms_ == b.terms_;
}

double inner_product(const OperatorVector& a, const OperatorVector& b) {
  // Pauli strings are orthonormal, so only shared strings contribute.
  const auto ta = a.terms();
  const auto tb = b.terms();
  OrderedSum sum;
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    if (canonical_less(ta[i].string, tb[j].string)) {
      ++i;
    } else if (canonical_less(tb[j].string, ta[i].string)) {
      ++j;
    } else {
      sum.add(ta[i].coeff * tb[j].coeff);
      ++i;
      ++j;
    }
  }
  return sum.value();
}

double squared_norm(const OperatorVector& a) {
  OrderedSum sum;
  for (const Term& t : a.terms()) sum.add(t.coeff * t.coeff);
  return sum.value();
}

double norm(const OperatorVector& a) { return std::sqrt(squared_norm(a)); }

OperatorVector axpy(double alpha, const OperatorVector& x,
                    const OperatorVector& y) {
  const auto tx = x.terms();
  const auto ty = y.terms();
  std::vector<Term> out;
  out.reserve(tx.size() + ty.size());
  std::size_t i = 0, j = 0;
  auto push = [&](const PauliString& s, double c) {
    if (c != 0.0) out.push_back({s, c});
  };
  while (i < tx.size() || j < ty.size()) {
    if (j == ty.size() ||
        (i < tx.size() && canonical_less(tx[i].string, ty[j].string))) {
      push(tx[i].string, alpha * tx[i].coeff);
      ++i;
    } else if (i == tx.size() || canonical_less(ty[j].string, tx[i].string)) {
      push(ty[j].string, ty[j].coeff);
      ++j;
    } else {
      push(tx[i].string, alpha * tx[i].coeff + ty[j].coeff);
      ++i;
      ++j;
    }
  }
  return OperatorVector::from_canonical(std::move(out));
}

PruneResult prune(const OperatorVector& a, double epsilon) {
  if (!(epsilon >= 0.0)) {
    fail(ErrorCode::invalid_argument, "prune epsilon must be >= 0");
  }
  if (epsilon == 0.0) return {a, 0.0};
  std::vector<Term> kept;
  OrderedSum dropped;
  kept.reserve(a.size());
  for (const Term& t : a.terms()) {
    if (std::abs(t.coeff) < epsilon) {
      dropped.add(t.coeff * t.coeff);
    } else {
      kept.push_back(t);
    }
  }
  return {OperatorVector::from_canonical(std::move(kept)),
          std::sqrt(dropped.value())};
}

}  // namespace opgrowth
