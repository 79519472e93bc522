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

#include "opgrowth/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

#include "opgrowth/error.hpp"

namespace opgrowth {
namespace {

constexpr std::uint64_t mix(std::uint64_t v) noexcept {
  v += 0x9e3779b97f4a7c15ull;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
  return v ^ (v >> 31);
}

constexpr std::uint64_t hash_words(std::int32_t start, std::uint64_t x0,
                                   std::uint64_t x1, std::uint64_t z0,
                                   std::uint64_t z1) noexcept {
  std::uint64_t h = mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(start)));
  h = mix(h ^ x0);
  h = mix(h ^ x1);
  h = mix(h ^ z0);
  h = mix(h ^ z1);
  return h;
}

constexpr std::uint32_t kIdentityTag =
    static_cast<std::uint32_t>(hash_words(0, 0, 0, 0, 0) >> 32);

struct Aligned {
  int origin;
  Mask xa, za, xb, zb;
};

Aligned align(const PauliString& a, const PauliString& b) {
  if (a.is_identity() || b.is_identity()) {
    const PauliString& s = a.is_identity() ? b : a;
    const bool a_is_s = !a.is_identity();
    return {s.window_start(), a_is_s ? s.x_mask() : 0, a_is_s ? s.z_mask() : 0,
            a_is_s ? 0 : s.x_mask(), a_is_s ? 0 : s.z_mask()};
  }
  const int origin = std::min(a.window_start(), b.window_start());
  const int end = std::max(a.window_end(), b.window_end());
  if (end - origin + 1 > PauliString::kMaxWindow) {
    fail(ErrorCode::support_overflow,
         "combined support of " + a.to_string() + " and " + b.to_string() +
             " exceeds " + std::to_string(PauliString::kMaxWindow) + " sites");
  }
  const int sa = a.window_start() - origin;
  const int sb = b.window_start() - origin;
  return {origin, a.x_mask() << sa, a.z_mask() << sa, b.x_mask() << sb,
          b.z_mask() << sb};
}

}  // namespace

char pauli_letter(Pauli p) noexcept {
  switch (p) {
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
    case Pauli::I:
      break;
  }
  return 'I';
}

PauliString::PauliString() noexcept : tag_(kIdentityTag) {}

PauliString PauliString::from_masks(int origin, Mask x, Mask z) noexcept {
  PauliString s;
  const Mask support = x | z;
  if (support == 0) return s;
  const int lo = detail::ctz(support);
  s.x_ = split(x >> lo);
  s.z_ = split(z >> lo);
  s.start_ = origin + lo;
  s.tag_ = static_cast<std::uint32_t>(s.hash() >> 32);
  return s;
}

PauliString PauliString::single(int site, Pauli p) noexcept {
  const auto bits = static_cast<unsigned>(p);
  return from_masks(site, bits & 1u, (bits >> 1) & 1u);
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<std::pair<int, Pauli>> sites;
  std::size_t pos = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::parse,
         "cannot parse Pauli string '" + std::string(text) + "': " + why);
  };
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) break;
    const char letter = text[pos];
    Pauli p;
    switch (letter) {
      case 'X': p = Pauli::X; break;
      case 'Y': p = Pauli::Y; break;
      case 'Z': p = Pauli::Z; break;
      case 'I':
        if (pos + 1 == text.size() || text[pos + 1] == ' ') {
          ++pos;
          continue;
        }
        p = Pauli::I;
        break;
      default:
        bad(std::string("unexpected character '") + letter + "'");
    }
    if (pos + 1 >= text.size() || text[pos + 1] != '@') bad("expected '@'");
    pos += 2;
    int site = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data() + pos, text.data() + text.size(), site);
    if (ec != std::errc()) bad("expected a site index");
    pos = static_cast<std::size_t>(ptr - text.data());
    if (p != Pauli::I) sites.emplace_back(site, p);
  }
  if (sites.empty()) return {};
  std::sort(sites.begin(), sites.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 1; k < sites.size(); ++k) {
    if (sites[k].first == sites[k - 1].first) {
      bad("site " + std::to_string(sites[k].first) + " appears twice");
    }
  }
  const int origin = sites.front().first;
  if (sites.back().first - origin + 1 > kMaxWindow) {
    fail(ErrorCode::support_overflow,
         "Pauli string '" + std::string(text) + "' is wider than " +
             std::to_string(kMaxWindow) + " sites");
  }
  Mask x = 0, z = 0;
  for (const auto& [site, p] : sites) {
    const auto bits = static_cast<unsigned>(p);
    const Mask bit = Mask{1} << (site - origin);
    if (bits & 1u) x |= bit;
    if (bits & 2u) z |= bit;
  }
  return from_masks(origin, x, z);
}

int PauliString::window_length() const noexcept {
  return detail::bit_width(x_mask() | z_mask());
}

bool PauliString::is_identity() const noexcept {
  return (x_[0] | x_[1] | z_[0] | z_[1]) == 0;
}

Pauli PauliString::at(int site) const noexcept {
  const int l = site - start_;
  if (l < 0 || l >= kMaxWindow) return Pauli::I;
  const unsigned xb = static_cast<unsigned>((x_mask() >> l) & 1);
  const unsigned zb = static_cast<unsigned>((z_mask() >> l) & 1);
  return static_cast<Pauli>(xb | (zb << 1));
}

int PauliString::weight() const noexcept {
  return detail::popcount(x_mask() | z_mask());
}

std::uint64_t PauliString::hash() const noexcept {
  return hash_words(start_, x_[0], x_[1], z_[0], z_[1]);
}

std::string PauliString::to_string() const {
  if (is_identity()) return "I";
  std::string out;
  const int len = window_length();
  for (int l = 0; l < len; ++l) {
    const Pauli p = at(start_ + l);
    if (p == Pauli::I) continue;
    if (!out.empty()) out += ' ';
    out += pauli_letter(p);
    out += '@';
    out += std::to_string(start_ + l);
  }
  return out;
}

bool canonical_less(const PauliString& a, const PauliString& b) noexcept {
  if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
  if (a.start_ != b.start_) return a.start_ < b.start_;
  if (a.x_ != b.x_) return a.x_ < b.x_;
  return a.z_ < b.z_;
}

PhasedString multiply(const PauliString& a, const PauliString& b) {
  const Aligned m = align(a, b);
  return {PauliString::from_masks(m.origin, m.xa ^ m.xb, m.za ^ m.zb),
          detail::product_phase(m.xa, m.za, m.xb, m.zb)};
}

int commutation_parity(const PauliString& a, const PauliString& b) {
  if (a.is_identity() || b.is_identity()) return 0;
  // Disjoint windows always commute; skip the width check for them.
  if (a.window_end() < b.window_start() || b.window_end() < a.window_start()) {
    return 0;
  }
  const Aligned m = align(a, b);
  return detail::symplectic_parity(m.xa, m.za, m.xb, m.zb);
}

std::optional<PhasedString> commutator(const PauliString& a,
                                       const PauliString& b) {
  if (commutation_parity(a, b) == 0) return std::nullopt;
  return multiply(a, b);
}

}  // namespace opgrowth
