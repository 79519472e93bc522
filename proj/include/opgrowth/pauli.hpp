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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace opgrowth {

__extension__ typedef unsigned __int128 Mask;

// Single-site Pauli letter in binary symplectic form: bit 0 is the x
// component, bit 1 the z component. Y carries (1,1) with Y = i X Z.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char pauli_letter(Pauli p) noexcept;

/// A Pauli string on the infinite chain, stored as x/z bit masks over a
/// window that starts at the leftmost non-identity site.
///
/// The window holds at most kMaxWindow sites. Strings are always canonical:
/// bit 0 of the window is non-identity and the window ends at the last
/// non-identity site, or the string is the identity with an empty window.
class PauliString {
 public:
  static constexpr int kMaxWindow = 128;

  PauliString() noexcept;

  // Bit l of x and z refers to site origin + l.
  static PauliString from_masks(int origin, Mask x, Mask z) noexcept;
  static PauliString single(int site, Pauli p) noexcept;
  // Parses the "X@0 Z@2" form; "I" (or an empty string) is the identity.
  static PauliString parse(std::string_view text);

  int window_start() const noexcept { return start_; }
  int window_length() const noexcept;
  int window_end() const noexcept { return start_ + window_length() - 1; }
  bool is_identity() const noexcept;
  Pauli at(int site) const noexcept;
  int weight() const noexcept;

  Mask x_mask() const noexcept { return join(x_); }
  Mask z_mask() const noexcept { return join(z_); }

  // Top 32 bits of hash(); cached because canonical ordering sorts on it.
  std::uint32_t tag() const noexcept { return tag_; }
  std::uint64_t hash() const noexcept;

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  using Words = std::array<std::uint64_t, 2>;

  static Mask join(const Words& w) noexcept {
    return (static_cast<Mask>(w[1]) << 64) | w[0];
  }
  static Words split(Mask m) noexcept {
    return {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m >> 64)};
  }

  Words x_{};
  Words z_{};
  std::int32_t start_ = 0;
  std::uint32_t tag_ = 0;

  friend bool canonical_less(const PauliString&, const PauliString&) noexcept;
};

// Total order used for every reduction over strings: cached hash tag first,
// then window start and bit masks. Independent of platform and thread count.
bool canonical_less(const PauliString& a, const PauliString& b) noexcept;

struct PauliStringHash {
  std::size_t operator()(const PauliString& s) const noexcept {
    return static_cast<std::size_t>(s.hash());
  }
};

// i^phase * string, phase in {0, 1, 2, 3}.
struct PhasedString {
  PauliString string;
  int phase = 0;

  friend bool operator==(const PhasedString&, const PhasedString&) = default;
};

PhasedString multiply(const PauliString& a, const PauliString& b);

// 0 when a and b commute, 1 when they anticommute.
int commutation_parity(const PauliString& a, const PauliString& b);

// [a, b] = 2 a b when the strings anticommute. The returned PhasedString is
// a*b; the factor 2 is implied. Empty when they commute.
std::optional<PhasedString> commutator(const PauliString& a,
                                       const PauliString& b);

namespace detail {

inline int popcount(Mask m) noexcept {
  return __builtin_popcountll(static_cast<std::uint64_t>(m)) +
         __builtin_popcountll(static_cast<std::uint64_t>(m >> 64));
}

inline int ctz(Mask m) noexcept {
  const auto lo = static_cast<std::uint64_t>(m);
  return lo ? __builtin_ctzll(lo)
            : 64 + __builtin_ctzll(static_cast<std::uint64_t>(m >> 64));
}

inline int bit_width(Mask m) noexcept {
  const auto hi = static_cast<std::uint64_t>(m >> 64);
  if (hi) return 128 - __builtin_clzll(hi);
  const auto lo = static_cast<std::uint64_t>(m);
  return lo ? 64 - __builtin_clzll(lo) : 0;
}

// Power of i in (xa, za) * (xb, zb) = i^k (xa^xb, za^zb) on aligned masks.
inline int product_phase(Mask xa, Mask za, Mask xb, Mask zb) noexcept {
  const Mask x = xa ^ xb;
  const Mask z = za ^ zb;
  return (popcount(xa & za) + popcount(xb & zb) + 2 * popcount(za & xb) -
          popcount(x & z)) &
         3;
}

inline int symplectic_parity(Mask xa, Mask za, Mask xb, Mask zb) noexcept {
  return popcount((xa & zb) ^ (za & xb)) & 1;
}

}  // namespace detail

}  // namespace opgrowth
