// SPDX-License-Identifier: Apache-2.0
#pragma once

// Weyl (generalized Pauli) operators chi^s · w(p1,q1,...,pn,qn) in the
// symplectic vector representation. Components interleave (p_i, q_i) per site,
// where p is the clock (Z) power and q the shift (X) power.

#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nora/field.hpp"

namespace nora {

class WeylVector {
 public:
  WeylVector(std::size_t n, unsigned modulus) : field_(modulus), components_(2 * n, 0) {}

  WeylVector(std::vector<elem_t> components, elem_t phase, unsigned modulus)
      : field_(modulus), components_(std::move(components)), phase_(phase) {
    if (components_.size() % 2 != 0) throw std::invalid_argument("Weyl vector needs 2n components");
    for (auto& c : components_) c = field_.reduce(c);
    phase_ = field_.reduce(phase_);
  }

  /// Single-site operator chi^phase · w(p, q) on `site` of an n-site system.
  static WeylVector single(std::size_t n, std::size_t site, long long p, long long q, unsigned modulus) {
    WeylVector v(n, modulus);
    v.set_site(site, v.field_.reduce(p), v.field_.reduce(q));
    return v;
  }

  std::size_t n() const noexcept { return components_.size() / 2; }
  unsigned modulus() const noexcept { return field_.modulus(); }
  const PrimeField& field() const noexcept { return field_; }

  elem_t p(std::size_t site) const noexcept { return components_[2 * site]; }
  elem_t q(std::size_t site) const noexcept { return components_[2 * site + 1]; }
  void set_site(std::size_t site, elem_t p, elem_t q) {
    components_[2 * site] = field_.reduce(p);
    components_[2 * site + 1] = field_.reduce(q);
  }

  elem_t phase() const noexcept { return phase_; }
  void set_phase(long long s) noexcept { phase_ = field_.reduce(s); }

  std::span<const elem_t> components() const noexcept { return components_; }
  std::span<elem_t> components() noexcept { return components_; }

  bool is_identity() const noexcept {
    for (auto c : components_)
      if (c) return false;
    return true;
  }

  friend bool operator==(const WeylVector&, const WeylVector&) = default;

 private:
  PrimeField field_;
  std::vector<elem_t> components_;
  elem_t phase_ = 0;
};

/// [[v, w]] = v^T J w with J = [[0,1],[-1,0]]^{⊕n}, i.e. Σ_i p_i q'_i − q_i p'_i.
inline elem_t symplectic_product(std::span<const elem_t> v, std::span<const elem_t> w, const PrimeField& f) {
  if (v.size() != w.size()) throw std::invalid_argument("symplectic product: dimension mismatch");
  const unsigned d = f.modulus();
  unsigned plus = 0, minus = 0;
  for (std::size_t i = 0; i + 1 < v.size(); i += 2) {
    plus += unsigned{v[i]} * w[i + 1];
    minus += unsigned{v[i + 1]} * w[i];
    // Keep the accumulators small enough for any modulus <= 251.
    if (plus >= (1u << 30)) plus %= d;
    if (minus >= (1u << 30)) minus %= d;
  }
  return f.sub(static_cast<elem_t>(plus % d), static_cast<elem_t>(minus % d));
}

inline void require_compatible(const WeylVector& v, const WeylVector& w) {
  detail::require_same_modulus(v.modulus(), w.modulus());
  if (v.n() != w.n()) throw std::invalid_argument("Weyl vectors act on different site counts");
}

inline elem_t symplectic_product(const WeylVector& v, const WeylVector& w) {
  require_compatible(v, w);
  return symplectic_product(v.components(), w.components(), v.field());
}

/// w(v) w(w) = chi([[v,w]]/2) w(v+w); phases of the factors add on top.
inline WeylVector weyl_multiply(const WeylVector& v, const WeylVector& w) {
  require_compatible(v, w);
  const PrimeField& f = v.field();
  std::vector<elem_t> sum(v.components().size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = f.add(v.components()[i], w.components()[i]);
  const elem_t correction = f.mul(f.half(), symplectic_product(v, w));
  return WeylVector(std::move(sum), f.add(f.add(v.phase(), w.phase()), correction), v.modulus());
}

inline bool commutes(const WeylVector& v, const WeylVector& w) { return symplectic_product(v, w) == 0; }

/// Number of sites carrying a non-identity factor. Phases are ignored.
inline std::size_t weight(std::span<const elem_t> components) noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < components.size(); i += 2) count += (components[i] | components[i + 1]) != 0;
  return count;
}

inline std::size_t weight(const WeylVector& v) noexcept { return weight(v.components()); }

// ---------------------------------------------------------------------------
// Text form: optional "chi^s · " prefix, then one factor per site joined by
// " ⊗ ". A factor is "I", "Z^p", "X^q" or "Z^pX^q".

inline constexpr std::string_view kTensorSeparator = " ⊗ ";
inline constexpr std::string_view kPhaseSeparator = " · ";

inline std::string to_string(const WeylVector& v) {
  std::ostringstream out;
  if (v.phase() != 0) out << "chi^" << unsigned{v.phase()} << kPhaseSeparator;
  for (std::size_t i = 0; i < v.n(); ++i) {
    if (i) out << kTensorSeparator;
    if (v.p(i) == 0 && v.q(i) == 0) {
      out << 'I';
      continue;
    }
    if (v.p(i)) out << "Z^" << unsigned{v.p(i)};
    if (v.q(i)) out << "X^" << unsigned{v.q(i)};
  }
  return out.str();
}

inline WeylVector parse_weyl(std::string_view text, unsigned modulus) {
  auto fail = [&](const std::string& why) -> WeylVector {
    throw std::invalid_argument("cannot parse Weyl string '" + std::string(text) + "': " + why);
  };
  elem_t phase = 0;
  PrimeField f(modulus);
  if (text.starts_with("chi^")) {
    auto sep = text.find(kPhaseSeparator);
    if (sep == std::string_view::npos) return fail("missing phase separator");
    phase = f.reduce(std::stoll(std::string(text.substr(4, sep - 4))));
    text.remove_prefix(sep + kPhaseSeparator.size());
  }
  std::vector<elem_t> comps;
  while (true) {
    auto sep = text.find(kTensorSeparator);
    std::string_view factor = text.substr(0, sep);
    elem_t p = 0, q = 0;
    if (factor != "I") {
      std::size_t pos = 0;
      auto read_power = [&](char op) -> std::optional<elem_t> {
        if (pos < factor.size() && factor[pos] == op) {
          if (pos + 1 >= factor.size() || factor[pos + 1] != '^') return std::nullopt;
          pos += 2;
          std::size_t start = pos;
          while (pos < factor.size() && factor[pos] >= '0' && factor[pos] <= '9') ++pos;
          if (start == pos) return std::nullopt;
          return f.reduce(std::stoll(std::string(factor.substr(start, pos - start))));
        }
        return elem_t{0};
      };
      auto zp = read_power('Z');
      auto xq = zp ? read_power('X') : std::nullopt;
      if (!zp || !xq || pos != factor.size() || factor.empty()) return fail("bad factor '" + std::string(factor) + "'");
      p = *zp;
      q = *xq;
    }
    comps.push_back(p);
    comps.push_back(q);
    if (sep == std::string_view::npos) break;
    text.remove_prefix(sep + kTensorSeparator.size());
  }
  return WeylVector(std::move(comps), phase, modulus);
}

}  // namespace nora
