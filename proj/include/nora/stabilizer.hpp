// SPDX-License-Identifier: Apache-2.0
#pragma once

// Stabilizer tableaus over GF(d): independent, mutually commuting generator
// rows plus chi-exponent phases. Row i with phase s_i stands for the
// stabilizer chi^{s_i} w(g_i). Because the rows commute, the group element
// Σ c_i g_i carries the phase Σ c_i s_i.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nora/clifford.hpp"
#include "nora/field.hpp"
#include "nora/weyl.hpp"

namespace nora {

/// A set of site indices out of n. Stored sorted.
class RegionMask {
 public:
  RegionMask() = default;
  RegionMask(std::vector<std::size_t> sites, std::size_t n) : sites_(std::move(sites)), n_(n) {
    std::sort(sites_.begin(), sites_.end());
    if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
      throw std::invalid_argument("region: duplicate site");
    if (!sites_.empty() && sites_.back() >= n_) throw std::out_of_range("region: site index out of range");
  }

  /// Sites [first, last).
  static RegionMask range(std::size_t first, std::size_t last, std::size_t n) {
    std::vector<std::size_t> s(last - first);
    std::iota(s.begin(), s.end(), first);
    return {std::move(s), n};
  }

  const std::vector<std::size_t>& sites() const noexcept { return sites_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }
  bool contains(std::size_t site) const { return std::binary_search(sites_.begin(), sites_.end(), site); }

  RegionMask complement() const {
    std::vector<std::size_t> out;
    out.reserve(n_ - sites_.size());
    for (std::size_t i = 0, j = 0; i < n_; ++i) {
      if (j < sites_.size() && sites_[j] == i)
        ++j;
      else
        out.push_back(i);
    }
    return {std::move(out), n_};
  }

  friend bool disjoint(const RegionMask& a, const RegionMask& b) {
    std::vector<std::size_t> common;
    std::set_intersection(a.sites_.begin(), a.sites_.end(), b.sites_.begin(), b.sites_.end(),
                          std::back_inserter(common));
    return common.empty();
  }
  friend RegionMask unite(const RegionMask& a, const RegionMask& b) {
    std::vector<std::size_t> u;
    std::set_union(a.sites_.begin(), a.sites_.end(), b.sites_.begin(), b.sites_.end(), std::back_inserter(u));
    return {std::move(u), std::max(a.n_, b.n_)};
  }
  friend bool operator==(const RegionMask&, const RegionMask&) = default;

 private:
  std::vector<std::size_t> sites_;
  std::size_t n_ = 0;
};

class StabilizerTableau {
 public:
  /// Takes rows as given; use validate() to check the isotropy/independence
  /// invariants on externally supplied data.
  StabilizerTableau(FieldMatrix generators, std::vector<elem_t> phases)
      : gens_(std::move(generators)), phases_(std::move(phases)) {
    if (gens_.cols() % 2 != 0) throw std::invalid_argument("tableau rows need 2n columns");
    if (phases_.size() != gens_.rows()) throw std::invalid_argument("one phase per generator required");
    for (auto& s : phases_) s = gens_.field().reduce(s);
  }

  std::size_t n() const noexcept { return gens_.cols() / 2; }
  std::size_t num_generators() const noexcept { return gens_.rows(); }
  unsigned modulus() const noexcept { return gens_.modulus(); }
  bool is_pure() const noexcept { return num_generators() == n(); }

  const FieldMatrix& generators() const noexcept { return gens_; }
  const std::vector<elem_t>& phases() const noexcept { return phases_; }

  WeylVector generator(std::size_t i) const {
    auto r = gens_.row(i);
    return WeylVector(std::vector<elem_t>(r.begin(), r.end()), phases_[i], modulus());
  }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const {
    const PrimeField& f = gens_.field();
    if (num_generators() > n()) throw std::invalid_argument("more generators than sites");
    for (std::size_t i = 0; i < num_generators(); ++i)
      for (std::size_t j = i + 1; j < num_generators(); ++j)
        if (symplectic_product(gens_.row(i), gens_.row(j), f) != 0)
          throw std::invalid_argument("generators " + std::to_string(i) + " and " + std::to_string(j) +
                                      " do not commute");
    if (rank(gens_) != num_generators()) throw std::invalid_argument("generators are linearly dependent");
  }

  /// In-place action of a q-site Clifford on the listed sites.
  void apply_local(const SymplecticClifford& c, std::span<const std::size_t> sites) {
    detail::require_same_modulus(c.modulus(), modulus());
    for (std::size_t i = 0; i < num_generators(); ++i) nora::apply_local(c, sites, gens_.row(i), phases_[i]);
  }

  friend bool operator==(const StabilizerTableau&, const StabilizerTableau&) = default;

 private:
  FieldMatrix gens_;
  std::vector<elem_t> phases_;
};

/// |0...0>: generator i is Z on site i.
inline StabilizerTableau zero_state(std::size_t n, unsigned modulus) {
  if (n == 0) throw std::invalid_argument("zero_state needs n >= 1");
  FieldMatrix g(n, 2 * n, modulus);
  for (std::size_t i = 0; i < n; ++i) g(i, 2 * i) = 1;
  return {std::move(g), std::vector<elem_t>(n, 0)};
}

/// Adds m sites in |0>; old generators act as identity on them.
inline StabilizerTableau append_ancillas(const StabilizerTableau& t, std::size_t m) {
  const std::size_t n = t.n() + m;
  FieldMatrix g(t.num_generators() + m, 2 * n, t.modulus());
  for (std::size_t i = 0; i < t.num_generators(); ++i) {
    auto src = t.generators().row(i);
    std::copy(src.begin(), src.end(), g.row(i).begin());
  }
  for (std::size_t j = 0; j < m; ++j) g(t.num_generators() + j, 2 * (t.n() + j)) = 1;
  std::vector<elem_t> phases = t.phases();
  phases.resize(g.rows(), 0);
  return {std::move(g), std::move(phases)};
}

inline StabilizerTableau apply_clifford(const StabilizerTableau& t, const SymplecticClifford& c) {
  detail::require_compatible(c, t.n(), t.modulus());
  FieldMatrix g(t.num_generators(), 2 * t.n(), t.modulus());
  std::vector<elem_t> phases(t.num_generators());
  for (std::size_t i = 0; i < t.num_generators(); ++i) {
    WeylVector image = apply_to_weyl(c, t.generator(i));
    std::copy(image.components().begin(), image.components().end(), g.row(i).begin());
    phases[i] = image.phase();
  }
  return {std::move(g), std::move(phases)};
}

/// Element Σ c_i g_i of the stabilizer group together with its phase.
inline WeylVector group_element(const StabilizerTableau& t, std::span<const elem_t> coefficients) {
  if (coefficients.size() != t.num_generators()) throw std::invalid_argument("one coefficient per generator");
  const PrimeField& f = t.generators().field();
  std::vector<elem_t> v(2 * t.n(), 0);
  elem_t phase = 0;
  with_modulus(t.modulus(), [&](auto mod) {
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      if (!coefficients[i]) continue;
      axpy(std::span<elem_t>(v), t.generators().row(i), coefficients[i], mod);
      phase = f.add(phase, f.mul(coefficients[i], t.phases()[i]));
    }
  });
  return WeylVector(std::move(v), phase, t.modulus());
}

/// k_A = log_d |M_A|, M_A the stabilizer elements supported inside A.
///
/// The columns of the complement B are moved to the front and the matrix is
/// brought to RREF; rows whose pivot falls in the A block have a vanishing B
/// part and form a basis of M_A.
inline std::size_t reduced_group_rank(const StabilizerTableau& t, const RegionMask& a) {
  if (a.n() != t.n()) throw std::invalid_argument("region and tableau disagree on site count");
  const RegionMask b = a.complement();
  std::vector<std::size_t> columns;
  columns.reserve(2 * t.n());
  for (auto s : b.sites()) {
    columns.push_back(2 * s);
    columns.push_back(2 * s + 1);
  }
  const std::size_t split = columns.size();
  for (auto s : a.sites()) {
    columns.push_back(2 * s);
    columns.push_back(2 * s + 1);
  }
  FieldMatrix permuted = t.generators().select_columns(columns);
  const auto pivots = rref_in_place(permuted);
  return static_cast<std::size_t>(std::count_if(pivots.begin(), pivots.end(), [&](std::size_t c) { return c >= split; }));
}

/// S(A) = |A| − k_A in units of log d. For mixed tableaus this is the flat
/// spectrum entropy of the reduced projector.
inline std::size_t entropy(const StabilizerTableau& t, const RegionMask& a) {
  return a.size() - reduced_group_rank(t, a);
}

/// I(A:R) = S(A) + S(R) − S(AR) in units of log d.
inline std::size_t mutual_information(const StabilizerTableau& t, const RegionMask& a, const RegionMask& r) {
  if (!disjoint(a, r)) throw std::invalid_argument("mutual information needs disjoint regions");
  return entropy(t, a) + entropy(t, r) - entropy(t, unite(a, r));
}

inline std::vector<std::size_t> row_weights(const StabilizerTableau& t) {
  std::vector<std::size_t> w(t.num_generators());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weight(t.generators().row(i));
  return w;
}

/// Weights restricted to a subset of sites.
inline std::vector<std::size_t> row_weights(const StabilizerTableau& t, const RegionMask& on) {
  std::vector<std::size_t> w(t.num_generators(), 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto r = t.generators().row(i);
    for (auto s : on.sites()) w[i] += (r[2 * s] | r[2 * s + 1]) != 0;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Plain-text format:
//
//   stabilizer_tableau d=<d> n=<n> rows=<k>
//   <phase> <g_1> ... <g_2n>        (k lines, entries in [0, d))

inline void write_tableau(std::ostream& out, const StabilizerTableau& t) {
  out << "stabilizer_tableau d=" << t.modulus() << " n=" << t.n() << " rows=" << t.num_generators() << '\n';
  for (std::size_t i = 0; i < t.num_generators(); ++i) {
    out << unsigned{t.phases()[i]};
    for (auto x : t.generators().row(i)) out << ' ' << unsigned{x};
    out << '\n';
  }
}

inline std::string to_text(const StabilizerTableau& t) {
  std::ostringstream out;
  write_tableau(out, t);
  return out.str();
}

inline StabilizerTableau read_tableau(std::istream& in) {
  std::string tag, dkv, nkv, rkv;
  if (!(in >> tag >> dkv >> nkv >> rkv) || tag != "stabilizer_tableau")
    throw std::invalid_argument("missing stabilizer_tableau header");
  auto value = [](const std::string& kv, const std::string& key) -> unsigned long {
    if (!kv.starts_with(key + "=")) throw std::invalid_argument("expected '" + key + "=' in header");
    return std::stoul(kv.substr(key.size() + 1));
  };
  const auto d = static_cast<unsigned>(value(dkv, "d"));
  const std::size_t n = value(nkv, "n"), rows = value(rkv, "rows");
  FieldMatrix g(rows, 2 * n, d);
  std::vector<elem_t> phases(rows);
  auto read_entry = [&]() -> elem_t {
    long long x;
    if (!(in >> x)) throw std::invalid_argument("truncated tableau body");
    if (x < 0 || x >= static_cast<long long>(d)) throw std::invalid_argument("tableau entry out of range");
    return static_cast<elem_t>(x);
  };
  for (std::size_t i = 0; i < rows; ++i) {
    phases[i] = read_entry();
    for (auto& x : g.row(i)) x = read_entry();
  }
  return {std::move(g), std::move(phases)};
}

inline StabilizerTableau from_text(const std::string& text) {
  std::istringstream in(text);
  return read_tableau(in);
}

}  // namespace nora
