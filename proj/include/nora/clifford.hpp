// SPDX-License-Identifier: Apache-2.0
#pragma once

// Clifford group elements modulo global phase, U = w(a) mu(S):
//   U w(v) U† = chi([[a, Sv]]) w(Sv),   S^T J S = J.

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "nora/field.hpp"
#include "nora/rng.hpp"
#include "nora/weyl.hpp"

namespace nora {

/// The symplectic form J = [[0,1],[-1,0]]^{⊕n}.
inline FieldMatrix symplectic_form(std::size_t n, unsigned modulus) {
  FieldMatrix j(2 * n, 2 * n, modulus);
  for (std::size_t i = 0; i < n; ++i) {
    j(2 * i, 2 * i + 1) = 1;
    j(2 * i + 1, 2 * i) = static_cast<elem_t>(modulus - 1);
  }
  return j;
}

/// |Sp(2n, F_d)| = d^{n^2} · Π_{i=1..n} (d^{2i} − 1). Throws on uint64 overflow.
inline std::uint64_t symplectic_group_order(std::size_t n, unsigned d) {
  auto checked_mul = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("symplectic group order overflows");
    return r;
  };
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < n * n; ++i) order = checked_mul(order, d);
  std::uint64_t d2i = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    d2i = checked_mul(d2i, std::uint64_t{d} * d);
    order = checked_mul(order, d2i - 1);
  }
  return order;
}

class SymplecticClifford {
 public:
  SymplecticClifford(FieldMatrix s, std::vector<elem_t> a) : s_(std::move(s)), a_(std::move(a)) {
    if (s_.rows() != s_.cols() || s_.rows() % 2 != 0 || a_.size() != s_.rows())
      throw std::invalid_argument("Clifford needs a 2n x 2n matrix and a length-2n displacement");
  }

  static SymplecticClifford identity(std::size_t n, unsigned modulus) {
    return {FieldMatrix::identity(2 * n, modulus), std::vector<elem_t>(2 * n, 0)};
  }

  std::size_t n() const noexcept { return s_.rows() / 2; }
  unsigned modulus() const noexcept { return s_.modulus(); }
  const FieldMatrix& matrix() const noexcept { return s_; }
  std::span<const elem_t> displacement() const noexcept { return a_; }

  friend bool operator==(const SymplecticClifford&, const SymplecticClifford&) = default;

 private:
  FieldMatrix s_;
  std::vector<elem_t> a_;
};

/// True iff S^T J S = J.
inline bool validate(const SymplecticClifford& c) {
  const FieldMatrix j = symplectic_form(c.n(), c.modulus());
  return c.matrix().transpose() * j * c.matrix() == j;
}

namespace detail {
inline void require_compatible(const SymplecticClifford& c, std::size_t n, unsigned d) {
  require_same_modulus(c.modulus(), d);
  if (c.n() != n) throw std::invalid_argument("Clifford and operand act on different site counts");
}
}  // namespace detail

inline WeylVector apply_to_weyl(const SymplecticClifford& c, const WeylVector& v) {
  detail::require_compatible(c, v.n(), v.modulus());
  std::vector<elem_t> image = c.matrix().apply(v.components());
  const PrimeField& f = v.field();
  const elem_t phase = f.add(v.phase(), symplectic_product(c.displacement(), image, f));
  return WeylVector(std::move(image), phase, v.modulus());
}

/// Applies a q-site Clifford to the listed sites of an n-site row in place:
/// the 2q local components are mapped by S and the phase picks up [[a, Sv]].
inline void apply_local(const SymplecticClifford& c, std::span<const std::size_t> sites,
                        std::span<elem_t> row, elem_t& phase) {
  const std::size_t m = 2 * sites.size();
  const PrimeField f(c.modulus());
  const unsigned d = f.modulus();
  elem_t local[2 * 16];
  std::vector<elem_t> spill;
  elem_t* u = local;
  if (m > sizeof(local)) {
    spill.resize(m);
    u = spill.data();
  }
  bool nonzero = false;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    u[2 * i] = row[2 * sites[i]];
    u[2 * i + 1] = row[2 * sites[i] + 1];
    nonzero |= (u[2 * i] | u[2 * i + 1]) != 0;
  }
  if (!nonzero) return;
  const FieldMatrix& s = c.matrix();
  const auto a = c.displacement();
  unsigned plus = 0, minus = 0;
  for (std::size_t r = 0; r < m; ++r) {
    unsigned acc = 0;
    auto srow = s.row(r);
    for (std::size_t k = 0; k < m; ++k) acc += unsigned{srow[k]} * u[k];
    const auto img = static_cast<elem_t>(acc % d);
    const std::size_t site = sites[r / 2];
    row[2 * site + (r & 1)] = img;
    // [[a, Sv]] = Σ a_p (Sv)_q − a_q (Sv)_p over each site pair.
    if (r & 1)
      plus += unsigned{a[r - 1]} * img;
    else
      minus += unsigned{a[r + 1]} * img;
  }
  phase = f.add(phase, f.sub(static_cast<elem_t>(plus % d), static_cast<elem_t>(minus % d)));
}

/// Lifts a Clifford on q sites to n sites; it acts as the identity elsewhere.
inline SymplecticClifford embed(const SymplecticClifford& c, std::span<const std::size_t> sites, std::size_t n) {
  if (sites.size() != c.n()) throw std::invalid_argument("embed: site list length differs from Clifford size");
  std::set<std::size_t> seen;
  for (auto s : sites) {
    if (s >= n) throw std::out_of_range("embed: site index out of range");
    if (!seen.insert(s).second) throw std::invalid_argument("embed: duplicate site");
  }
  FieldMatrix s = FieldMatrix::identity(2 * n, c.modulus());
  std::vector<elem_t> a(2 * n, 0);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    s(2 * sites[i], 2 * sites[i]) = 0;
    s(2 * sites[i] + 1, 2 * sites[i] + 1) = 0;
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t x = 0; x < 2; ++x) {
      a[2 * sites[i] + x] = c.displacement()[2 * i + x];
      for (std::size_t j = 0; j < sites.size(); ++j)
        for (std::size_t y = 0; y < 2; ++y) s(2 * sites[i] + x, 2 * sites[j] + y) = c.matrix()(2 * i + x, 2 * j + y);
    }
  }
  return {std::move(s), std::move(a)};
}

/// The Clifford c2 ∘ c1 (apply c1 first). With U = w(a) mu(S) the displacement
/// is S2 a1 + a2, which reproduces sequential application exactly.
inline SymplecticClifford compose(const SymplecticClifford& c2, const SymplecticClifford& c1) {
  detail::require_compatible(c2, c1.n(), c1.modulus());
  const PrimeField f(c1.modulus());
  std::vector<elem_t> a = c2.matrix().apply(c1.displacement());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], c2.displacement()[i]);
  return {c2.matrix() * c1.matrix(), std::move(a)};
}

/// S^{-1} = −J S^T J; displacement −S^{-1} a.
inline SymplecticClifford inverse(const SymplecticClifford& c) {
  const FieldMatrix j = symplectic_form(c.n(), c.modulus());
  FieldMatrix s_inv = j * c.matrix().transpose() * j;
  const PrimeField& f = s_inv.field();
  for (std::size_t r = 0; r < s_inv.rows(); ++r)
    for (auto& x : s_inv.row(r)) x = f.neg(x);
  std::vector<elem_t> a = s_inv.apply(c.displacement());
  for (auto& x : a) x = f.neg(x);
  return {std::move(s_inv), std::move(a)};
}

/// Uniformly random Clifford on n sites: S uniform over Sp(2n, F_d), a uniform
/// over GF(d)^{2n}.
///
/// S is built as a uniformly random ordered symplectic basis (v_1, w_1, ...,
/// v_n, w_n). Pair i is drawn from the symplectic complement W of the earlier
/// pairs: v uniform over W \ {0}, then w uniform over {w ∈ W : [[v,w]] = 1}
/// (draw w' with [[v,w']] ≠ 0 and rescale). W shrinks through the projection
/// x ↦ x − [[x,w]] v + [[x,v]] w.
inline SymplecticClifford random_symplectic(std::size_t n, unsigned modulus, Rng& rng) {
  if (n == 0) throw std::invalid_argument("random_symplectic: n must be positive");
  const PrimeField f(modulus);
  const std::size_t dim = 2 * n;
  FieldMatrix basis = FieldMatrix::identity(dim, modulus);  // rows span W
  FieldMatrix s(dim, dim, modulus);
  std::vector<elem_t> v(dim), w(dim), coeff;

  auto random_combination = [&](std::vector<elem_t>& out) {
    std::fill(out.begin(), out.end(), 0);
    with_modulus(modulus, [&](auto mod) {
      for (std::size_t r = 0; r < basis.rows(); ++r) {
        const auto c = static_cast<elem_t>(rng.below(modulus));
        if (c) axpy(std::span<elem_t>(out), basis.row(r), c, mod);
      }
    });
  };
  auto is_zero = [](const std::vector<elem_t>& x) {
    return std::all_of(x.begin(), x.end(), [](elem_t e) { return e == 0; });
  };

  for (std::size_t i = 0; i < n; ++i) {
    do random_combination(v);
    while (is_zero(v));
    elem_t vw;
    do {
      random_combination(w);
      vw = symplectic_product(v, w, f);
    } while (vw == 0);
    const elem_t scale_by = f.inv(vw);
    for (auto& x : w) x = f.mul(x, scale_by);
    for (std::size_t r = 0; r < dim; ++r) {
      s(r, 2 * i) = v[r];
      s(r, 2 * i + 1) = w[r];
    }
    if (i + 1 == n) break;
    FieldMatrix projected(basis.rows(), dim, modulus);
    for (std::size_t r = 0; r < basis.rows(); ++r) {
      auto x = basis.row(r);
      auto out = projected.row(r);
      const elem_t xw = symplectic_product(x, w, f), xv = symplectic_product(x, v, f);
      for (std::size_t c = 0; c < dim; ++c) out[c] = f.add(f.sub(x[c], f.mul(xw, v[c])), f.mul(xv, w[c]));
    }
    auto reduced = rref(std::move(projected));
    reduced.matrix.truncate_rows(reduced.rank);
    basis = std::move(reduced.matrix);
  }

  std::vector<elem_t> a(dim);
  for (auto& x : a) x = static_cast<elem_t>(rng.below(modulus));
  return {std::move(s), std::move(a)};
}

}  // namespace nora
