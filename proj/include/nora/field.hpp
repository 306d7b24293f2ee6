// SPDX-License-Identifier: Apache-2.0
#pragma once

// Arithmetic and dense linear algebra over the prime field GF(d), d an odd
// prime. Elements are bytes; the modulus lives on the matrix, not per element.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nora {

using elem_t = std::uint8_t;

/// Largest supported modulus (entries are stored as bytes).
inline constexpr unsigned kMaxModulus = 251;

constexpr bool is_prime(unsigned n) noexcept {
  if (n < 2) return false;
  for (unsigned p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

class PrimeField {
 public:
  explicit PrimeField(unsigned d) : d_(d) {
    if (!is_prime(d) || d == 2 || d > kMaxModulus)
      throw std::invalid_argument("modulus must be an odd prime <= 251, got " + std::to_string(d));
  }

  unsigned modulus() const noexcept { return d_; }

  elem_t reduce(long long x) const noexcept {
    long long r = x % static_cast<long long>(d_);
    return static_cast<elem_t>(r < 0 ? r + d_ : r);
  }
  elem_t add(elem_t a, elem_t b) const noexcept {
    unsigned s = unsigned{a} + b;
    return static_cast<elem_t>(s >= d_ ? s - d_ : s);
  }
  elem_t sub(elem_t a, elem_t b) const noexcept {
    return static_cast<elem_t>(a >= b ? a - b : a + d_ - b);
  }
  elem_t neg(elem_t a) const noexcept { return static_cast<elem_t>(a == 0 ? 0 : d_ - a); }
  elem_t mul(elem_t a, elem_t b) const noexcept {
    return static_cast<elem_t>((unsigned{a} * b) % d_);
  }
  elem_t inv(elem_t a) const {
    if (a % d_ == 0) throw std::domain_error("zero has no multiplicative inverse");
    // Fermat: a^(d-2).
    unsigned result = 1, base = a % d_, e = d_ - 2;
    while (e) {
      if (e & 1) result = result * base % d_;
      base = base * base % d_;
      e >>= 1;
    }
    return static_cast<elem_t>(result);
  }
  /// 1/2 = (d+1)/2.
  elem_t half() const noexcept { return static_cast<elem_t>((d_ + 1) / 2); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  unsigned d_;
};

/// A field element tagged with its modulus, for checked scalar-level use.
struct FieldScalar {
  elem_t value = 0;
  unsigned modulus = 3;

  static FieldScalar make(long long v, unsigned d) { return {PrimeField(d).reduce(v), d}; }
  friend bool operator==(const FieldScalar&, const FieldScalar&) = default;
};

namespace detail {
inline void require_same_modulus(unsigned a, unsigned b) {
  if (a != b)
    throw std::invalid_argument("modulus mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}
}  // namespace detail

inline FieldScalar add(FieldScalar a, FieldScalar b) {
  detail::require_same_modulus(a.modulus, b.modulus);
  return {PrimeField(a.modulus).add(a.value, b.value), a.modulus};
}
inline FieldScalar mul(FieldScalar a, FieldScalar b) {
  detail::require_same_modulus(a.modulus, b.modulus);
  return {PrimeField(a.modulus).mul(a.value, b.value), a.modulus};
}
inline FieldScalar mul_inv(FieldScalar a) { return {PrimeField(a.modulus).inv(a.value), a.modulus}; }

// ---------------------------------------------------------------------------
// Row kernels. The modulus is a policy so that the hot loops see a
// compile-time constant for the common small primes.

template <unsigned D>
struct StaticModulus {
  static constexpr unsigned get() noexcept { return D; }
};

struct DynamicModulus {
  unsigned d;
  unsigned get() const noexcept { return d; }
};

template <typename F>
decltype(auto) with_modulus(unsigned d, F&& f) {
  switch (d) {
    case 3: return f(StaticModulus<3>{});
    case 5: return f(StaticModulus<5>{});
    case 7: return f(StaticModulus<7>{});
    default: return f(DynamicModulus{d});
  }
}

/// dst += factor * src (mod d). Entries of both rows and factor are reduced.
template <typename Mod>
inline void axpy(std::span<elem_t> dst, std::span<const elem_t> src, elem_t factor, Mod mod) noexcept {
  const unsigned d = mod.get();
  const std::size_t n = dst.size();
  elem_t* __restrict out = dst.data();
  const elem_t* __restrict in = src.data();
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint16_t t = static_cast<std::uint16_t>(out[j] + factor * in[j]);
    out[j] = static_cast<elem_t>(t % d);
  }
}

template <typename Mod>
inline void scale(std::span<elem_t> row, elem_t factor, Mod mod) noexcept {
  const unsigned d = mod.get();
  for (auto& x : row) x = static_cast<elem_t>(static_cast<std::uint16_t>(x * factor) % d);
}

// ---------------------------------------------------------------------------

class FieldMatrix {
 public:
  FieldMatrix() : field_(3) {}
  FieldMatrix(std::size_t rows, std::size_t cols, unsigned modulus)
      : rows_(rows), cols_(cols), field_(modulus), data_(rows * cols, 0) {}

  static FieldMatrix identity(std::size_t n, unsigned modulus) {
    FieldMatrix m(n, n, modulus);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds a matrix from integer rows, reducing every entry mod d.
  static FieldMatrix from_rows(const std::vector<std::vector<long long>>& rows, unsigned modulus) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FieldMatrix m(rows.size(), cols, modulus);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = m.field_.reduce(rows[i][j]);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  unsigned modulus() const noexcept { return field_.modulus(); }
  const PrimeField& field() const noexcept { return field_; }

  elem_t operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  elem_t& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<elem_t> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const elem_t> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b) noexcept {
    if (a == b) return;
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
  }

  void append_row(std::span<const elem_t> r) {
    if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  /// Keeps the first `n` rows.
  void truncate_rows(std::size_t n) {
    rows_ = std::min(rows_, n);
    data_.resize(rows_ * cols_);
  }

  bool row_is_zero(std::size_t r) const noexcept {
    auto x = row(r);
    return std::all_of(x.begin(), x.end(), [](elem_t e) { return e == 0; });
  }

  FieldMatrix transpose() const {
    FieldMatrix t(cols_, rows_, modulus());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  FieldMatrix select_columns(std::span<const std::size_t> columns) const {
    FieldMatrix out(rows_, columns.size(), modulus());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < columns.size(); ++j) out(i, j) = (*this)(i, columns[j]);
    return out;
  }

  /// M x for a column vector x.
  std::vector<elem_t> apply(std::span<const elem_t> x) const {
    if (x.size() != cols_) throw std::invalid_argument("vector length mismatch");
    std::vector<elem_t> y(rows_);
    const unsigned d = modulus();
    for (std::size_t i = 0; i < rows_; ++i) {
      unsigned acc = 0;
      auto r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) acc = (acc + unsigned{r[j]} * x[j]) % d;
      y[i] = static_cast<elem_t>(acc);
    }
    return y;
  }

  friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    detail::require_same_modulus(a.modulus(), b.modulus());
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
    FieldMatrix c(a.rows_, b.cols_, a.modulus());
    with_modulus(a.modulus(), [&](auto mod) {
      for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t l = 0; l < a.cols_; ++l)
          if (elem_t f = a(i, l)) axpy(c.row(i), b.row(l), f, mod);
    });
    return c;
  }

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.modulus() == b.modulus() && a.data_ == b.data_;
  }

  std::span<const elem_t> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  PrimeField field_;
  std::vector<elem_t> data_;
};

struct RrefResult {
  FieldMatrix matrix;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
};

/// In-place reduced row echelon form. Pivots are the first nonzero entry at or
/// below the current row, scaled to 1; all other entries in a pivot column are
/// cleared. Returns the pivot columns in row order.
inline std::vector<std::size_t> rref_in_place(FieldMatrix& m) {
  std::vector<std::size_t> pivots;
  const PrimeField& f = m.field();
  with_modulus(m.modulus(), [&](auto mod) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
      std::size_t p = r;
      while (p < m.rows() && m(p, c) == 0) ++p;
      if (p == m.rows()) continue;
      m.swap_rows(r, p);
      if (m(r, c) != 1) scale(m.row(r), f.inv(m(r, c)), mod);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i != r && m(i, c) != 0) axpy(m.row(i), m.row(r), f.neg(m(i, c)), mod);
      }
      pivots.push_back(c);
      ++r;
    }
  });
  return pivots;
}

inline RrefResult rref(FieldMatrix m) {
  auto pivots = rref_in_place(m);
  const std::size_t rank = pivots.size();
  return {std::move(m), rank, std::move(pivots)};
}

/// Incremental row basis in (non-reduced) echelon form. Each stored row has a
/// unit pivot and zeros at the pivots of all rows stored before it, so an
/// incoming row is reduced in one pass in insertion order.
template <typename Mod>
class EchelonBasis {
 public:
  EchelonBasis(std::size_t width, Mod mod) : width_(width), mod_(mod) {}

  void clear() noexcept {
    rows_.clear();
    pivots_.clear();
  }
  std::size_t rank() const noexcept { return pivots_.size(); }
  std::size_t width() const noexcept { return width_; }
  bool full() const noexcept { return pivots_.size() == width_; }

  /// Reduces `row` in place against the basis; stores it if independent.
  bool insert(std::span<elem_t> row) {
    const unsigned d = mod_.get();
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const elem_t x = row[pivots_[i]];
      if (x != 0)
        axpy(row, std::span<const elem_t>(rows_.data() + i * width_, width_), static_cast<elem_t>(d - x), mod_);
    }
    std::size_t p = 0;
    while (p < width_ && row[p] == 0) ++p;
    if (p == width_) return false;
    if (row[p] != 1) scale(row, PrimeField(d).inv(row[p]), mod_);
    rows_.insert(rows_.end(), row.begin(), row.end());
    pivots_.push_back(p);
    return true;
  }

 private:
  std::size_t width_;
  Mod mod_;
  std::vector<elem_t> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const FieldMatrix& m) { return rref(m).rank; }

/// Coefficients c with c · m = v, or nullopt when v is outside the row space.
/// Free coefficients are set to zero.
inline std::optional<std::vector<elem_t>> solve_in_rowspace(const FieldMatrix& m, std::span<const elem_t> v) {
  if (v.size() != m.cols()) throw std::invalid_argument("vector length mismatch");
  // Solve m^T c = v^T through the augmented system [m^T | v].
  FieldMatrix aug(m.cols(), m.rows() + 1, m.modulus());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) aug(j, i) = m(i, j);
  for (std::size_t j = 0; j < m.cols(); ++j) aug(j, m.rows()) = v[j];
  const auto pivots = rref_in_place(aug);
  std::vector<elem_t> c(m.rows(), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == m.rows()) return std::nullopt;
    c[pivots[r]] = aug(r, m.rows());
  }
  return c;
}

}  // namespace nora
