// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <vector>

#include "nora/field.hpp"
#include "nora/rng.hpp"

using namespace nora;

namespace {

FieldMatrix random_matrix(std::size_t rows, std::size_t cols, unsigned d, Rng& rng) {
  FieldMatrix m(rows, cols, d);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = static_cast<elem_t>(rng.below(d));
  return m;
}

bool is_rref(const FieldMatrix& m) {
  std::size_t last_pivot = 0;
  bool seen_zero_row = false;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.row_is_zero(r)) {
      seen_zero_row = true;
      continue;
    }
    if (seen_zero_row) return false;
    std::size_t p = 0;
    while (m(r, p) == 0) ++p;
    if (m(r, p) != 1) return false;
    if (r > 0 && p <= last_pivot) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m(i, p) != 0) return false;
    last_pivot = p;
  }
  return true;
}

}  // namespace

TEST(PrimeField, RejectsEvenAndComposite) {
  EXPECT_THROW(PrimeField(2), std::invalid_argument);
  EXPECT_THROW(PrimeField(9), std::invalid_argument);
  EXPECT_THROW(PrimeField(1), std::invalid_argument);
  EXPECT_THROW(PrimeField(257), std::invalid_argument);
  EXPECT_NO_THROW(PrimeField(251));
}

TEST(PrimeField, Addition) {
  EXPECT_EQ(add(FieldScalar::make(2, 3), FieldScalar::make(2, 3)).value, 1);
  EXPECT_EQ(add(FieldScalar::make(4, 5), FieldScalar::make(3, 5)).value, 2);
  for (unsigned d : {3u, 5u, 7u})
    for (long long x = 0; x < d; ++x) EXPECT_EQ(add(FieldScalar::make(0, d), FieldScalar::make(x, d)).value, x);
}

TEST(PrimeField, ReductionOfNegatives) {
  PrimeField f(5);
  EXPECT_EQ(f.reduce(-1), 4);
  EXPECT_EQ(f.reduce(-10), 0);
  EXPECT_EQ(FieldScalar::make(-7, 3).value, 2);
}

TEST(PrimeField, Inverse) {
  EXPECT_EQ(mul_inv(FieldScalar::make(2, 3)).value, 2);
  for (unsigned d : {3u, 5u, 7u, 11u, 13u, 251u}) {
    PrimeField f(d);
    EXPECT_EQ(f.inv(2), (d + 1) / 2);
    EXPECT_EQ(f.half(), (d + 1) / 2);
    EXPECT_EQ(f.inv(1), 1);
    for (unsigned a = 1; a < d; ++a) EXPECT_EQ(f.mul(static_cast<elem_t>(a), f.inv(static_cast<elem_t>(a))), 1);
  }
  EXPECT_THROW(PrimeField(5).inv(0), std::domain_error);
}

TEST(PrimeField, MixedModuliRejected) {
  EXPECT_THROW(add(FieldScalar::make(1, 3), FieldScalar::make(1, 5)), std::invalid_argument);
  EXPECT_THROW(mul(FieldScalar::make(1, 3), FieldScalar::make(1, 5)), std::invalid_argument);
}

TEST(Rref, HandExample) {
  const auto r = rref(FieldMatrix::from_rows({{2, 1}, {1, 2}}, 3));
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(r.matrix, FieldMatrix::from_rows({{1, 2}, {0, 0}}, 3));
}

TEST(Rref, IdentityIsFixed) {
  const auto id = FieldMatrix::identity(5, 7);
  const auto r = rref(id);
  EXPECT_EQ(r.matrix, id);
  EXPECT_EQ(r.rank, 5u);
}

TEST(Rref, IdempotentAndReduced) {
  Rng rng(11);
  for (unsigned d : {3u, 5u, 7u, 11u}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto m = random_matrix(6, 12, d, rng);
      if (trial % 3 == 0) {
        // force a dependent row
        for (std::size_t c = 0; c < 12; ++c) m(5, c) = PrimeField(d).add(m(0, c), m(1, c));
      }
      const auto once = rref(m);
      const auto twice = rref(once.matrix);
      EXPECT_EQ(once.matrix, twice.matrix);
      EXPECT_EQ(once.rank, twice.rank);
      EXPECT_TRUE(is_rref(once.matrix));
      if (trial % 3 == 0) {
        EXPECT_LE(once.rank, 5u);
      }
    }
  }
}

TEST(EchelonBasis, RankMatchesRref) {
  Rng rng(5);
  for (unsigned d : {3u, 5u, 13u}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto m = random_matrix(1 + rng.below(8), 1 + rng.below(8), d, rng);
      if (m.rows() > 2)
        for (std::size_t c = 0; c < m.cols(); ++c) m(2, c) = PrimeField(d).mul(m(0, c), 2);
      const std::size_t expect = rank(m);
      with_modulus(d, [&](auto mod) {
        EchelonBasis basis(m.cols(), mod);
        std::vector<elem_t> buf(m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r) {
          std::copy(m.row(r).begin(), m.row(r).end(), buf.begin());
          basis.insert(buf);
        }
        EXPECT_EQ(basis.rank(), expect);
      });
    }
  }
}

TEST(SolveInRowspace, ZeroAndUnitVectors) {
  const auto m = FieldMatrix::from_rows({{1, 2, 0, 1}, {0, 1, 1, 2}, {1, 0, 1, 1}}, 3);
  const std::vector<elem_t> zero(4, 0);
  const auto c0 = solve_in_rowspace(m, zero);
  ASSERT_TRUE(c0);
  for (auto x : *c0) EXPECT_EQ(x, 0);

  const std::vector<elem_t> first(m.row(0).begin(), m.row(0).end());
  const auto c1 = solve_in_rowspace(FieldMatrix::from_rows({{1, 2, 0, 1}, {0, 1, 1, 2}}, 3), first);
  ASSERT_TRUE(c1);
  EXPECT_EQ(*c1, (std::vector<elem_t>{1, 0}));
}

TEST(SolveInRowspace, MatchesEnumeration) {
  Rng rng(21);
  const unsigned d = 3;
  for (int trial = 0; trial < 40; ++trial) {
    // 3 rows spanning at most rank 2 inside GF(3)^4
    auto m = random_matrix(3, 4, d, rng);
    for (std::size_t c = 0; c < 4; ++c) m(2, c) = PrimeField(d).add(m(0, c), m(1, c));
    std::vector<std::vector<elem_t>> span;
    for (unsigned a = 0; a < d; ++a)
      for (unsigned b = 0; b < d; ++b) {
        std::vector<elem_t> v(4);
        for (std::size_t c = 0; c < 4; ++c) v[c] = PrimeField(d).reduce(a * m(0, c) + b * m(1, c));
        span.push_back(v);
      }
    std::vector<elem_t> v(4);
    for (auto& x : v) x = static_cast<elem_t>(rng.below(d));
    const bool inside = std::find(span.begin(), span.end(), v) != span.end();
    const auto coeff = solve_in_rowspace(m, v);
    EXPECT_EQ(coeff.has_value(), inside);
    if (coeff) {
      std::vector<elem_t> back(4, 0);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 4; ++c)
          back[c] = PrimeField(d).add(back[c], PrimeField(d).mul((*coeff)[r], m(r, c)));
      EXPECT_EQ(back, v);
    }
  }
}

TEST(FieldMatrix, ProductAndTranspose) {
  const auto a = FieldMatrix::from_rows({{1, 2}, {3, 4}}, 5);
  const auto b = FieldMatrix::from_rows({{0, 1}, {1, 1}}, 5);
  EXPECT_EQ(a * b, FieldMatrix::from_rows({{2, 3}, {4, 2}}, 5));
  EXPECT_EQ(a.transpose(), FieldMatrix::from_rows({{1, 3}, {2, 4}}, 5));
  EXPECT_THROW(a * FieldMatrix::identity(2, 3), std::invalid_argument);
}

TEST(Rng, DerivedStreamsAreIndependentOfOrder) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  Rng a(derive_seed(9, {4})), b(derive_seed(9, {4}));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, BelowIsUnbiased) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 22.46);  // df = 6, p = 0.001
}
