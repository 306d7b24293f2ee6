// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force dense matrices for tiny systems. Only used to cross-check the
// symplectic machinery; nothing in the library depends on this header.
//
// Basis states |x_1 ... x_n> are indexed with site 0 as the most significant
// base-d digit. Z^p|k> = chi(pk)|k>, X^q|k> = |k+q>, chi(k) = exp(2πik/d).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nora/clifford.hpp"
#include "nora/stabilizer.hpp"
#include "nora/weyl.hpp"

namespace nora::dense {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimensionCap = 2187;

inline std::size_t dimension(std::size_t n, unsigned d, std::size_t cap = kDefaultDimensionCap) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    dim *= d;
    if (dim > cap) throw std::length_error("dense operator exceeds dimension cap");
  }
  return dim;
}

inline std::complex<double> chi(long long k, unsigned d) {
  const long long r = ((k % static_cast<long long>(d)) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

/// out += coeff · chi^{phase} w(v).
inline void add_weyl(Matrix& out, std::span<const elem_t> v, elem_t phase, unsigned d, std::complex<double> coeff) {
  const std::size_t n = v.size() / 2;
  const std::size_t dim = static_cast<std::size_t>(out.rows());
  const long long half = (d + 1) / 2;
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t x = 0; x < dim; ++x) {
    std::size_t y = 0;
    long long e = phase;
    for (std::size_t i = 0; i < n; ++i) {
      const long long p = v[2 * i], q = v[2 * i + 1];
      const long long k = (static_cast<long long>(digits[i]) + q) % d;
      e += p * k - half * p * q;
      y = y * d + static_cast<std::size_t>(k);
    }
    out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += coeff * chi(e, d);
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < d) break;
      digits[i] = 0;
    }
  }
}

/// chi^{phase} · w(p_1,q_1) ⊗ ... ⊗ w(p_n,q_n), w(p,q) = chi(−pq/2) Z^p X^q.
inline Matrix dense_weyl(const WeylVector& v, std::size_t cap = kDefaultDimensionCap) {
  const auto dim = static_cast<Eigen::Index>(dimension(v.n(), v.modulus(), cap));
  Matrix m = Matrix::Zero(dim, dim);
  add_weyl(m, v.components(), v.phase(), v.modulus(), 1.0);
  return m;
}

/// Π = (1/|M|) Σ_{m∈M} chi(phase(m)) w(m), summed over all d^{k} group elements.
inline Matrix dense_projector(const StabilizerTableau& t, std::size_t cap = kDefaultDimensionCap) {
  const unsigned d = t.modulus();
  const auto dim = static_cast<Eigen::Index>(dimension(t.n(), d, cap));
  const std::size_t k = t.num_generators();
  std::size_t group_size = 1;
  for (std::size_t i = 0; i < k; ++i) group_size *= d;
  Matrix pi = Matrix::Zero(dim, dim);
  std::vector<elem_t> c(k, 0);
  for (std::size_t e = 0; e < group_size; ++e) {
    const WeylVector m = group_element(t, c);
    add_weyl(pi, m.components(), m.phase(), d, 1.0 / static_cast<double>(group_size));
    for (std::size_t i = k; i-- > 0;) {
      if (++c[i] < d) break;
      c[i] = 0;
    }
  }
  return pi;
}

/// Tr_B of a density matrix on n sites, keeping the sites of `keep` in order.
inline Matrix partial_trace(const Matrix& rho, std::size_t n, unsigned d, const RegionMask& keep) {
  const RegionMask traced = keep.complement();
  auto pow_d = [d](std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= d;
    return r;
  };
  const std::size_t dim_a = pow_d(keep.size()), dim_b = pow_d(traced.size());
  // stride of each site in the full index
  std::vector<std::size_t> stride(n);
  for (std::size_t i = 0; i < n; ++i) stride[i] = pow_d(n - 1 - i);
  auto embed_index = [&](const RegionMask& region, std::size_t local) {
    std::size_t full = 0;
    for (std::size_t j = region.size(); j-- > 0;) {
      full += (local % d) * stride[region.sites()[j]];
      local /= d;
    }
    return full;
  };
  std::vector<std::size_t> a_off(dim_a), b_off(dim_b);
  for (std::size_t i = 0; i < dim_a; ++i) a_off[i] = embed_index(keep, i);
  for (std::size_t i = 0; i < dim_b; ++i) b_off[i] = embed_index(traced, i);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_a));
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j) {
      std::complex<double> acc = 0;
      for (std::size_t b = 0; b < dim_b; ++b)
        acc += rho(static_cast<Eigen::Index>(a_off[i] + b_off[b]), static_cast<Eigen::Index>(a_off[j] + b_off[b]));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  return out;
}

/// −Tr ρ log_d ρ.
inline double von_neumann_entropy(const Matrix& rho, unsigned d) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0;
  for (double lambda : solver.eigenvalues())
    if (lambda > 1e-14) s -= lambda * std::log(lambda);
  return s / std::log(static_cast<double>(d));
}

/// Entropy of region A for a pure tableau, base-d logarithm.
inline double dense_entropy(const StabilizerTableau& t, const RegionMask& a, std::size_t cap = kDefaultDimensionCap) {
  if (!t.is_pure()) throw std::invalid_argument("dense_entropy needs a pure tableau");
  const Matrix rho = dense_projector(t, cap);
  return von_neumann_entropy(partial_trace(rho, t.n(), t.modulus(), a), t.modulus());
}

/// A unitary U with U w(v) U† = chi([[a, Sv]]) w(Sv), fixed up to global phase.
///
/// U|0> spans the joint +1 eigenspace of the images of Z_i, and
/// U|x> = Π_i (U X_i U†)^{x_i} U|0>.
inline Matrix dense_clifford(const SymplecticClifford& c, std::size_t cap = kDefaultDimensionCap) {
  const std::size_t n = c.n();
  const unsigned d = c.modulus();
  const auto dim = static_cast<Eigen::Index>(dimension(n, d, cap));
  std::vector<Matrix> z_img, x_img;
  for (std::size_t i = 0; i < n; ++i) {
    z_img.push_back(dense_weyl(apply_to_weyl(c, WeylVector::single(n, i, 1, 0, d)), cap));
    x_img.push_back(dense_weyl(apply_to_weyl(c, WeylVector::single(n, i, 0, 1, d)), cap));
  }
  Matrix proj = Matrix::Identity(dim, dim);
  for (const auto& z : z_img) {
    Matrix avg = Matrix::Zero(dim, dim), power = Matrix::Identity(dim, dim);
    for (unsigned k = 0; k < d; ++k) {
      avg += power;
      power = z * power;
    }
    proj = proj * (avg / static_cast<double>(d));
  }
  Eigen::Index best = 0;
  proj.colwise().norm().maxCoeff(&best);
  Vector psi0 = proj.col(best);
  psi0.normalize();

  Matrix u(dim, dim);
  std::vector<std::size_t> digits(n, 0);
  for (Eigen::Index x = 0; x < dim; ++x) {
    Vector col = psi0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < digits[i]; ++k) col = x_img[i] * col;
    u.col(x) = col;
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < d) break;
      digits[i] = 0;
    }
  }
  return u;
}

}  // namespace nora::dense
