// SPDX-License-Identifier: Apache-2.0
#pragma once

// Code properties of encoded states: decoupling distance (exhaustive and
// Monte Carlo), stabilizer weight statistics, operator growth, growth-factor
// estimates and RREF weight reduction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nora/clifford.hpp"
#include "nora/encoder.hpp"
#include "nora/field.hpp"
#include "nora/parallel.hpp"
#include "nora/rng.hpp"
#include "nora/stabilizer.hpp"
#include "nora/weyl.hpp"

namespace nora {

/// floor((N − k)/2) + 1.
inline std::size_t singleton_bound(std::size_t n, std::size_t k) {
  if (n <= k) throw std::invalid_argument("singleton bound needs N > k");
  return (n - k) / 2 + 1;
}

struct SizeStats {
  std::size_t size = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  friend bool operator==(const SizeStats&, const SizeStats&) = default;
};

/// delta is the smallest region size with I(A:R) > 0 among the regions tried;
/// it is empty when no region up to `cap` leaked.
struct DistanceEstimate {
  std::optional<std::size_t> delta;
  std::vector<SizeStats> per_size;
  bool is_exhaustive = false;
  std::uint64_t seed = 0;
  std::size_t samples_per_size = 0;
  std::size_t cap = 0;

  bool found() const noexcept { return delta.has_value(); }
};

/// Fast I(A:R) for an encoded state, A a set of physical sites.
///
/// The generators are row-reduced on the reference columns, splitting them
/// into rows L with a nonzero reference part and code rows C without one.
/// For the pure state on R ∪ physical, I(A:R) = rank[C_A; L_A] − rank C_A,
/// where X_A keeps the columns of A.
class DecouplingTester {
 public:
  explicit DecouplingTester(const EncodedState& e)
      : d_(e.tableau.modulus()), n_physical_(e.physical.size()) {
    if (!e.tableau.is_pure()) throw std::invalid_argument("decoupling test needs a pure tableau");
    std::vector<std::size_t> cols;
    for (auto s : e.reference.sites()) {
      cols.push_back(2 * s);
      cols.push_back(2 * s + 1);
    }
    const std::size_t ref_cols = cols.size();
    for (auto s : e.physical.sites()) {
      cols.push_back(2 * s);
      cols.push_back(2 * s + 1);
    }
    FieldMatrix m = e.tableau.generators().select_columns(cols);
    const PrimeField& f = m.field();
    std::size_t r = 0;
    with_modulus(d_, [&](auto mod) {
      for (std::size_t c = 0; c < ref_cols && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        scale(m.row(r), f.inv(m(r, c)), mod);
        for (std::size_t i = r + 1; i < m.rows(); ++i)
          if (m(i, c)) axpy(m.row(i), m.row(r), f.neg(m(i, c)), mod);
        ++r;
      }
    });
    std::vector<std::size_t> phys(2 * n_physical_);
    std::iota(phys.begin(), phys.end(), ref_cols);
    const FieldMatrix physical_part = m.select_columns(phys);
    logical_ = FieldMatrix(0, phys.size(), d_);
    code_ = FieldMatrix(0, phys.size(), d_);
    for (std::size_t i = 0; i < m.rows(); ++i)
      (i < r ? logical_ : code_).append_row(physical_part.row(i));
  }

  std::size_t physical_sites() const noexcept { return n_physical_; }

  /// I(A:R) in units of log d; `region` holds physical site indices.
  std::size_t mutual_information(std::span<const std::size_t> region) const {
    return with_modulus(d_, [&](auto mod) { return rank_gain(region, mod, false); });
  }

  bool leaks(std::span<const std::size_t> region) const {
    return with_modulus(d_, [&](auto mod) { return rank_gain(region, mod, true) > 0; });
  }

 private:
  template <typename Mod>
  std::size_t rank_gain(std::span<const std::size_t> region, Mod mod, bool stop_early) const {
    const std::size_t width = 2 * region.size();
    if (width == 0) return 0;
    EchelonBasis<Mod> basis(width, mod);
    std::vector<elem_t> buf(width);
    auto gather = [&](const FieldMatrix& m, std::size_t row) {
      auto src = m.row(row);
      for (std::size_t j = 0; j < region.size(); ++j) {
        buf[2 * j] = src[2 * region[j]];
        buf[2 * j + 1] = src[2 * region[j] + 1];
      }
    };
    for (std::size_t i = 0; i < code_.rows(); ++i) {
      gather(code_, i);
      basis.insert(buf);
      if (basis.full()) return 0;
    }
    const std::size_t base = basis.rank();
    for (std::size_t i = 0; i < logical_.rows(); ++i) {
      gather(logical_, i);
      if (basis.insert(buf) && stop_early) return 1;
      if (basis.full()) break;
    }
    return basis.rank() - base;
  }

  unsigned d_;
  std::size_t n_physical_;
  FieldMatrix logical_;
  FieldMatrix code_;
};

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
  }
  return c;
}

/// Visits every k-subset of {0..n-1} in lexicographic order until visit returns false.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k > n) return;
  while (true) {
    if (!visit(std::span<const std::size_t>(idx))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline constexpr std::size_t kExhaustiveDistanceMaxSites = 16;

/// Exact decoupling distance by enumerating every region of physical sites,
/// in increasing size, through the stabilizer entropies.
inline DistanceEstimate exhaustive_distance(const EncodedState& e) {
  const std::size_t n = e.physical.size();
  if (n > kExhaustiveDistanceMaxSites) throw std::length_error("exhaustive distance limited to N <= 16");
  DistanceEstimate out;
  out.is_exhaustive = true;
  out.cap = n;
  const std::size_t total = e.tableau.n();
  for (std::size_t s = 1; s <= n && !out.found(); ++s) {
    SizeStats stats{s, 0, 0};
    for_each_combination(n, s, [&](std::span<const std::size_t> idx) {
      std::vector<std::size_t> sites;
      for (auto i : idx) sites.push_back(e.physical.sites()[i]);
      ++stats.samples;
      if (mutual_information(e.tableau, RegionMask(std::move(sites), total), e.reference) > 0) ++stats.violations;
      return true;
    });
    out.per_size.push_back(stats);
    if (stats.violations) out.delta = s;
  }
  return out;
}

struct MonteCarloOptions {
  /// Largest region size tried; 0 selects the singleton bound.
  std::size_t cap = 0;
  std::size_t threads = 1;
  /// Enumerate all size-s regions instead of sampling when C(N, s) <= samples_per_size.
  bool enumerate_when_affordable = false;
};

/// Uniform size-s subset of {0..n-1} (sorted) from its own stream.
inline std::vector<std::size_t> sample_subset(std::size_t n, std::size_t s, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(s);
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Upper-bound distance estimate: sizes s = 1, 2, ... up to the cap; at each
/// size draw samples_per_size uniform regions; stop at the first size where
/// some region has I(A:R) > 0. Draw j of size s uses the stream
/// derive_seed(seed, {s, j}), so results do not depend on the thread count
/// and more samples per size only add regions.
inline DistanceEstimate monte_carlo_distance(const EncodedState& e, std::size_t samples_per_size, std::uint64_t seed,
                                             const MonteCarloOptions& opts = {}) {
  if (samples_per_size < 1) throw std::invalid_argument("samples_per_size must be >= 1");
  const std::size_t n = e.physical.size();
  const std::size_t k = e.reference.size();
  DistanceEstimate out;
  out.seed = seed;
  out.samples_per_size = samples_per_size;
  out.cap = std::min(n, opts.cap ? opts.cap : singleton_bound(n, k));
  const DecouplingTester tester(e);

  for (std::size_t s = 1; s <= out.cap && !out.found(); ++s) {
    SizeStats stats{s, 0, 0};
    if (opts.enumerate_when_affordable && binomial(n, s) <= samples_per_size) {
      for_each_combination(n, s, [&](std::span<const std::size_t> idx) {
        ++stats.samples;
        stats.violations += tester.leaks(idx);
        return true;
      });
    } else {
      std::vector<char> leaked(samples_per_size, 0);
      parallel_for(samples_per_size, opts.threads, [&](std::size_t j) {
        Rng rng(derive_seed(seed, {s, j}));
        leaked[j] = tester.leaks(sample_subset(n, s, rng));
      });
      stats.samples = samples_per_size;
      stats.violations = static_cast<std::size_t>(std::count(leaked.begin(), leaked.end(), 1));
    }
    out.per_size.push_back(stats);
    if (stats.violations) out.delta = s;
  }
  return out;
}

inline DistanceEstimate monte_carlo_distance(const EncodedState& e, std::size_t samples_per_size, Rng& rng,
                                             const MonteCarloOptions& opts = {}) {
  return monte_carlo_distance(e, samples_per_size, rng.next(), opts);
}

// ---------------------------------------------------------------------------
// Weights

/// (d² − 1)/d²: probability that a uniform single-site Weyl factor is nontrivial.
inline double nontrivial_fraction(unsigned d) {
  const double d2 = static_cast<double>(d) * d;
  return (d2 - 1.0) / d2;
}

struct LayerWeights {
  std::size_t layer = 0;
  std::size_t n_sites = 0;
  std::vector<std::size_t> weights;
  double w_max = 0;  ///< (d² − 1)/d² · n_l

  double mean() const {
    if (weights.empty()) return 0;
    return std::accumulate(weights.begin(), weights.end(), 0.0) / static_cast<double>(weights.size());
  }
};

/// Generator weights of the code state (logical sites in |0>, no reference)
/// after each layer l = 0..L.
inline std::vector<LayerWeights> weight_histogram_by_layer(const NoraParams& p, Rng& rng) {
  std::vector<LayerWeights> out;
  const double f = nontrivial_fraction(p.d);
  encode_code_state(p, rng, [&](std::size_t l, const StabilizerTableau& t) {
    out.push_back({l, t.n(), row_weights(t), f * static_cast<double>(t.n())});
  });
  return out;
}

namespace detail {
/// Applies one random sub-layer to the first n_sites sites of a single Weyl
/// row. Gates on blocks where the row is trivial are skipped without drawing
/// their Clifford: they act trivially on it.
inline void scramble_row(WeylVector& v, std::size_t n_sites, std::size_t q, Rng& rng) {
  std::vector<std::size_t> perm(n_sites);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(perm));
  elem_t phase = v.phase();
  auto row = v.components();
  for (std::size_t g = 0; g + q <= n_sites; g += q) {
    std::span<const std::size_t> sites(perm.data() + g, q);
    bool touched = false;
    for (auto s : sites) touched |= (row[2 * s] | row[2 * s + 1]) != 0;
    if (!touched) continue;
    apply_local(random_symplectic(q, v.modulus(), rng), sites, row, phase);
  }
  v.set_phase(phase);
}
}  // namespace detail

/// Weight after each of `steps` random sub-layers on a fixed set of n sites;
/// element 0 is the initial weight.
inline std::vector<std::size_t> operator_growth_fixed(const WeylVector& initial, std::size_t q, std::size_t steps,
                                                      Rng& rng) {
  if (initial.n() < q) throw std::invalid_argument("operator growth needs n >= q");
  WeylVector v = initial;
  std::vector<std::size_t> out{weight(v)};
  for (std::size_t t = 0; t < steps; ++t) {
    detail::scramble_row(v, v.n(), q, rng);
    out.push_back(weight(v));
  }
  return out;
}

struct GrowthPoint {
  std::size_t layer = 0;
  std::size_t sublayer = 0;  ///< 0 = before the layer's first sub-layer
  std::size_t n_sites = 0;
  std::size_t weight = 0;
};

/// Weight of a unit-weight operator on logical site 0 as it passes through the
/// encoder's layers, sampled after every sub-layer.
inline std::vector<GrowthPoint> operator_growth_nora(const NoraParams& p, Rng& rng) {
  p.validate();
  if (p.k() < 1) throw std::invalid_argument("operator growth through the encoder needs k >= 1");
  const auto sizes = layer_sizes(p);
  WeylVector v = WeylVector::single(p.N(), 0, 1, 0, p.d);
  std::vector<GrowthPoint> out{{0, 0, sizes.sizes[0], 1}};
  for (std::size_t l = 1; l <= p.layers(); ++l) {
    const std::size_t n_l = sizes.sizes[l];
    for (std::size_t m = 1; m <= p.depth; ++m) {
      detail::scramble_row(v, n_l, p.q, rng);
      out.push_back({l, m, n_l, weight(v)});
    }
  }
  return out;
}

struct GrowthFormulas {
  double g = 0;         ///< q (d² − 1)/d²
  double d_max = 0;     ///< log_g(n / w0)
  double d_max_q = 0;   ///< log_q(n / w0)
  double d_min = 0;     ///< log_g(r)
};

inline GrowthFormulas growth_formulas(unsigned d, std::size_t q, std::size_t r, std::size_t n, double w0) {
  if (q < 2 || w0 < 1 || d < 2) throw std::invalid_argument("growth formulas need d >= 2, q >= 2, w0 >= 1");
  GrowthFormulas out;
  out.g = static_cast<double>(q) * nontrivial_fraction(d);
  const double ratio = static_cast<double>(n) / w0;
  out.d_max = std::log(ratio) / std::log(out.g);
  out.d_max_q = std::log(ratio) / std::log(static_cast<double>(q));
  out.d_min = std::log(static_cast<double>(r)) / std::log(out.g);
  return out;
}

// ---------------------------------------------------------------------------

/// Generator set brought to reduced row echelon form with phases carried
/// along. Adding f·row_r to row_i multiplies the stabilizers, which is only a
/// linear phase update because the rows commute; that is checked at every step.
inline StabilizerTableau rref_reduce(const StabilizerTableau& t) {
  FieldMatrix g = t.generators();
  std::vector<elem_t> phases = t.phases();
  const PrimeField& f = g.field();
  with_modulus(g.modulus(), [&](auto mod) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < g.cols() && r < g.rows(); ++c) {
      std::size_t p = r;
      while (p < g.rows() && g(p, c) == 0) ++p;
      if (p == g.rows()) continue;
      g.swap_rows(r, p);
      std::swap(phases[r], phases[p]);
      if (g(r, c) != 1) {
        const elem_t s = f.inv(g(r, c));
        scale(g.row(r), s, mod);
        phases[r] = f.mul(phases[r], s);
      }
      for (std::size_t i = 0; i < g.rows(); ++i) {
        if (i == r || g(i, c) == 0) continue;
        if (symplectic_product(g.row(i), g.row(r), f) != 0)
          throw std::logic_error("rref_reduce: generators do not commute");
        const elem_t factor = f.neg(g(i, c));
        axpy(g.row(i), g.row(r), factor, mod);
        phases[i] = f.add(phases[i], f.mul(factor, phases[r]));
      }
      ++r;
    }
  });
  return {std::move(g), std::move(phases)};
}

// ---------------------------------------------------------------------------

enum class ScalingRegime { saturating, dilute };

struct SykRegime {
  ScalingRegime regime = ScalingRegime::dilute;
  double growth_per_layer = 0;  ///< g^D
  double c = 0;                 ///< ln g^D / ln r
  double ratio_last = 0;        ///< R_L = 1 + (r − 1)/(1 + r^{1−b})
  std::optional<double> ell_star;
};

/// R_l = (k + r^l)/(k + r^{l−1}) = 1 + (r − 1)/(1 + k/r^{l−1}).
inline double layer_ratio(std::size_t k, std::size_t r, double l) {
  return 1.0 + (static_cast<double>(r) - 1.0) / (1.0 + static_cast<double>(k) / std::pow(static_cast<double>(r), l - 1.0));
}

/// Predicted operator-growth regime: g^D > r saturates (distance linear in
/// N), g^D < r stays dilute (distance ~ N^c). When g^D < R_L the crossover
/// layer l* solves g^D = R_{l*}.
inline SykRegime syk_regime_classifier(const NoraParams& p) {
  const auto* syk = std::get_if<SykMode>(&p.mode);
  if (!syk) throw std::invalid_argument("regime classifier needs SYK scaling parameters");
  const double g = static_cast<double>(p.q) * nontrivial_fraction(p.d);
  const double r = static_cast<double>(p.r);
  SykRegime out;
  out.growth_per_layer = std::pow(g, static_cast<double>(p.depth));
  out.c = std::log(out.growth_per_layer) / std::log(r);
  out.regime = out.growth_per_layer > r ? ScalingRegime::saturating : ScalingRegime::dilute;
  out.ratio_last = 1.0 + (r - 1.0) / (1.0 + std::pow(r, 1.0 - static_cast<double>(syk->b)));
  const double gd = out.growth_per_layer;
  if (gd < out.ratio_last && gd > 1.0) {
    // 1 + k r^{1−l} = (r − 1)/(g^D − 1)
    const double arg = ((r - 1.0) / (gd - 1.0) - 1.0) / static_cast<double>(p.k());
    if (arg > 0) out.ell_star = 1.0 - std::log(arg) / std::log(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct SampleSummary {
  double mean = 0;
  double sem = 0;  ///< sample standard deviation / sqrt(count)
  std::size_t count = 0;
};

inline SampleSummary summarize(std::span<const double> xs) {
  SampleSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sem = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least squares needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("least squares needs distinct x values");
  return {sxy / sxx, my - sxy / sxx * mx};
}

struct CodeReport {
  NoraParams params;
  std::size_t n = 0;
  std::size_t k = 0;
  DistanceEstimate distance;
  double rate = 0;
  std::optional<double> relative_distance;
  std::vector<LayerWeights> weights;
  std::uint64_t gates = 0;
};

/// Encodes with the params' seed, estimates the distance and records weights.
inline CodeReport make_code_report(const NoraParams& p, std::size_t samples_per_size, const MonteCarloOptions& opts = {}) {
  CodeReport rep;
  rep.params = p;
  rep.n = p.N();
  rep.k = p.k();
  rep.rate = static_cast<double>(rep.k) / static_cast<double>(rep.n);
  rep.gates = gate_count(p);
  const EncodedState e = encode_with_reference(p);
  rep.distance = monte_carlo_distance(e, samples_per_size, derive_seed(p.seed, {0xd157}), opts);
  if (rep.distance.delta) rep.relative_distance = static_cast<double>(*rep.distance.delta) / static_cast<double>(rep.n);
  Rng wrng(p.seed);
  rep.weights = weight_histogram_by_layer(p, wrng);
  return rep;
}

}  // namespace nora
