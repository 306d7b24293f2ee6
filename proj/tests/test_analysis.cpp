// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "nora/analysis.hpp"

using namespace nora;

namespace {

NoraParams fixed(std::size_t k, std::size_t layers, std::size_t depth = 1, std::uint64_t seed = 1) {
  NoraParams p;
  p.mode = FixedMode{k, layers};
  p.depth = depth;
  p.seed = seed;
  return p;
}

NoraParams syk(std::size_t a, std::size_t b, std::size_t depth) {
  NoraParams p;
  p.mode = SykMode{a, b};
  p.depth = depth;
  return p;
}

StabilizerTableau random_state(std::size_t n, unsigned d, Rng& rng) {
  return apply_clifford(zero_state(n, d), random_symplectic(n, d, rng));
}

}  // namespace

TEST(Singleton, Examples) {
  EXPECT_EQ(singleton_bound(130, 2), 65u);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(singleton_bound(k + 2, k), 2u);
  EXPECT_THROW(singleton_bound(4, 4), std::invalid_argument);
  const auto p = syk(3, 1, 1);
  EXPECT_DOUBLE_EQ(double(p.k()) / double(p.N()), 1.0 / 3.0);
}

TEST(Combinatorics, Binomial) {
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(130, 3), 357760u);
  EXPECT_EQ(binomial(3, 4), 0u);
  std::size_t count = 0;
  for_each_combination(7, 3, [&](std::span<const std::size_t> idx) {
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    ++count;
    return true;
  });
  EXPECT_EQ(count, 35u);
}

TEST(Combinatorics, SampleSubsetUniform) {
  Rng rng(1);
  std::vector<int> hits(6, 0);
  for (int i = 0; i < 30000; ++i) {
    const auto s = sample_subset(6, 2, rng);
    ASSERT_EQ(s.size(), 2u);
    ASSERT_LT(s[0], s[1]);
    for (auto x : s) ++hits[x];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 400);
}

TEST(DecouplingTester, MatchesStabilizerMutualInformation) {
  Rng rng(2);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto e = encode_with_reference(fixed(2, 2, 1 + seed % 3, seed));
    const DecouplingTester tester(e);
    ASSERT_EQ(tester.physical_sites(), e.physical.size());
    for (int i = 0; i < 40; ++i) {
      const auto idx = sample_subset(e.physical.size(), 1 + rng.below(e.physical.size()), rng);
      std::vector<std::size_t> sites;
      for (auto j : idx) sites.push_back(e.physical.sites()[j]);
      const auto expect = mutual_information(e.tableau, RegionMask(sites, e.tableau.n()), e.reference);
      EXPECT_EQ(tester.mutual_information(idx), expect);
      EXPECT_EQ(tester.leaks(idx), expect > 0);
    }
    std::vector<std::size_t> all(e.physical.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    EXPECT_EQ(tester.mutual_information(all), 2 * e.params.k());
  }
}

TEST(ExhaustiveDistance, Examples) {
  EXPECT_EQ(exhaustive_distance(unencoded_reference_state(fixed(1, 2))).delta, std::optional<std::size_t>(1));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto e = encode_with_reference(fixed(1, 3, 3, seed));
    const auto est = exhaustive_distance(e);
    ASSERT_TRUE(est.found());
    EXPECT_TRUE(est.is_exhaustive);
    EXPECT_LE(*est.delta, singleton_bound(e.physical.size(), 1));
    EXPECT_EQ(est.per_size.size(), *est.delta);
    EXPECT_EQ(est.per_size.back().samples, binomial(e.physical.size(), *est.delta));
  }
  EXPECT_THROW(exhaustive_distance(encode_with_reference(fixed(2, 4))), std::length_error);
}

TEST(MonteCarloDistance, EnumerationMatchesExhaustive) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto e = encode_with_reference(fixed(1, 3, 1 + seed % 3, seed));
    MonteCarloOptions opts;
    opts.cap = e.physical.size();
    opts.enumerate_when_affordable = true;
    const auto mc = monte_carlo_distance(e, 10000, 7, opts);
    const auto ex = exhaustive_distance(e);
    EXPECT_EQ(mc.delta, ex.delta);
    EXPECT_EQ(mc.per_size, ex.per_size);
  }
}

TEST(MonteCarloDistance, UpperBoundsExactDistance) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto e = encode_with_reference(fixed(2, 2, 2, seed));
    const auto ex = exhaustive_distance(e);
    const auto mc = monte_carlo_distance(e, 5, seed, {});
    if (mc.found()) {
      EXPECT_GE(*mc.delta, *ex.delta);
    }
    EXPECT_EQ(mc.cap, singleton_bound(e.physical.size(), 2));
  }
}

TEST(MonteCarloDistance, DeterministicAcrossThreads) {
  const auto e = encode_with_reference(fixed(2, 5, 3, 11));
  MonteCarloOptions one, four;
  four.threads = 4;
  const auto a = monte_carlo_distance(e, 50, 99, one);
  const auto b = monte_carlo_distance(e, 50, 99, four);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.per_size, b.per_size);
  // more samples per size only add regions, so the estimate can only drop
  const auto more = monte_carlo_distance(e, 200, 99, one);
  ASSERT_TRUE(a.found() && more.found());
  EXPECT_LE(*more.delta, *a.delta);
}

TEST(MonteCarloDistance, CensoredRunsReportCap) {
  const auto e = encode_with_reference(fixed(2, 5, 3, 3));
  MonteCarloOptions opts;
  opts.cap = 2;
  const auto est = monte_carlo_distance(e, 10, 1, opts);
  EXPECT_FALSE(est.found());
  EXPECT_EQ(est.cap, 2u);
  EXPECT_EQ(est.per_size.size(), 2u);
  EXPECT_THROW(monte_carlo_distance(e, 0, 1, opts), std::invalid_argument);
}

TEST(Growth, Formulas) {
  const auto f = growth_formulas(3, 2, 2, 128, 1);
  EXPECT_NEAR(f.g, 16.0 / 9.0, 1e-12);
  EXPECT_NEAR(f.d_max, 8.43, 0.005);
  EXPECT_NEAR(f.d_max_q, 7.0, 1e-12);
  EXPECT_NEAR(f.d_min, 1.20, 0.005);
  EXPECT_THROW(growth_formulas(3, 1, 2, 128, 1), std::invalid_argument);
}

TEST(Growth, SingleStepExpectation) {
  // One sub-layer on a unit-weight operator maps its 2-site block to a
  // uniform nonzero vector of F_3^4: weight 2 with probability 64/80.
  Rng rng(3);
  const int trials = 20000;
  double total = 0;
  for (int i = 0; i < trials; ++i) {
    const auto w = operator_growth_fixed(WeylVector::single(64, rng.below(64), 1, 0, 3), 2, 1, rng);
    ASSERT_EQ(w.front(), 1u);
    total += static_cast<double>(w.back());
  }
  EXPECT_NEAR(total / trials, 1.8, 0.015);
}

TEST(Growth, BoundedAndSaturating) {
  Rng rng(4);
  const auto w = operator_growth_fixed(WeylVector::single(32, 0, 0, 1, 3), 2, 40, rng);
  ASSERT_EQ(w.size(), 41u);
  for (auto x : w) EXPECT_LE(x, 32u);
  double tail = 0;
  for (std::size_t t = 30; t <= 40; ++t) tail += static_cast<double>(w[t]);
  EXPECT_NEAR(tail / 11, nontrivial_fraction(3) * 32, 4.0);
  EXPECT_THROW(operator_growth_fixed(WeylVector::single(1, 0, 1, 0, 3), 2, 1, rng), std::invalid_argument);
}

TEST(Growth, ThroughEncoder) {
  Rng rng(5);
  const auto p = fixed(2, 4, 2);
  const auto pts = operator_growth_nora(p, rng);
  ASSERT_EQ(pts.size(), 1 + 4 * 2u);
  EXPECT_EQ(pts.front().weight, 1u);
  for (const auto& g : pts) EXPECT_LE(g.weight, g.n_sites);
  EXPECT_EQ(pts.back().n_sites, p.N());
  EXPECT_THROW(operator_growth_nora(fixed(0, 2), rng), std::invalid_argument);
}

TEST(Weights, HistogramByLayer) {
  Rng rng(6);
  const auto p = fixed(2, 3, 2);
  const auto h = weight_histogram_by_layer(p, rng);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0].weights, std::vector<std::size_t>(2, 1));
  for (const auto& l : h) {
    EXPECT_EQ(l.weights.size(), l.n_sites);
    EXPECT_DOUBLE_EQ(l.w_max, 8.0 / 9.0 * double(l.n_sites));
    for (auto w : l.weights) EXPECT_LE(w, l.n_sites);
  }
  EXPECT_EQ(h.back().n_sites, p.N());
}

TEST(RrefReduce, PreservesGroupAndPhases) {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    const auto t = random_state(5, 3, rng);
    const auto r = rref_reduce(t);
    r.validate();
    EXPECT_EQ(rref_reduce(r), r);
    const RegionMask a({0, 2}, 5);
    EXPECT_EQ(entropy(r, a), entropy(t, a));
    // every reduced generator, phase included, lies in the original group
    for (std::size_t j = 0; j < r.num_generators(); ++j) {
      const auto coeffs = solve_in_rowspace(t.generators(), r.generators().row(j));
      ASSERT_TRUE(coeffs);
      EXPECT_EQ(group_element(t, *coeffs), r.generator(j));
    }
  }
  const auto z = zero_state(3, 3);
  EXPECT_EQ(rref_reduce(z), z);
}

TEST(RrefReduce, RejectsNonCommuting) {
  FieldMatrix g(2, 2, 3);
  g(0, 0) = 1;
  g(1, 0) = 1;
  g(1, 1) = 1;
  EXPECT_THROW(rref_reduce(StabilizerTableau(g, {0, 0})), std::logic_error);
}

TEST(Regime, Classifier) {
  const auto dilute = syk_regime_classifier(syk(3, 1, 1));
  EXPECT_EQ(dilute.regime, ScalingRegime::dilute);
  EXPECT_NEAR(dilute.c, 0.830, 0.001);
  EXPECT_DOUBLE_EQ(dilute.ratio_last, 1.5);
  const auto sat = syk_regime_classifier(syk(3, 1, 2));
  EXPECT_EQ(sat.regime, ScalingRegime::saturating);
  EXPECT_FALSE(sat.ell_star);
  EXPECT_THROW(syk_regime_classifier(fixed(2, 3)), std::invalid_argument);
  EXPECT_DOUBLE_EQ(layer_ratio(2, 2, 1), 4.0 / 3.0);
  EXPECT_NEAR(layer_ratio(4, 2, 30), 2.0, 1e-6);
}

TEST(Statistics, SummarizeAndFit) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = summarize(xs);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.sem, std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
  EXPECT_EQ(summarize(std::vector<double>{}).count, 0u);
  const std::vector<double> ys{3, 5, 7, 9};
  const auto fit = least_squares(xs, ys);
  EXPECT_NEAR(fit.slope, 2, 1e-12);
  EXPECT_NEAR(fit.intercept, 1, 1e-12);
  EXPECT_THROW(least_squares(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(CodeReport, Basics) {
  const auto p = fixed(2, 3, 2, 5);
  const auto rep = make_code_report(p, 20);
  EXPECT_EQ(rep.n, 10u);
  EXPECT_EQ(rep.k, 2u);
  EXPECT_DOUBLE_EQ(rep.rate, 0.2);
  EXPECT_EQ(rep.gates, gate_count(p));
  EXPECT_EQ(rep.weights.size(), 4u);
  EXPECT_EQ(make_code_report(p, 20).distance.delta, rep.distance.delta);
}
