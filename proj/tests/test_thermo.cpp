// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "nora/analysis.hpp"
#include "nora/thermo.hpp"

using namespace nora;

namespace {

// Composite Simpson on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

double excess_slope(const ThermoParams& base, double t_min, double t_max, double (*entropy)(const ThermoParams&)) {
  std::vector<double> x, y;
  const double ground = static_cast<double>(base.k) * std::log(static_cast<double>(base.d));
  for (double t : log_grid(t_min, t_max, 21)) {
    x.push_back(std::log(t));
    y.push_back(std::log(entropy(base.at_temperature(t)) - ground));
  }
  return least_squares(x, y).slope;
}

double integral_form(const ThermoParams& p) { return entropy_continuum(p).integral_form; }
double gamma_bound(const ThermoParams& p) { return entropy_continuum(p).gamma_bound; }

}  // namespace

TEST(Schedule, Invariants) {
  ThermoParams p;
  p.layers = 6;
  p.r = 3;
  const auto s = schedule(p);
  ASSERT_EQ(s.size(), 6u);
  double total = 0;
  for (const auto& l : s) total += l.count;
  EXPECT_DOUBLE_EQ(total, p.ancillas());
  EXPECT_DOUBLE_EQ(s.front().count, 3.0);
  EXPECT_DOUBLE_EQ(s.back().energy, p.lambda);
  EXPECT_NEAR(s.front().energy, std::exp(-0.4 * 5), 1e-15);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i].energy, s[i - 1].energy);
}

TEST(PartitionFunction, SingleLayer) {
  ThermoParams p;
  p.layers = 1;
  p.beta = 0.7;
  EXPECT_NEAR(partition_function_log(p), std::log(2.0) + 2 * std::log(std::exp(0.7) + 1), 1e-12);
  p.d = 3;
  p.k = 2;
  EXPECT_NEAR(partition_function_log(p), 2 * std::log(3.0) + 2 * std::log(std::exp(0.7) + 2), 1e-12);
  EXPECT_NO_THROW(partition_function_log(p.at_beta(1e6)));
  EXPECT_TRUE(std::isfinite(partition_function_log(p.at_beta(1e6))));
}

TEST(Entropy, MatchesThermodynamicIdentity) {
  // S = ln Z − β ∂_β ln Z
  for (unsigned d : {2u, 3u})
    for (double beta : {0.1, 1.0, 30.0}) {
      ThermoParams p;
      p.d = d;
      p.layers = 8;
      p.beta = beta;
      const double h = 1e-5 * beta;
      const double dlog = (partition_function_log(p.at_beta(beta + h)) - partition_function_log(p.at_beta(beta - h))) / (2 * h);
      EXPECT_NEAR(gibbs_entropy_exact(p), partition_function_log(p) - beta * dlog, 1e-6 * (1 + gibbs_entropy_exact(p)));
    }
}

TEST(Entropy, LimitsAndMonotonicity) {
  ThermoParams p;
  p.d = 3;
  p.k = 2;
  p.layers = 10;
  const double ground = 2 * std::log(3.0);
  const double top = (2 + p.ancillas()) * std::log(3.0);
  EXPECT_NEAR(gibbs_entropy_exact(p.at_beta(1e-9)), top, 1e-6);
  EXPECT_NEAR(gibbs_entropy_exact(p.at_beta(1e9)), ground, 1e-12);
  double prev = 0;
  for (double t : log_grid(1e-4, 1e3, 50)) {
    const double s = gibbs_entropy_exact(p.at_temperature(t));
    EXPECT_GE(s, ground - 1e-12);
    EXPECT_LE(s, top + 1e-9);
    EXPECT_GE(s, prev);
    prev = s;
  }
}

TEST(HeatCapacity, NonNegativeAndVanishing) {
  ThermoParams p;
  for (double t : log_grid(1e-5, 1e2, 40)) EXPECT_GE(heat_capacity(p.at_temperature(t)), -1e-8);
  EXPECT_NEAR(heat_capacity(p.at_temperature(1e-5)), 0.0, 1e-6);
  EXPECT_NEAR(heat_capacity(p.at_temperature(1e6)), 0.0, 1e-3);
}

TEST(IncompleteGamma, MatchesQuadrature) {
  for (double s : {0.5, 1.7329, 3.0})
    for (auto [a, b] : {std::pair{0.01, 2.0}, std::pair{1.0, 10.0}, std::pair{12.0, 30.0}}) {
      const double q = simpson([s](double t) { return std::pow(t, s) * std::exp(-t); }, a, b, 20000);
      EXPECT_NEAR(incomplete_gamma_integral(s, a, b), q, 1e-9 * std::max(1.0, q));
    }
  EXPECT_NEAR(incomplete_gamma_integral(1.0, 0.0, 1e3), 1.0, 1e-12);
}

TEST(Continuum, IntegralBelowGammaBound) {
  ThermoParams p;
  for (double t : log_grid(1e-6, 1e2, 30)) {
    const auto c = entropy_continuum(p.at_temperature(t));
    EXPECT_LE(c.integral_form, c.gamma_bound + 1e-12);
  }
}

TEST(Continuum, GammaBoundPowerLaw) {
  ThermoParams p;
  EXPECT_NEAR(excess_slope(p, 1e-6, 1e-3, gamma_bound), std::log(2.0) / 0.4, 1e-9);
}

TEST(Continuum, UnitExponentRatio) {
  // α = γ makes the bound's gamma factor Γ(2) = 1.
  ThermoParams p;
  p.alpha = 0.4;
  p.beta = 3.0;
  const double rho = 0.4 * p.ancillas() / -std::expm1(-0.4 * 20);
  EXPECT_NEAR(entropy_continuum(p).gamma_bound - std::log(2.0), rho / 0.4 / 3.0, 1e-9 * rho);
}

TEST(Continuum, TracksExactEntropyAtLowTemperature) {
  ThermoParams p;
  const auto q = p.at_temperature(1e-4);
  EXPECT_NEAR(entropy_continuum(q).integral_form / gibbs_entropy_exact(q), 1.0, 0.05);
  EXPECT_FALSE(entropy_continuum(p.at_temperature(1.0)).in_validity_regime);
}

TEST(Continuum, ExactEntropyPowerLaw) {
  for (double gamma : {0.4, 1.0}) {
    ThermoParams p;
    p.gamma = gamma;
    const double slope = excess_slope(p, 1e-3, 1e-1, gibbs_entropy_exact);
    EXPECT_NEAR(slope / (std::log(2.0) / gamma), 1.0, 0.02) << "gamma = " << gamma;
    EXPECT_NEAR(excess_slope(p, 1e-3, 1e-1, integral_form) / (std::log(2.0) / gamma), 1.0, 0.02);
  }
}

TEST(ThermoParams, Validation) {
  ThermoParams p;
  p.gamma = 0;
  EXPECT_THROW(gibbs_entropy_exact(p), std::invalid_argument);
  p = {};
  p.r = 1;
  EXPECT_THROW(partition_function_log(p), std::invalid_argument);
  EXPECT_THROW(log_grid(1, 1, 5), std::invalid_argument);
  const auto g = log_grid(1e-6, 1e-1, 61);
  EXPECT_NEAR(g.front(), 1e-6, 1e-18);
  EXPECT_NEAR(g.back(), 1e-1, 1e-15);
  EXPECT_NEAR(g[12], 1e-5, 1e-15);
}
