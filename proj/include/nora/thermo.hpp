// SPDX-License-Identifier: Apache-2.0
#pragma once

// Thermodynamics of the commuting-projector Hamiltonian H = −Σ_i J_i P_i,
// where P_i projects ancilla i (conjugated by the encoder) onto |0>. The
// ancillas added in layer l all carry energy J_l = Λ e^{−γ(L−l)}. Entropies
// are in nats.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nora {

struct ThermoParams {
  unsigned d = 2;
  std::size_t k = 1;
  std::size_t layers = 20;
  std::size_t r = 2;
  double lambda = 1.0;
  double gamma = 0.4;
  std::optional<double> alpha;  ///< density exponent; ln r when unset
  double beta = 1.0;

  double alpha_value() const { return alpha ? *alpha : std::log(static_cast<double>(r)); }
  double temperature() const { return 1.0 / beta; }
  /// r^L ancillas.
  double ancillas() const { return std::pow(static_cast<double>(r), static_cast<double>(layers)); }

  ThermoParams at_beta(double b) const {
    ThermoParams p = *this;
    p.beta = b;
    return p;
  }
  ThermoParams at_temperature(double t) const { return at_beta(1.0 / t); }

  void validate() const {
    if (d < 2) throw std::invalid_argument("d must be >= 2");
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    if (!(lambda > 0) || !(gamma > 0)) throw std::invalid_argument("Λ and γ must be positive");
    if (!(beta > 0)) throw std::invalid_argument("β must be positive");
    if (alpha && !(*alpha > 0)) throw std::invalid_argument("α must be positive");
  }
};

struct EnergyLevel {
  double count = 0;  ///< Δn_l
  double energy = 0; ///< J_l
};

using EnergySchedule = std::vector<EnergyLevel>;

/// Δn_1 = r, Δn_l = (r − 1) r^{l−1}; J_l = Λ e^{−γ(L−l)}.
inline EnergySchedule schedule(const ThermoParams& p) {
  EnergySchedule s;
  const double r = static_cast<double>(p.r);
  for (std::size_t l = 1; l <= p.layers; ++l) {
    const double count = l == 1 ? r : (r - 1.0) * std::pow(r, static_cast<double>(l - 1));
    s.push_back({count, p.lambda * std::exp(-p.gamma * static_cast<double>(p.layers - l))});
  }
  return s;
}

namespace detail {
/// ln(e^x + m) without overflow.
inline double log_exp_plus(double x, double m) {
  if (m == 0) return x;
  return x > 0 ? x + std::log1p(m * std::exp(-x)) : std::log(std::exp(x) + m);
}

/// Excitation probability (d − 1)/(e^x + d − 1).
inline double excited_probability(double x, double m) {
  if (x > 0) {
    const double e = m * std::exp(-x);
    return e / (1.0 + e);
  }
  return m / (std::exp(x) + m);
}

inline double binary_entropy(double p) {
  double h = 0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1.0 - p) * std::log1p(-p);
  return h;
}
}  // namespace detail

/// ln Z = k ln d + Σ_l Δn_l ln(e^{βJ_l} + d − 1).
inline double partition_function_log(const EnergySchedule& s, double beta, unsigned d, std::size_t k) {
  if (!(beta > 0)) throw std::invalid_argument("β must be positive");
  double log_z = static_cast<double>(k) * std::log(static_cast<double>(d));
  for (const auto& level : s) log_z += level.count * detail::log_exp_plus(beta * level.energy, d - 1.0);
  return log_z;
}

inline double partition_function_log(const ThermoParams& p) {
  p.validate();
  return partition_function_log(schedule(p), p.beta, p.d, p.k);
}

/// S = k ln d + <N−k> ln(d − 1) + Σ_l Δn_l H(p_l), p_l = (d − 1)/(e^{βJ_l} + d − 1).
inline double gibbs_entropy_exact(const ThermoParams& p) {
  p.validate();
  const double m = p.d - 1.0;
  double s = static_cast<double>(p.k) * std::log(static_cast<double>(p.d));
  for (const auto& level : schedule(p)) {
    const double q = detail::excited_probability(p.beta * level.energy, m);
    s += level.count * (q * std::log(m) + detail::binary_entropy(q));
  }
  return s;
}

struct ContinuumEntropy {
  double integral_form = 0;
  double gamma_bound = 0;
  /// βΛe^{−γL} at or above the configured threshold.
  bool in_validity_regime = false;
};

/// ∫_a^b t^s e^{−t} dt from regularized incomplete gammas, taking the
/// difference on the side that avoids cancellation.
inline double incomplete_gamma_integral(double s, double a, double b) {
  const double shape = s + 1.0;
  const double full = std::tgamma(shape);
  if (a >= shape) return full * (boost::math::gamma_q(shape, a) - boost::math::gamma_q(shape, b));
  return full * (boost::math::gamma_p(shape, b) - boost::math::gamma_p(shape, a));
}

/// Continuum approximation k ln d + (d−1) ρ₀ e^{αL}/γ (βΛ)^{−α/γ} ∫_{βΛe^{−γL}}^{βΛ} t^{α/γ} e^{−t} dt
/// with ρ₀ = α(N−k)/(e^{αL} − 1); gamma_bound replaces the integral by Γ(α/γ + 1).
inline ContinuumEntropy entropy_continuum(const ThermoParams& p, double validity_threshold = 10.0) {
  p.validate();
  const double alpha = p.alpha_value();
  const double l = static_cast<double>(p.layers);
  const double s = alpha / p.gamma;
  const double bl = p.beta * p.lambda;
  const double lower = bl * std::exp(-p.gamma * l);
  // ρ₀ e^{αL} = α (N − k) / (1 − e^{−αL})
  const double rho_scaled = alpha * p.ancillas() / -std::expm1(-alpha * l);
  const double prefactor = (p.d - 1.0) * rho_scaled / p.gamma * std::pow(bl, -s);
  const double ground = static_cast<double>(p.k) * std::log(static_cast<double>(p.d));
  ContinuumEntropy out;
  out.integral_form = ground + prefactor * incomplete_gamma_integral(s, lower, bl);
  out.gamma_bound = ground + prefactor * std::tgamma(s + 1.0);
  out.in_validity_regime = lower >= validity_threshold;
  return out;
}

/// C_V = T dS/dT = dS/d ln T, by a central difference in ln T.
inline double heat_capacity(const ThermoParams& p, double log_step = 1e-4) {
  p.validate();
  const double t = p.temperature();
  const double up = gibbs_entropy_exact(p.at_temperature(t * std::exp(log_step)));
  const double down = gibbs_entropy_exact(p.at_temperature(t * std::exp(-log_step)));
  return (up - down) / (2.0 * log_step);
}

struct ThermoRow {
  double temperature = 0;
  double s_exact = 0;
  double s_integral = 0;
  double s_gamma_bound = 0;
  double heat_capacity = 0;
};

inline ThermoRow thermo_row(const ThermoParams& p) {
  const auto cont = entropy_continuum(p);
  return {p.temperature(), gibbs_entropy_exact(p), cont.integral_form, cont.gamma_bound, heat_capacity(p)};
}

/// `points` temperatures log-spaced over [t_min, t_max].
inline std::vector<double> log_grid(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0) || !(t_max > t_min) || points < 2) throw std::invalid_argument("bad log grid");
  std::vector<double> out;
  const double a = std::log(t_min), b = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i)
    out.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1)));
  return out;
}

}  // namespace nora
