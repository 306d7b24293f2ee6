// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment tables behind the CLI subcommands. Every random draw comes from a
// stream derived from (seed, point, sample), so tables do not depend on the
// thread count.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nora/analysis.hpp"
#include "nora/config.hpp"
#include "nora/encoder.hpp"
#include "nora/parallel.hpp"
#include "nora/svg.hpp"
#include "nora/thermo.hpp"

namespace nora {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  Table table;
  nlohmann::json summary;
  svg::Plot plot;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// "# <config json>" line, header row, then rows.
inline std::string to_csv(const Table& t, const nlohmann::json& config) {
  std::string out = "# " + config.dump() + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distance ensembles

struct DistanceSample {
  std::size_t n = 0;
  std::size_t delta = 0;  ///< the cap when no leaking region was found
  bool found = false;
  std::size_t bound = 0;  ///< singleton bound
};

/// One encoder drawn from p.seed and its Monte Carlo distance estimate.
inline DistanceSample sample_distance(const NoraParams& p, std::size_t distance_samples) {
  const EncodedState e = encode_with_reference(p);
  const DistanceEstimate est = monte_carlo_distance(e, distance_samples, derive_seed(p.seed, {0xd157}));
  return {p.N(), est.delta.value_or(est.cap), est.found(), singleton_bound(p.N(), p.k())};
}

/// `samples` encoders; encoder i uses seed derive_seed(seed, {point, i}).
inline std::vector<DistanceSample> distance_ensemble(NoraParams p, std::size_t samples, std::size_t distance_samples,
                                                     std::uint64_t seed, std::uint64_t point, std::size_t threads = 1) {
  std::vector<DistanceSample> out(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    NoraParams local = p;
    local.seed = derive_seed(seed, {point, i});
    out[i] = sample_distance(local, distance_samples);
  });
  return out;
}

struct EnsembleSummary {
  SampleSummary delta;
  SampleSummary relative;
  std::size_t censored = 0;          ///< no leaking region up to the cap
  std::size_t bound_violations = 0;  ///< found with delta above the singleton bound
};

inline EnsembleSummary summarize(const std::vector<DistanceSample>& xs) {
  EnsembleSummary s;
  std::vector<double> d, rel;
  for (const auto& x : xs) {
    d.push_back(static_cast<double>(x.delta));
    rel.push_back(static_cast<double>(x.delta) / static_cast<double>(x.n));
    s.censored += !x.found;
    s.bound_violations += x.found && x.delta > x.bound;
  }
  s.delta = summarize(std::span<const double>(d));
  s.relative = summarize(std::span<const double>(rel));
  return s;
}

namespace detail {
inline nlohmann::json ensemble_json(double x, const EnsembleSummary& s) {
  return {{"x", x},
          {"mean_delta", s.delta.mean},
          {"sem_delta", s.delta.sem},
          {"samples", s.delta.count},
          {"censored", s.censored},
          {"singleton_violations", s.bound_violations}};
}

inline svg::Series column_series(const Table& t, std::size_t x, std::size_t y, std::string name) {
  svg::Series s{std::move(name), {}, {}, false};
  for (const auto& row : t.rows) {
    s.x.push_back(row[x]);
    s.y.push_back(row[y]);
  }
  return s;
}
}  // namespace detail

inline ExperimentResult run_distance_vs_depth(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult r;
  r.table.columns = {"D", "mean_delta", "sem_delta", "singleton_bound"};
  r.summary["points"] = nlohmann::json::array();
  for (std::size_t depth = c.range_min; depth <= c.range_max; ++depth) {
    NoraParams p = c.nora;
    p.depth = depth;
    const auto s = summarize(distance_ensemble(p, c.samples, c.distance_samples, c.seed, depth, threads));
    const double bound = static_cast<double>(singleton_bound(p.N(), p.k()));
    r.table.rows.push_back({static_cast<double>(depth), s.delta.mean, s.delta.sem, bound});
    r.summary["points"].push_back(detail::ensemble_json(static_cast<double>(depth), s));
  }
  r.plot = {"code distance vs circuit depth", "D", "mean delta", false, false,
            {detail::column_series(r.table, 0, 1, "mean delta"), detail::column_series(r.table, 0, 3, "singleton bound")}};
  return r;
}

inline ExperimentResult run_distance_scaling(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult r;
  r.table.columns = {"N", "inv_N", "mean_rel_delta", "sem", "rel_singleton"};
  r.summary["points"] = nlohmann::json::array();
  for (std::size_t x = c.range_min; x <= c.range_max; ++x) {
    NoraParams p = c.nora;
    if (auto* f = std::get_if<FixedMode>(&p.mode))
      f->layers = x;
    else
      std::get<SykMode>(p.mode).a = x;
    p.validate();
    const auto s = summarize(distance_ensemble(p, c.samples, c.distance_samples, c.seed, x, threads));
    const double n = static_cast<double>(p.N());
    r.table.rows.push_back({n, 1.0 / n, s.relative.mean, s.relative.sem,
                            static_cast<double>(singleton_bound(p.N(), p.k())) / n});
    auto j = detail::ensemble_json(static_cast<double>(x), s);
    j["N"] = p.N();
    r.summary["points"].push_back(j);
  }
  r.plot = {"relative distance vs 1/N", "1/N", "delta / N", false, false,
            {detail::column_series(r.table, 1, 2, "mean delta/N"), detail::column_series(r.table, 1, 4, "singleton bound / N")}};
  return r;
}

inline ExperimentResult run_distance_vs_k(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult r;
  r.table.columns = {"k", "mean_delta", "sem"};
  r.summary["points"] = nlohmann::json::array();
  std::vector<double> ks, means;
  for (std::size_t k = c.range_min; k <= c.range_max; ++k) {
    NoraParams p = c.nora;
    std::get<FixedMode>(p.mode).k = k;
    const auto s = summarize(distance_ensemble(p, c.samples, c.distance_samples, c.seed, k, threads));
    r.table.rows.push_back({static_cast<double>(k), s.delta.mean, s.delta.sem});
    r.summary["points"].push_back(detail::ensemble_json(static_cast<double>(k), s));
    ks.push_back(static_cast<double>(k));
    means.push_back(s.delta.mean);
  }
  if (ks.size() >= 2) {
    const auto fit = least_squares(ks, means);
    r.summary["slope"] = fit.slope;
    r.summary["intercept"] = fit.intercept;
  }
  r.plot = {"code distance vs k", "k", "mean delta", false, false, {detail::column_series(r.table, 0, 1, "mean delta")}};
  return r;
}

inline ExperimentResult run_weights(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult r;
  r.table.columns = {"layer_or_a", "D", "weight", "rel_weight", "w_max"};
  r.summary["means"] = nlohmann::json::array();
  const bool syk = c.nora.is_syk();
  std::vector<svg::Series> series;
  for (std::size_t depth : c.depths) {
    svg::Series line{"D=" + std::to_string(depth), {}, {}, false};
    std::vector<std::size_t> xs;
    if (syk)
      for (std::size_t a = c.range_min; a <= c.range_max; ++a) xs.push_back(a);
    else
      xs.push_back(0);
    for (std::size_t x : xs) {
      NoraParams p = c.nora;
      p.depth = depth;
      if (syk) std::get<SykMode>(p.mode).a = x;
      p.validate();
      std::vector<std::vector<LayerWeights>> per_sample(c.samples);
      parallel_for(c.samples, threads, [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, {depth, x, i}));
        per_sample[i] = weight_histogram_by_layer(p, rng);
      });
      const std::size_t first_layer = syk ? p.layers() : 0;
      for (std::size_t l = first_layer; l <= p.layers(); ++l) {
        double sum = 0, count = 0, w_max = 0, n_l = 0;
        for (const auto& layers : per_sample) {
          const auto& lw = layers[l];
          w_max = lw.w_max;
          n_l = static_cast<double>(lw.n_sites);
          for (auto w : lw.weights) {
            const double label = syk ? static_cast<double>(x) : static_cast<double>(l);
            r.table.rows.push_back({label, static_cast<double>(depth), static_cast<double>(w), w / n_l, w_max});
            sum += static_cast<double>(w);
            ++count;
          }
        }
        const double mean = count ? sum / count : 0;
        r.summary["means"].push_back({{"layer_or_a", syk ? x : l},
                                      {"D", depth},
                                      {"n", n_l},
                                      {"mean_weight", mean},
                                      {"w_max", w_max},
                                      {"mean_over_w_max", w_max > 0 ? mean / w_max : 0.0}});
        line.x.push_back(syk ? static_cast<double>(x) : static_cast<double>(l));
        line.y.push_back(w_max > 0 ? mean / w_max : 0.0);
      }
    }
    series.push_back(std::move(line));
  }
  r.plot = {"mean stabilizer weight / w_max", syk ? "a" : "layer", "mean weight / w_max", false, false, std::move(series)};
  return r;
}

inline ExperimentResult run_growth(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult r;
  r.table.columns = {"step", "mean_weight", "sem", "predicted_g", "D_max_g", "D_max_q"};
  const std::size_t n = c.growth_sites;
  std::vector<std::vector<std::size_t>> traj(c.samples);
  parallel_for(c.samples, threads, [&](std::size_t i) {
    Rng rng(derive_seed(c.seed, {i}));
    traj[i] = operator_growth_fixed(WeylVector::single(n, 0, 1, 0, c.nora.d), c.nora.q, c.growth_steps, rng);
  });
  const auto f = growth_formulas(c.nora.d, c.nora.q, c.nora.r, n, 1.0);
  std::vector<double> means;
  for (std::size_t t = 0; t <= c.growth_steps; ++t) {
    std::vector<double> w;
    for (const auto& tr : traj) w.push_back(static_cast<double>(tr[t]));
    const auto s = summarize(std::span<const double>(w));
    means.push_back(s.mean);
    r.table.rows.push_back({static_cast<double>(t), s.mean, s.sem, f.g, f.d_max, f.d_max_q});
  }
  nlohmann::json ratios = nlohmann::json::array();
  for (std::size_t t = 0; t + 1 < means.size(); ++t)
    ratios.push_back({{"step", t + 1}, {"from_weight", means[t]}, {"ratio", means[t + 1] / means[t]}});
  r.summary = {{"g", f.g},
               {"D_max_g", f.d_max},
               {"D_max_q", f.d_max_q},
               {"plateau_predicted", nontrivial_fraction(c.nora.d) * static_cast<double>(n)},
               {"ratios", ratios}};
  r.plot = {"operator weight growth", "step", "mean weight", false, true, {detail::column_series(r.table, 0, 1, "mean weight")}};
  return r;
}

inline ExperimentResult run_entropy(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult r;
  r.table.columns = {"T", "S_exact", "S_integral", "S_gamma_bound", "C_V"};
  const auto grid = log_grid(c.t_min, c.t_max, c.points);
  std::vector<ThermoRow> rows(grid.size());
  std::vector<char> valid(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const ThermoParams p = c.thermo.at_temperature(grid[i]);
    rows[i] = thermo_row(p);
    valid[i] = entropy_continuum(p).in_validity_regime;
  });
  const double ground = static_cast<double>(c.thermo.k) * std::log(static_cast<double>(c.thermo.d));
  svg::Series exact{"S_exact - k ln d", {}, {}, false}, integral{"S_integral - k ln d", {}, {}, false},
      bound{"S_gamma_bound - k ln d", {}, {}, false};
  for (const auto& row : rows) {
    r.table.rows.push_back({row.temperature, row.s_exact, row.s_integral, row.s_gamma_bound, row.heat_capacity});
    exact.x.push_back(row.temperature);
    exact.y.push_back(row.s_exact - ground);
    integral.x.push_back(row.temperature);
    integral.y.push_back(row.s_integral - ground);
    bound.x.push_back(row.temperature);
    bound.y.push_back(row.s_gamma_bound - ground);
  }
  r.summary = {{"alpha_over_gamma", c.thermo.alpha_value() / c.thermo.gamma},
               {"ground_entropy", ground},
               {"points_in_validity_regime", std::count(valid.begin(), valid.end(), 1)}};
  r.plot = {"entropy above the ground space", "T / Lambda", "S - k ln d", true, true, {exact, integral, bound}};
  return r;
}

inline ExperimentResult run_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  validate(c);
  if (c.command == "distance-vs-depth") return run_distance_vs_depth(c, threads);
  if (c.command == "distance-scaling") return run_distance_scaling(c, threads);
  if (c.command == "distance-vs-k") return run_distance_vs_k(c, threads);
  if (c.command == "weights") return run_weights(c, threads);
  if (c.command == "growth") return run_growth(c, threads);
  return run_entropy(c, threads);
}

/// Writes <command>.csv, <command>.json and, if requested, <command>.svg.
inline void write_outputs(const ExperimentConfig& c, const ExperimentResult& r, const std::filesystem::path& dir,
                          bool plot) {
  std::filesystem::create_directories(dir);
  const nlohmann::json config = to_json(c);
  auto write = [&](const std::string& ext, const std::string& text) {
    std::ofstream f(dir / (c.command + ext), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / (c.command + ext)).string());
    f << text;
  };
  write(".csv", to_csv(r.table, config));
  write(".json", nlohmann::json{{"config", config}, {"summary", r.summary}}.dump(2) + "\n");
  if (plot) write(".svg", svg::render(r.plot));
}

}  // namespace nora
