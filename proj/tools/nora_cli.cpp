// SPDX-License-Identifier: Apache-2.0
// Experiment runner: one subcommand per table, CSV + JSON + SVG outputs.
//
// Exit status: 0 success, 2 usage or configuration error, 3 runtime failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nora/config.hpp"
#include "nora/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples, distance_samples;
  std::string out = "out";
  bool plot = true;
  std::size_t threads = 1;
  std::optional<unsigned> d;
  std::optional<std::size_t> q, r, depth, k, layers, a, b, range_min, range_max, n, steps, points;
  std::vector<std::size_t> depths;
  std::optional<double> gamma, lambda, alpha, t_min, t_max;
  std::optional<std::size_t> thermo_k, thermo_layers;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON config file");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--samples", o.samples, "state samples per point");
  sub->add_option("--distance-samples", o.distance_samples, "regions sampled per size");
  sub->add_option("--out", o.out, "output directory");
  sub->add_flag("--plot,!--no-plot", o.plot, "write an SVG plot");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

void add_nora(CLI::App* sub, Overrides& o) {
  sub->add_option("--d", o.d, "qudit dimension (odd prime)");
  sub->add_option("--q", o.q, "gate arity");
  sub->add_option("--r", o.r, "growth rate");
  sub->add_option("--k", o.k, "logical qudits (fixed mode)");
  sub->add_option("--L", o.layers, "layers (fixed mode)");
  sub->add_option("--a", o.a, "k = r^a (scaling mode)");
  sub->add_option("--b", o.b, "L = a + b (scaling mode)");
}

nora::ExperimentConfig build_config(const std::string& command, const Overrides& o) {
  nora::ExperimentConfig c = nora::default_config(command);
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw nora::ConfigError("cannot open config " + o.config_path);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw nora::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    c = nora::config_from_json(j, command);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.distance_samples) c.distance_samples = *o.distance_samples;
  if (o.d) c.nora.d = *o.d;
  if (o.q) c.nora.q = *o.q;
  if (o.r) c.nora.r = *o.r;
  if (o.depth) c.nora.depth = *o.depth;
  if (o.a || o.b) {
    if (o.k || o.layers) throw nora::ConfigError("--k/--L and --a/--b are mutually exclusive");
    nora::SykMode s = c.nora.is_syk() ? std::get<nora::SykMode>(c.nora.mode) : nora::SykMode{};
    if (o.a) s.a = *o.a;
    if (o.b) s.b = *o.b;
    c.nora.mode = s;
  } else if (o.k || o.layers) {
    nora::FixedMode f = c.nora.is_syk() ? nora::FixedMode{} : std::get<nora::FixedMode>(c.nora.mode);
    if (o.k) f.k = *o.k;
    if (o.layers) f.layers = *o.layers;
    c.nora.mode = f;
  }
  if (o.range_min) c.range_min = *o.range_min;
  if (o.range_max) c.range_max = *o.range_max;
  if (!o.depths.empty()) c.depths = o.depths;
  if (o.n) c.growth_sites = *o.n;
  if (o.steps) c.growth_steps = *o.steps;
  if (o.gamma) c.thermo.gamma = *o.gamma;
  if (o.lambda) c.thermo.lambda = *o.lambda;
  if (o.alpha) c.thermo.alpha = *o.alpha;
  if (o.thermo_k) c.thermo.k = *o.thermo_k;
  if (o.thermo_layers) c.thermo.layers = *o.thermo_layers;
  if (o.t_min) c.t_min = *o.t_min;
  if (o.t_max) c.t_max = *o.t_max;
  if (o.points) c.points = *o.points;
  nora::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NoRA stabilizer code experiments"};
  app.require_subcommand(1);
  Overrides o;

  auto* depth = app.add_subcommand("distance-vs-depth", "mean code distance for a range of circuit depths");
  add_common(depth, o);
  add_nora(depth, o);
  depth->add_option("--D-min", o.range_min, "smallest depth");
  depth->add_option("--D-max", o.range_max, "largest depth");

  auto* scaling = app.add_subcommand("distance-scaling", "relative code distance against 1/N");
  add_common(scaling, o);
  add_nora(scaling, o);
  scaling->add_option("--D", o.depth, "circuit depth");
  scaling->add_option("--min", o.range_min, "smallest L (fixed) or a (scaling)");
  scaling->add_option("--max", o.range_max, "largest L (fixed) or a (scaling)");

  auto* vs_k = app.add_subcommand("distance-vs-k", "mean code distance against k at fixed L");
  add_common(vs_k, o);
  add_nora(vs_k, o);
  vs_k->add_option("--D", o.depth, "circuit depth");
  vs_k->add_option("--k-min", o.range_min, "smallest k");
  vs_k->add_option("--k-max", o.range_max, "largest k");

  auto* weights = app.add_subcommand("weights", "stabilizer weight distributions per layer");
  add_common(weights, o);
  add_nora(weights, o);
  weights->add_option("--depths", o.depths, "circuit depths to compare");
  weights->add_option("--min", o.range_min, "smallest a (scaling mode)");
  weights->add_option("--max", o.range_max, "largest a (scaling mode)");

  auto* growth = app.add_subcommand("growth", "weight growth of a single operator on n sites");
  add_common(growth, o);
  growth->add_option("--d", o.d, "qudit dimension (odd prime)");
  growth->add_option("--q", o.q, "gate arity");
  growth->add_option("--r", o.r, "growth rate");
  growth->add_option("--n", o.n, "number of sites");
  growth->add_option("--steps", o.steps, "sub-layers");

  auto* entropy = app.add_subcommand("entropy", "Gibbs entropy and its continuum approximations");
  add_common(entropy, o);
  entropy->add_option("--gamma", o.gamma, "energy decay rate");
  entropy->add_option("--lambda", o.lambda, "UV energy scale");
  entropy->add_option("--alpha", o.alpha, "density exponent (default ln r)");
  entropy->add_option("--k", o.thermo_k, "ground-space qudits");
  entropy->add_option("--L", o.thermo_layers, "layers");
  entropy->add_option("--t-min", o.t_min, "lowest temperature");
  entropy->add_option("--t-max", o.t_max, "highest temperature");
  entropy->add_option("--points", o.points, "temperature grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  nora::ExperimentConfig config;
  try {
    config = build_config(command, o);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    const auto result = nora::run_experiment(config, o.threads);
    nora::write_outputs(config, result, o.out, o.plot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}
