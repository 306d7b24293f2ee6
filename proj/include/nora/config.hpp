// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON configuration for experiments.
//
//   {
//     "command": "distance-vs-depth",
//     "seed": 1, "samples": 10, "distance_samples": 100,
//     "nora":   {"d": 3, "q": 2, "r": 2, "D": 4, "mode": {"fixed": {"k": 2, "L": 7}}},
//     "range":  {"min": 1, "max": 6},
//     "depths": [1, 3],
//     "growth": {"n": 128, "steps": 30},
//     "thermo": {"d": 2, "k": 1, "L": 20, "r": 2, "lambda": 1, "gamma": 0.4, "alpha": null,
//                "t_min": 1e-6, "t_max": 0.1, "points": 61}
//   }
//
// "mode" is either {"fixed": {"k", "L"}} or {"syk": {"a", "b"}}. Every key is
// optional; missing keys keep the command's defaults and unknown keys are
// rejected.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nora/encoder.hpp"
#include "nora/thermo.hpp"

namespace nora {

/// Raised for malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names{"distance-vs-depth", "distance-scaling", "distance-vs-k",
                                              "weights", "growth", "entropy"};
  return names;
}

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::size_t samples = 10;
  std::size_t distance_samples = 100;
  NoraParams nora;
  std::size_t range_min = 1;
  std::size_t range_max = 6;
  std::vector<std::size_t> depths{1, 3};
  std::size_t growth_sites = 128;
  std::size_t growth_steps = 30;
  ThermoParams thermo;
  double t_min = 1e-6;
  double t_max = 1e-1;
  std::size_t points = 61;
};

/// Command defaults: d = 3, r = 2, q = 2 with sample counts
/// and system sizes scaled down.
inline ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  c.nora.d = 3;
  c.nora.q = 2;
  c.nora.r = 2;
  if (command == "distance-vs-depth") {
    c.nora.mode = FixedMode{2, 5};
    c.range_min = 1;
    c.range_max = 6;
  } else if (command == "distance-scaling") {
    c.nora.depth = 3;
    c.nora.mode = FixedMode{2, 2};
    c.range_min = 2;
    c.range_max = 6;
  } else if (command == "distance-vs-k") {
    c.nora.depth = 3;
    c.nora.mode = FixedMode{1, 5};
    c.range_min = 1;
    c.range_max = 8;
  } else if (command == "weights") {
    c.samples = 5;
    c.nora.mode = FixedMode{2, 6};
  } else if (command == "growth") {
    c.samples = 50;
  } else if (command == "entropy") {
  } else {
    throw ConfigError("unknown command: " + command);
  }
  return c;
}

namespace detail {
inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}
}  // namespace detail

inline nlohmann::json to_json(const NoraParams& p) {
  nlohmann::json mode;
  if (const auto* f = std::get_if<FixedMode>(&p.mode))
    mode["fixed"] = {{"k", f->k}, {"L", f->layers}};
  else
    mode["syk"] = {{"a", std::get<SykMode>(p.mode).a}, {"b", std::get<SykMode>(p.mode).b}};
  return {{"d", p.d}, {"q", p.q}, {"r", p.r}, {"D", p.depth}, {"mode", mode}, {"seed", p.seed}};
}

inline void update_from_json(NoraParams& p, const nlohmann::json& j) {
  detail::reject_unknown(j, {"d", "q", "r", "D", "mode", "seed"}, "nora");
  detail::read(j, "d", p.d);
  detail::read(j, "q", p.q);
  detail::read(j, "r", p.r);
  detail::read(j, "D", p.depth);
  detail::read(j, "seed", p.seed);
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    detail::reject_unknown(m, {"fixed", "syk"}, "nora.mode");
    if (m.size() != 1) throw ConfigError("nora.mode needs exactly one of 'fixed' or 'syk'");
    if (m.contains("fixed")) {
      FixedMode f = std::holds_alternative<FixedMode>(p.mode) ? std::get<FixedMode>(p.mode) : FixedMode{};
      detail::reject_unknown(m.at("fixed"), {"k", "L"}, "nora.mode.fixed");
      detail::read(m.at("fixed"), "k", f.k);
      detail::read(m.at("fixed"), "L", f.layers);
      p.mode = f;
    } else {
      SykMode s = std::holds_alternative<SykMode>(p.mode) ? std::get<SykMode>(p.mode) : SykMode{};
      detail::reject_unknown(m.at("syk"), {"a", "b"}, "nora.mode.syk");
      detail::read(m.at("syk"), "a", s.a);
      detail::read(m.at("syk"), "b", s.b);
      p.mode = s;
    }
  }
}

inline NoraParams nora_params_from_json(const nlohmann::json& j) {
  NoraParams p;
  update_from_json(p, j);
  return p;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["distance_samples"] = c.distance_samples;
  nlohmann::json nora = to_json(c.nora);
  nora.erase("seed");
  j["nora"] = nora;
  j["range"] = {{"min", c.range_min}, {"max", c.range_max}};
  j["depths"] = c.depths;
  j["growth"] = {{"n", c.growth_sites}, {"steps", c.growth_steps}};
  nlohmann::json t{{"d", c.thermo.d},           {"k", c.thermo.k},         {"L", c.thermo.layers},
                   {"r", c.thermo.r},           {"lambda", c.thermo.lambda}, {"gamma", c.thermo.gamma},
                   {"alpha", nullptr},          {"t_min", c.t_min},        {"t_max", c.t_max},
                   {"points", c.points}};
  if (c.thermo.alpha) t["alpha"] = *c.thermo.alpha;
  j["thermo"] = t;
  return j;
}

inline void update_from_json(ExperimentConfig& c, const nlohmann::json& j) {
  detail::reject_unknown(j, {"command", "seed", "samples", "distance_samples", "nora", "range", "depths", "growth", "thermo"},
                         "config");
  detail::read(j, "seed", c.seed);
  detail::read(j, "samples", c.samples);
  detail::read(j, "distance_samples", c.distance_samples);
  if (j.contains("nora")) {
    update_from_json(c.nora, j.at("nora"));
    if (j.at("nora").contains("seed")) throw ConfigError("set the seed at the top level, not in nora");
  }
  if (j.contains("range")) {
    detail::reject_unknown(j.at("range"), {"min", "max"}, "range");
    detail::read(j.at("range"), "min", c.range_min);
    detail::read(j.at("range"), "max", c.range_max);
  }
  detail::read(j, "depths", c.depths);
  if (j.contains("growth")) {
    detail::reject_unknown(j.at("growth"), {"n", "steps"}, "growth");
    detail::read(j.at("growth"), "n", c.growth_sites);
    detail::read(j.at("growth"), "steps", c.growth_steps);
  }
  if (j.contains("thermo")) {
    const auto& t = j.at("thermo");
    detail::reject_unknown(t, {"d", "k", "L", "r", "lambda", "gamma", "alpha", "t_min", "t_max", "points"}, "thermo");
    detail::read(t, "d", c.thermo.d);
    detail::read(t, "k", c.thermo.k);
    detail::read(t, "L", c.thermo.layers);
    detail::read(t, "r", c.thermo.r);
    detail::read(t, "lambda", c.thermo.lambda);
    detail::read(t, "gamma", c.thermo.gamma);
    if (t.contains("alpha")) {
      if (t.at("alpha").is_null()) {
        c.thermo.alpha.reset();
      } else {
        double a = 0;
        detail::read(t, "alpha", a);
        c.thermo.alpha = a;
      }
    }
    detail::read(t, "t_min", c.t_min);
    detail::read(t, "t_max", c.t_max);
    detail::read(t, "points", c.points);
  }
}

/// Builds a config from JSON on top of the defaults of its command. `command`
/// overrides the file's "command" key when nonempty.
inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& command = {}) {
  std::string name = command;
  if (name.empty()) {
    if (!j.contains("command")) throw ConfigError("config names no command");
    name = j.at("command").get<std::string>();
  } else if (j.contains("command") && j.at("command").get<std::string>() != name) {
    throw ConfigError("config is for command '" + j.at("command").get<std::string>() + "', not '" + name + "'");
  }
  ExperimentConfig c = default_config(name);
  update_from_json(c, j);
  return c;
}

/// Checks everything the command will use; throws ConfigError.
inline void validate(const ExperimentConfig& c) {
  const auto& cmds = experiment_commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) throw ConfigError("unknown command: " + c.command);
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.distance_samples < 1) throw ConfigError("distance_samples must be >= 1");
  if (c.range_min > c.range_max) throw ConfigError("range.min must not exceed range.max");
  const bool uses_nora = c.command != "entropy" && c.command != "growth";
  if (uses_nora) {
    try {
      c.nora.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("nora: ") + e.what());
    }
  }
  if (c.command == "distance-vs-depth" && c.range_min < 1) throw ConfigError("depth range must start at 1");
  if (c.command == "distance-vs-depth" && c.nora.is_syk()) throw ConfigError("distance-vs-depth needs fixed mode");
  if (c.command == "distance-vs-k" && c.nora.is_syk()) throw ConfigError("distance-vs-k needs fixed mode");
  if (c.command == "distance-vs-k" && c.range_min < 1) throw ConfigError("k range must start at 1");
  if (c.command == "distance-scaling" && c.range_min < 1) throw ConfigError("L/a range must start at 1");
  if (c.command == "weights") {
    if (c.depths.empty()) throw ConfigError("depths must not be empty");
    for (auto d : c.depths)
      if (d < 1) throw ConfigError("depths must be >= 1");
  }
  if (c.command == "growth") {
    if (!is_prime(c.nora.d) || c.nora.d == 2 || c.nora.d > kMaxModulus) throw ConfigError("d must be an odd prime <= 251");
    if (c.nora.q < 2 || c.growth_sites < c.nora.q) throw ConfigError("growth needs q >= 2 and n >= q");
  }
  if (c.command == "entropy") {
    try {
      c.thermo.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("thermo: ") + e.what());
    }
    if (!(c.t_min > 0) || !(c.t_max > c.t_min) || c.points < 2) throw ConfigError("bad temperature grid");
  }
}

}  // namespace nora
