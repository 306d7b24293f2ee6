// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nora/experiments.hpp"

using namespace nora;

namespace {

ExperimentConfig small(const std::string& cmd) {
  auto c = default_config(cmd);
  c.samples = 3;
  c.distance_samples = 10;
  if (cmd == "distance-vs-depth") {
    c.nora.mode = FixedMode{2, 3};
    c.range_max = 2;
  } else if (cmd == "distance-scaling") {
    c.range_min = 2;
    c.range_max = 3;
  } else if (cmd == "distance-vs-k") {
    c.nora.mode = FixedMode{1, 3};
    c.range_max = 3;
  } else if (cmd == "weights") {
    c.nora.mode = FixedMode{2, 3};
    c.samples = 2;
  } else if (cmd == "growth") {
    c.growth_sites = 16;
    c.growth_steps = 6;
  } else {
    c.points = 5;
  }
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Csv, HeaderAndNumbers) {
  Table t{{"a", "b"}, {{1, 0.5}, {1e-7, std::nan("")}}};
  const auto csv = to_csv(t, nlohmann::json{{"x", 1}});
  EXPECT_EQ(csv, "# {\"x\":1}\na,b\n1,0.5\n1e-07,nan\n");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
}

TEST(DistanceEnsemble, SummaryCountsCensoring) {
  std::vector<DistanceSample> xs{{10, 4, true, 5}, {10, 5, false, 5}, {10, 6, true, 5}};
  const auto s = summarize(xs);
  EXPECT_EQ(s.censored, 1u);
  EXPECT_EQ(s.bound_violations, 1u);
  EXPECT_DOUBLE_EQ(s.delta.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.relative.mean, 0.5);
}

TEST(DistanceEnsemble, ThreadIndependent) {
  NoraParams p;
  p.mode = FixedMode{2, 4};
  p.depth = 2;
  const auto a = distance_ensemble(p, 6, 20, 5, 1, 1);
  const auto b = distance_ensemble(p, 6, 20, 5, 1, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].delta, b[i].delta);
    EXPECT_EQ(a[i].found, b[i].found);
    EXPECT_LE(a[i].delta, a[i].bound);
  }
}

TEST(Experiments, AllCommandsRunAndAreDeterministic) {
  for (const auto& cmd : experiment_commands()) {
    const auto c = small(cmd);
    const auto one = run_experiment(c, 1);
    const auto two = run_experiment(c, 2);
    EXPECT_FALSE(one.table.rows.empty()) << cmd;
    for (const auto& row : one.table.rows) EXPECT_EQ(row.size(), one.table.columns.size()) << cmd;
    EXPECT_EQ(to_csv(one.table, to_json(c)), to_csv(two.table, to_json(c))) << cmd;
    EXPECT_EQ(one.summary.dump(), two.summary.dump()) << cmd;
  }
}

TEST(Experiments, ColumnLayout) {
  EXPECT_EQ(run_experiment(small("distance-vs-depth")).table.columns,
            (std::vector<std::string>{"D", "mean_delta", "sem_delta", "singleton_bound"}));
  EXPECT_EQ(run_experiment(small("entropy")).table.columns,
            (std::vector<std::string>{"T", "S_exact", "S_integral", "S_gamma_bound", "C_V"}));
  const auto g = run_experiment(small("growth"));
  ASSERT_EQ(g.table.rows.size(), 7u);
  EXPECT_DOUBLE_EQ(g.table.rows.front()[1], 1.0);
}

TEST(Experiments, WriteOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "nora_test_outputs";
  std::filesystem::remove_all(dir);
  const auto c = small("entropy");
  write_outputs(c, run_experiment(c), dir, true);
  const auto csv = slurp(dir / "entropy.csv");
  EXPECT_EQ(csv.rfind("# {", 0), 0u);
  EXPECT_EQ(nlohmann::json::parse(csv.substr(2, csv.find('\n') - 2)), to_json(c));
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir / "entropy.json")).contains("summary"));
  EXPECT_NE(slurp(dir / "entropy.svg").find("<svg"), std::string::npos);
  std::filesystem::remove_all(dir);
}
