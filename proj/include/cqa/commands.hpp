#pragma once

// Command implementations behind the command-line tool. Each command writes
// its outputs plus a manifest.json that can be fed back through --config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqa/clustering.hpp"
#include "cqa/embedding.hpp"
#include "cqa/experiments.hpp"
#include "cqa/io.hpp"
#include "cqa/simulation.hpp"

namespace cqa {

struct RunConfig {
  std::string command;
  int scenario = 0;             // built-in scenario 1..6; 0 when unused
  std::string scenario_file;    // JSON ScenarioSpec, overrides `scenario`
  std::string wrap = "mod";     // "mod" or "arctan"
  std::string input;            // wind CSV or series CSV
  std::string months = "winter-summer";  // or "all"
  std::string station;          // empty: the only station in the input
  int trials = 50;
  int restarts = 50;
  int max_iter = 100;
  int length = 500;
  int replicates = 200;
  std::vector<int> lags;          // empty: scenario lags, or searched
  std::vector<double> levels{0.1, 0.5, 0.9};
  std::vector<double> radius;     // empty: default grid
  std::vector<int> clusters;      // empty: command default
  std::vector<double> fuzziness;  // empty: command default
  double m_step = 0.1;            // spacing of the (1, 4] grid for cutoff scenarios
  std::vector<std::string> metrics;  // empty: all four for simulate, CQA otherwise
  bool lag_test = false;          // choose lags by the permutation test
  double cutoff = 0.7;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = "out";
};

Json to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::string& path);

/// Dataset assembled from --input or a scenario, with display labels.
struct LabeledInput {
  std::vector<std::string> labels;
  std::vector<CircularSeries> series;
  std::vector<int> truth;  // scenario labels or season (0 winter, 1 summer); empty when unknown
  std::vector<std::string> warnings;
  Json ingest_report;  // wind input only
};
LabeledInput load_input(const RunConfig& config);

SimulationReport cmd_simulate(const RunConfig& config);

struct ClusterRun {
  std::vector<std::string> labels;
  FuzzyPartition partition;
  MetricParams params;
  int clusters = 0;
  double fuzziness = 0.0;
  double xie_beni = kInfiniteIndex;
  std::vector<int> truth;
};
ClusterRun cmd_cluster(const RunConfig& config);

Embedding2D cmd_mds(const RunConfig& config);

MotivatingResult cmd_motivating(const RunConfig& config);

}  // namespace cqa
