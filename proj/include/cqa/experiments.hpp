#pragma once

// Monte Carlo clustering experiments on simulated scenarios.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cqa/clustering.hpp"
#include "cqa/dissimilarity.hpp"
#include "cqa/evaluation.hpp"
#include "cqa/simulation.hpp"

namespace cqa {

/// 0.1, 0.2, ..., 2.0.
std::vector<double> default_radius_grid();

struct SimulationConfig {
  ScenarioSpec scenario;
  int trials = 50;
  int restarts = 50;
  int max_iter = 100;
  std::vector<double> fuzziness{1.2, 1.4, 1.6, 1.8, 2.0};
  std::vector<double> radii = default_radius_grid();  // CQA radius chosen per fit by Xie-Beni
  std::vector<double> levels{0.1, 0.5, 0.9};
  std::vector<MetricKind> metrics{MetricKind::FL, MetricKind::JS, MetricKind::CQA, MetricKind::QA};
  double cutoff = 0.7;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Fuzzy partition for one (metric, m): multi-start fit on each candidate
/// matrix, keeping the one with the smallest Xie-Beni index.
struct SelectedFit {
  FuzzyPartition partition;
  std::size_t matrix_index = 0;
  double xie_beni = kInfiniteIndex;
};
SelectedFit fit_select_by_xie_beni(std::span<const DissimilarityMatrix> candidates, const ClusterConfig& config);

/// Matrices for one metric on one dataset: one per radius for CQA, a single
/// one otherwise.
std::vector<DissimilarityMatrix> metric_matrices(std::span<const CircularSeries> dataset, MetricKind metric,
                                                 std::span<const int> lags, std::span<const double> levels,
                                                 std::span<const double> radii);

struct IndexCell {
  MetricKind metric = MetricKind::CQA;
  double fuzziness = 0.0;
  double arif_mean = 0.0, arif_sd = 0.0;
  double jif_mean = 0.0, jif_sd = 0.0;
  double arif_self_mean = 0.0;    // ARIF over pairs including i == j
  std::vector<double> arif, jif;  // per trial
  std::vector<double> arif_self;
  std::vector<double> radius;     // per trial, CQA only
};

struct RateCurve {
  MetricKind metric = MetricKind::CQA;
  FuzzinessCurve curve;
  std::vector<int> successes;  // per m
  double maximum = 0.0;
  double area = 0.0;
};

struct SimulationReport {
  bool cutoff_mode = false;        // scenario with an isolated series
  std::vector<IndexCell> indices;  // metric-major, then m; empty in cutoff mode
  std::vector<RateCurve> rates;    // one per metric; empty otherwise
};

/// Runs `trials` independent datasets. Every metric and every m is evaluated
/// on the same datasets and from the same restart seeds. Scenarios without an
/// isolated series are scored with ARIF/JIF; scenarios with one are scored by
/// the cutoff rule, and the m grid then defines the fuzziness curve.
SimulationReport run_simulation(const SimulationConfig& config);

}  // namespace cqa
