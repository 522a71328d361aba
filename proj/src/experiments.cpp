#include "cqa/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqa/errors.hpp"
#include "cqa/parallel.hpp"
#include "cqa/random.hpp"

namespace cqa {

std::vector<double> default_radius_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(k / 10.0);
  return grid;
}

SelectedFit fit_select_by_xie_beni(std::span<const DissimilarityMatrix> candidates, const ClusterConfig& config) {
  if (candidates.empty()) throw InvalidConfig("no candidate dissimilarity matrices");
  SelectedFit best;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    FuzzyPartition partition = run_multistart(candidates[k].values, config);
    const double index = xie_beni(candidates[k].values, partition, config.fuzziness);
    if (k == 0 || index < best.xie_beni) {
      best.partition = std::move(partition);
      best.matrix_index = k;
      best.xie_beni = index;
    }
  }
  return best;
}

std::vector<DissimilarityMatrix> metric_matrices(std::span<const CircularSeries> dataset, MetricKind metric,
                                                 std::span<const int> lags, std::span<const double> levels,
                                                 std::span<const double> radii) {
  if (metric == MetricKind::CQA) return cqa_matrices(dataset, lags, levels, radii);
  MetricParams params;
  params.kind = metric;
  params.lags.assign(lags.begin(), lags.end());
  params.levels.assign(levels.begin(), levels.end());
  return {pairwise_matrix(dataset, params)};
}

namespace {

void mean_sd(const std::vector<double>& v, double& mean, double& sd) {
  const double n = static_cast<double>(v.size());
  mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

struct TrialOutcome {
  // [metric][m]
  std::vector<std::vector<double>> arif, jif, arif_self, radius;
  std::vector<std::vector<char>> success;
};

}  // namespace

SimulationReport run_simulation(const SimulationConfig& config) {
  if (config.trials < 1) throw InvalidConfig("trials must be positive");
  if (config.fuzziness.empty()) throw InvalidConfig("fuzziness grid must be nonempty");
  if (config.metrics.empty()) throw InvalidConfig("at least one metric is required");
  if (config.radii.empty()) throw InvalidConfig("radius grid must be nonempty");
  if (config.scenario.lags.empty()) throw InvalidConfig("scenario lags must be nonempty");

  const bool cutoff_mode = config.scenario.isolated.has_value();
  if (cutoff_mode && config.scenario.clusters.size() != 2) {
    throw InvalidConfig("cutoff scoring needs exactly two cluster blocks");
  }
  if (cutoff_mode && config.fuzziness.size() < 2) {
    throw InvalidConfig("a fuzziness curve needs at least two m values");
  }
  const std::size_t M = config.metrics.size(), F = config.fuzziness.size();

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.trials));
  parallel_for(outcomes.size(), config.threads, [&](std::size_t trial) {
    const std::uint64_t trial_seed = derive_seed(config.seed, trial);
    const Dataset data = build_scenario(config.scenario, derive_seed(trial_seed, 0));
    const GroundTruth truth{data.labels};

    ClusterConfig cluster;
    cluster.clusters = static_cast<int>(config.scenario.clusters.size());
    cluster.restarts = config.restarts;
    cluster.max_iter = config.max_iter;
    cluster.seed = derive_seed(trial_seed, 1);

    TrialOutcome& out = outcomes[trial];
    out.arif.assign(M, std::vector<double>(F));
    out.jif.assign(M, std::vector<double>(F));
    out.arif_self.assign(M, std::vector<double>(F));
    out.radius.assign(M, std::vector<double>(F));
    out.success.assign(M, std::vector<char>(F));
    for (std::size_t k = 0; k < M; ++k) {
      const auto matrices = metric_matrices(data.series, config.metrics[k], config.scenario.lags,
                                            config.levels, config.radii);
      for (std::size_t f = 0; f < F; ++f) {
        cluster.fuzziness = config.fuzziness[f];
        const SelectedFit fit = fit_select_by_xie_beni(matrices, cluster);
        out.radius[k][f] = matrices[fit.matrix_index].params.radius;
        if (cutoff_mode) {
          out.success[k][f] = cutoff_success(fit.partition.memberships, truth, config.cutoff) ? 1 : 0;
        } else {
          out.arif[k][f] = arif(fit.partition.memberships, truth);
          out.jif[k][f] = jif(fit.partition.memberships, truth);
          out.arif_self[k][f] = arif(fit.partition.memberships, truth, PairSet::WithSelfPairs);
        }
      }
    }
  });

  SimulationReport report;
  report.cutoff_mode = cutoff_mode;
  for (std::size_t k = 0; k < M; ++k) {
    if (cutoff_mode) {
      RateCurve curve;
      curve.metric = config.metrics[k];
      curve.curve.m_values = config.fuzziness;
      for (std::size_t f = 0; f < F; ++f) {
        int hits = 0;
        for (const auto& o : outcomes) hits += o.success[k][f];
        curve.successes.push_back(hits);
        curve.curve.rates.push_back(static_cast<double>(hits) / static_cast<double>(config.trials));
      }
      curve.maximum = *std::max_element(curve.curve.rates.begin(), curve.curve.rates.end());
      curve.area = aufc(curve.curve);
      report.rates.push_back(std::move(curve));
      continue;
    }
    for (std::size_t f = 0; f < F; ++f) {
      IndexCell cell;
      cell.metric = config.metrics[k];
      cell.fuzziness = config.fuzziness[f];
      for (const auto& o : outcomes) {
        cell.arif.push_back(o.arif[k][f]);
        cell.jif.push_back(o.jif[k][f]);
        cell.arif_self.push_back(o.arif_self[k][f]);
        if (cell.metric == MetricKind::CQA) cell.radius.push_back(o.radius[k][f]);
      }
      mean_sd(cell.arif, cell.arif_mean, cell.arif_sd);
      mean_sd(cell.jif, cell.jif_mean, cell.jif_sd);
      cell.arif_self_mean = std::accumulate(cell.arif_self.begin(), cell.arif_self.end(), 0.0) /
                            static_cast<double>(cell.arif_self.size());
      report.indices.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace cqa
