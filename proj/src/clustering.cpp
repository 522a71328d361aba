#include "cqa/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cqa/errors.hpp"
#include "cqa/parallel.hpp"
#include "cqa/random.hpp"

namespace cqa {
namespace {

void check_config(Eigen::Index n, const ClusterConfig& config) {
  if (config.clusters < 2) throw InvalidConfig("number of clusters must be at least 2");
  if (!(config.fuzziness > 1.0)) throw InvalidConfig("fuzziness must exceed 1");
  if (config.max_iter < 0) throw InvalidConfig("max_iter must be non-negative");
  if (config.restarts < 1) throw InvalidConfig("restarts must be positive");
  if (config.clusters >= n) {
    throw InvalidConfig("number of clusters (" + std::to_string(config.clusters) +
                        ") must be smaller than the number of series (" + std::to_string(n) + ")");
  }
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

Eigen::MatrixXd update_memberships(const Eigen::MatrixXd& dist, std::span<const std::size_t> medoids,
                                   double fuzziness) {
  const Eigen::Index n = dist.rows();
  const auto C = static_cast<Eigen::Index>(medoids.size());
  const double exponent = 1.0 / (fuzziness - 1.0);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, C);
  std::vector<double> logd(static_cast<std::size_t>(C));

  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index crisp = -1;
    for (Eigen::Index c = 0; c < C; ++c) {
      if (static_cast<std::size_t>(i) == medoids[static_cast<std::size_t>(c)]) crisp = c;
    }
    if (crisp < 0) {
      for (Eigen::Index c = 0; c < C; ++c) {
        if (dist(i, idx(medoids[static_cast<std::size_t>(c)])) <= 0.0) {
          crisp = c;
          break;
        }
      }
    }
    if (crisp >= 0) {
      u(i, crisp) = 1.0;
      continue;
    }
    // Ratios in log space: (d_ic / d_ic')^(1/(m-1)) overflows for m near 1.
    for (Eigen::Index c = 0; c < C; ++c) {
      logd[static_cast<std::size_t>(c)] = std::log(dist(i, idx(medoids[static_cast<std::size_t>(c)])));
    }
    double row_sum = 0.0;
    for (Eigen::Index c = 0; c < C; ++c) {
      double denom = 0.0;
      for (Eigen::Index k = 0; k < C; ++k) {
        denom += std::exp((logd[static_cast<std::size_t>(c)] - logd[static_cast<std::size_t>(k)]) * exponent);
      }
      u(i, c) = 1.0 / denom;
      row_sum += u(i, c);
    }
    u.row(i) /= row_sum;
  }
  return u;
}

std::vector<std::size_t> update_medoids(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& memberships,
                                        double fuzziness) {
  const Eigen::Index n = dist.rows();
  const Eigen::Index C = memberships.cols();
  const Eigen::MatrixXd weights = memberships.array().pow(fuzziness).matrix();
  // cost(j, c) = sum_i u_ic^m d(i, j)
  const Eigen::MatrixXd cost = dist.transpose() * weights;

  std::vector<std::size_t> medoids;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  for (Eigen::Index c = 0; c < C; ++c) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || cost(j, c) < cost(best, c)) best = j;
    }
    taken[static_cast<std::size_t>(best)] = 1;
    medoids.push_back(static_cast<std::size_t>(best));
  }
  return medoids;
}

double fcm_objective(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& memberships,
                     std::span<const std::size_t> medoids, double fuzziness) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      total += std::pow(memberships(i, static_cast<Eigen::Index>(c)), fuzziness) * dist(i, idx(medoids[c]));
    }
  }
  return total;
}

FuzzyPartition run_fcmedoids_from(const Eigen::MatrixXd& dist, std::vector<std::size_t> medoids,
                                  const ClusterConfig& config) {
  check_config(dist.rows(), config);
  if (medoids.size() != static_cast<std::size_t>(config.clusters)) {
    throw InvalidConfig("initial medoid count does not match the number of clusters");
  }
  const double m = config.fuzziness;

  FuzzyPartition out;
  out.memberships = update_memberships(dist, medoids, m);
  out.objective = fcm_objective(dist, out.memberships, medoids, m);
  out.objective_trace.push_back(out.objective);
  for (int iter = 0; iter < config.max_iter; ++iter) {
    ++out.iterations;
    std::vector<std::size_t> next = update_medoids(dist, out.memberships, m);
    // Deduplication can in principle pick a worse set than the current one;
    // keeping the current set then preserves the monotone objective.
    const double next_objective = fcm_objective(dist, out.memberships, next, m);
    const double current_objective = fcm_objective(dist, out.memberships, medoids, m);
    if (next_objective > current_objective) next = medoids;

    std::vector<std::size_t> sorted_next = next, sorted_current = medoids;
    std::sort(sorted_next.begin(), sorted_next.end());
    std::sort(sorted_current.begin(), sorted_current.end());
    const bool unchanged = sorted_next == sorted_current;

    medoids = std::move(next);
    out.memberships = update_memberships(dist, medoids, m);
    out.objective_trace.push_back(fcm_objective(dist, out.memberships, medoids, m));
    if (unchanged) {
      out.converged = true;
      break;
    }
  }
  out.medoids = std::move(medoids);
  out.objective = fcm_objective(dist, out.memberships, out.medoids, m);
  return out;
}

FuzzyPartition run_fcmedoids(const Eigen::MatrixXd& dist, const ClusterConfig& config) {
  check_config(dist.rows(), config);
  std::vector<std::size_t> all(static_cast<std::size_t>(dist.rows()));
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng rng(config.seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(config.clusters));
  return run_fcmedoids_from(dist, std::move(all), config);
}

FuzzyPartition run_fcmedoids(const DissimilarityMatrix& dist, const ClusterConfig& config) {
  return run_fcmedoids(dist.values, config);
}

std::uint64_t restart_seed(std::uint64_t master, std::size_t restart) {
  return derive_seed(master, restart);
}

FuzzyPartition run_multistart(const Eigen::MatrixXd& dist, const ClusterConfig& config,
                              unsigned threads) {
  check_config(dist.rows(), config);
  std::vector<FuzzyPartition> runs(static_cast<std::size_t>(config.restarts));
  parallel_for(runs.size(), threads, [&](std::size_t k) {
    ClusterConfig single = config;
    single.seed = restart_seed(config.seed, k);
    runs[k] = run_fcmedoids(dist, single);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].objective < runs[best].objective) best = k;
  }
  return std::move(runs[best]);
}

FuzzyPartition run_multistart(const DissimilarityMatrix& dist, const ClusterConfig& config,
                              unsigned threads) {
  return run_multistart(dist.values, config, threads);
}

double xie_beni(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& memberships,
                std::span<const std::size_t> medoids, double fuzziness) {
  double separation = kInfiniteIndex;
  for (std::size_t a = 0; a < medoids.size(); ++a) {
    for (std::size_t b = a + 1; b < medoids.size(); ++b) {
      separation = std::min(separation, dist(idx(medoids[a]), idx(medoids[b])));
    }
  }
  if (!(separation > 0.0) || std::isinf(separation)) return kInfiniteIndex;
  const double compactness = fcm_objective(dist, memberships, medoids, fuzziness);
  return compactness / (static_cast<double>(dist.rows()) * separation);
}

double xie_beni(const Eigen::MatrixXd& dist, const FuzzyPartition& partition, double fuzziness) {
  return xie_beni(dist, partition.memberships, partition.medoids, fuzziness);
}

double js_permutation_pvalue(const CircularSeries& series, int lag, int permutations,
                             std::uint64_t seed) {
  const double observed = std::fabs(rho_js(series, lag));
  std::vector<double> shuffled(series.values().begin(), series.values().end());
  Rng rng(seed);
  int extreme = 0;
  for (int b = 0; b < permutations; ++b) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (std::fabs(rho_js(CircularSeries(shuffled), lag)) >= observed) ++extreme;
  }
  return (1.0 + extreme) / (1.0 + permutations);
}

std::vector<int> select_lags(std::span<const CircularSeries> dataset, const LagTestConfig& config) {
  if (config.max_lag < 1) throw InvalidInput("max_lag must be positive");
  if (config.permutations < 1) throw InvalidInput("permutations must be positive");
  std::vector<int> lags;
  for (int lag = 1; lag <= config.max_lag; ++lag) {
    std::size_t rejections = 0;
    for (std::size_t s = 0; s < dataset.size(); ++s) {
      const auto seed = derive_seed(derive_seed(config.seed, s), static_cast<std::uint64_t>(lag));
      if (js_permutation_pvalue(dataset[s], lag, config.permutations, seed) <= config.alpha) ++rejections;
    }
    if (2 * rejections > dataset.size()) lags.push_back(lag);
  }
  if (lags.empty()) lags.push_back(1);
  return lags;
}

HyperSelection select_hyperparameters(std::span<const DissimilarityMatrix> matrices,
                                      const HyperGrid& grid, const ClusterConfig& base,
                                      unsigned threads) {
  if (grid.clusters.empty() || grid.fuzziness.empty() || grid.radii.empty()) {
    throw InvalidConfig("hyperparameter grid must be nonempty in every dimension");
  }
  if (matrices.size() != grid.radii.size()) {
    throw InvalidConfig("one dissimilarity matrix per radius is required");
  }

  struct Cell {
    HyperCandidate candidate;
    FuzzyPartition partition;
  };
  std::vector<Cell> cells;
  for (int C : grid.clusters) {
    for (double m : grid.fuzziness) {
      for (double r : grid.radii) cells.push_back({{C, m, r, kInfiniteIndex}, {}});
    }
  }
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    Cell& cell = cells[k];
    const std::size_t r_index = k % grid.radii.size();
    ClusterConfig config = base;
    config.clusters = cell.candidate.clusters;
    config.fuzziness = cell.candidate.fuzziness;
    cell.partition = run_multistart(matrices[r_index].values, config);
    cell.candidate.xie_beni = xie_beni(matrices[r_index].values, cell.partition, config.fuzziness);
  });

  HyperSelection out;
  std::size_t best = 0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out.evaluated.push_back(cells[k].candidate);
    if (cells[k].candidate.xie_beni < cells[best].candidate.xie_beni) best = k;
  }
  out.best = cells[best].candidate;
  out.partition = std::move(cells[best].partition);
  return out;
}

HyperSelection select_hyperparameters(std::span<const CircularSeries> dataset, const HyperGrid& grid,
                                      std::span<const int> lags, std::span<const double> levels,
                                      const ClusterConfig& base, unsigned threads) {
  const auto matrices = cqa_matrices(dataset, lags, levels, grid.radii, threads);
  return select_hyperparameters(matrices, grid, base, threads);
}

}  // namespace cqa
