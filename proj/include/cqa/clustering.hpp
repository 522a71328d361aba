#pragma once

// Fuzzy C-medoids on a precomputed dissimilarity matrix, with multi-start,
// the Xie-Beni validity index, lag selection and grid search over (C, m, r).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cqa/circular.hpp"
#include "cqa/dissimilarity.hpp"

namespace cqa {

struct ClusterConfig {
  int clusters = 2;
  double fuzziness = 1.5;
  int max_iter = 100;
  int restarts = 1;
  std::uint64_t seed = 0;
};

struct FuzzyPartition {
  Eigen::MatrixXd memberships;          // n x C, rows sum to 1
  std::vector<std::size_t> medoids;     // C distinct series indices
  double objective = 0.0;               // sum_i sum_c u_ic^m d(i, medoid_c)
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // objective after each membership update

  std::size_t size() const { return static_cast<std::size_t>(memberships.rows()); }
  int clusters() const { return static_cast<int>(memberships.cols()); }
};

/// Membership update for fixed medoids. A series at distance 0 from some
/// medoid is assigned crisply: to its own cluster if it is a medoid, else to
/// the first zero-distance cluster.
Eigen::MatrixXd update_memberships(const Eigen::MatrixXd& dist, std::span<const std::size_t> medoids,
                                   double fuzziness);

/// Medoid update for fixed memberships: per cluster, the index minimizing
/// sum_i u_ic^m d(i, j), ties to the smallest j. Clusters are visited in order
/// and a cluster whose best index is already taken gets its best free index.
std::vector<std::size_t> update_medoids(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& memberships,
                                        double fuzziness);

double fcm_objective(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& memberships,
                     std::span<const std::size_t> medoids, double fuzziness);

/// Single run from an explicit starting medoid set. Iterates until the medoid
/// set repeats or max_iter updates have been made.
FuzzyPartition run_fcmedoids_from(const Eigen::MatrixXd& dist, std::vector<std::size_t> medoids,
                                  const ClusterConfig& config);

/// Single run from medoids drawn uniformly without replacement using config.seed.
FuzzyPartition run_fcmedoids(const DissimilarityMatrix& dist, const ClusterConfig& config);
FuzzyPartition run_fcmedoids(const Eigen::MatrixXd& dist, const ClusterConfig& config);

/// Seed used by restart k of run_multistart.
std::uint64_t restart_seed(std::uint64_t master, std::size_t restart);

/// Best-objective partition over config.restarts independent runs; ties go to
/// the lowest restart index.
FuzzyPartition run_multistart(const DissimilarityMatrix& dist, const ClusterConfig& config,
                              unsigned threads = 1);
FuzzyPartition run_multistart(const Eigen::MatrixXd& dist, const ClusterConfig& config,
                              unsigned threads = 1);

inline constexpr double kInfiniteIndex = std::numeric_limits<double>::infinity();

/// Xie-Beni index adapted to medoids:
///   sum_i sum_c u_ic^m d(i, medoid_c) / (n * min_{c != c'} d(medoid_c, medoid_c')).
/// Returns kInfiniteIndex when two medoids coincide in distance.
double xie_beni(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& memberships,
                std::span<const std::size_t> medoids, double fuzziness);
double xie_beni(const Eigen::MatrixXd& dist, const FuzzyPartition& partition, double fuzziness);

struct LagTestConfig {
  int max_lag = 5;
  double alpha = 0.05;
  int permutations = 200;
  std::uint64_t seed = 0;
};

/// Per-series permutation test of zero Jammalamadaka-Sarma autocorrelation at
/// each lag; a lag is kept when more than half of the series reject. Falls back
/// to {1} when no lag is kept.
std::vector<int> select_lags(std::span<const CircularSeries> dataset, const LagTestConfig& config);

/// Two-sided permutation p-value of |rho_js(lag)| for one series.
double js_permutation_pvalue(const CircularSeries& series, int lag, int permutations,
                             std::uint64_t seed);

struct HyperGrid {
  std::vector<int> clusters;
  std::vector<double> fuzziness;
  std::vector<double> radii;
};

struct HyperCandidate {
  int clusters = 0;
  double fuzziness = 0.0;
  double radius = 0.0;
  double xie_beni = kInfiniteIndex;
};

struct HyperSelection {
  HyperCandidate best;
  FuzzyPartition partition;
  std::vector<HyperCandidate> evaluated;  // grid order: C, then m, then r
};

/// Runs run_multistart for every (C, m, r) of the grid on the CQA matrix of
/// radius r and returns the tuple with the smallest Xie-Beni index (first in
/// grid order on ties). `base` supplies restarts, max_iter and seed.
HyperSelection select_hyperparameters(std::span<const CircularSeries> dataset, const HyperGrid& grid,
                                      std::span<const int> lags, std::span<const double> levels,
                                      const ClusterConfig& base, unsigned threads = 1);

/// Same search over precomputed matrices, one per radius in grid.radii.
HyperSelection select_hyperparameters(std::span<const DissimilarityMatrix> matrices,
                                      const HyperGrid& grid, const ClusterConfig& base,
                                      unsigned threads = 1);

}  // namespace cqa
