#pragma once

// Metric two-dimensional scaling of a dissimilarity matrix by stress majorization.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cqa/dissimilarity.hpp"

namespace cqa {

struct Embedding2D {
  Eigen::MatrixX2d points;  // row i holds (a_i, b_i)
  double stress = 0.0;
  double r_squared = 1.0;  // 1 - stress^2
  int iterations = 0;
  std::vector<double> stress_history;  // initial configuration first
};

struct MdsOptions {
  std::uint64_t seed = 0;  // random start, used only if the classical start is degenerate
  int max_iter = 300;
  double tol = 1e-9;  // relative stress change
};

/// sqrt( sum_{i!=j} (||p_i - p_j|| - D_ij)^2 / sum_{i!=j} D_ij^2 ). An all-zero
/// D gives 0 for coincident points and +infinity otherwise.
double stress(const Eigen::MatrixXd& dist, const Eigen::MatrixX2d& points);

/// Classical (Torgerson) scaling onto the two leading eigenvectors.
Eigen::MatrixX2d classical_mds(const Eigen::MatrixXd& dist);

/// SMACOF iterations with unit weights from the classical solution. Requires
/// n >= 3 and a symmetric matrix with zero diagonal.
Embedding2D mds_2d(const Eigen::MatrixXd& dist, const MdsOptions& options = {});
Embedding2D mds_2d(const DissimilarityMatrix& dist, const MdsOptions& options = {});

}  // namespace cqa
