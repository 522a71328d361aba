#include "cqa/embedding.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "cqa/errors.hpp"
#include "cqa/random.hpp"

namespace cqa {
namespace {

void check_dissimilarity(const Eigen::MatrixXd& dist) {
  if (dist.rows() != dist.cols()) throw InvalidInput("dissimilarity matrix must be square");
  if (dist.rows() < 3) throw InvalidInput("two-dimensional scaling needs at least 3 objects");
  if (!dist.allFinite()) throw InvalidInput("dissimilarity matrix has non-finite entries");
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    if (dist(i, i) != 0.0) throw InvalidInput("dissimilarity matrix must have a zero diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::fabs(dist(i, j) - dist(j, i)) > 1e-12 * (1.0 + std::fabs(dist(i, j)))) {
        throw InvalidInput("dissimilarity matrix must be symmetric");
      }
      if (dist(i, j) < 0.0) throw InvalidInput("dissimilarities must be non-negative");
    }
  }
}

Eigen::MatrixXd embedded_distances(const Eigen::MatrixX2d& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      out(i, j) = out(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return out;
}

}  // namespace

double stress(const Eigen::MatrixXd& dist, const Eigen::MatrixX2d& points) {
  if (dist.rows() != dist.cols() || dist.rows() != points.rows()) {
    throw InvalidInput("stress: dissimilarity and point counts differ");
  }
  const Eigen::MatrixXd fitted = embedded_distances(points);
  const double mismatch = (fitted - dist).squaredNorm();
  const double scale = dist.squaredNorm();
  if (scale <= 0.0) return mismatch <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(mismatch / scale);
}

Eigen::MatrixX2d classical_mds(const Eigen::MatrixXd& dist) {
  const Eigen::Index n = dist.rows();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd gram = -0.5 * centering * dist.array().square().matrix() * centering;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  // Eigenvalues are ascending.
  Eigen::MatrixX2d out(n, 2);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = n - 1 - k;
    out.col(k) = solver.eigenvectors().col(col) * std::sqrt(std::max(solver.eigenvalues()(col), 0.0));
  }
  return out;
}

Embedding2D mds_2d(const Eigen::MatrixXd& dist, const MdsOptions& options) {
  check_dissimilarity(dist);
  const Eigen::Index n = dist.rows();
  Embedding2D out;
  if (dist.squaredNorm() == 0.0) {
    out.points = Eigen::MatrixX2d::Zero(n, 2);
    out.stress_history.push_back(0.0);
    return out;
  }

  Eigen::MatrixX2d x = classical_mds(dist);
  if (x.squaredNorm() == 0.0) {
    Rng rng(options.seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, 0) = normal(rng);
      x(i, 1) = normal(rng);
    }
  }

  double current = stress(dist, x);
  out.stress_history.push_back(current);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    // Guttman transform: X <- (1/n) B(X) X.
    const Eigen::MatrixXd fitted = embedded_distances(x);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j && fitted(i, j) > 0.0) b(i, j) = -dist(i, j) / fitted(i, j);
      }
      b(i, i) = -b.row(i).sum();
    }
    x = (b * x) / static_cast<double>(n);
    const double next = stress(dist, x);
    out.stress_history.push_back(next);
    ++out.iterations;
    const bool done = current - next <= options.tol * std::max(current, 1e-300);
    current = next;
    if (done) break;
  }
  out.points = x;
  out.stress = current;
  out.r_squared = 1.0 - current * current;
  return out;
}

Embedding2D mds_2d(const DissimilarityMatrix& dist, const MdsOptions& options) {
  return mds_2d(dist.values, options);
}

}  // namespace cqa
