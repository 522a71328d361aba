#pragma once

// External validation of fuzzy partitions against a hard ground truth.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cqa {

/// Hard labels; kIsolatedLabel (-1) marks a series that belongs to no cluster.
struct GroundTruth {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

struct FuzzinessCurve {
  std::vector<double> m_values;  // strictly increasing
  std::vector<double> rates;     // in [0, 1]
};

/// Fuzzy pair-counting sums. For each unordered pair, the same-cluster strength
/// of U is max_c min(u_ic, u_jc) and the different-cluster strength is
/// max_{c != c'} min(u_ic, u_jc'); the truth contributes 0/1 indicators.
struct PairAgreement {
  double a = 0.0;  // same in U, same in truth
  double b = 0.0;  // same in U, different in truth
  double c = 0.0;  // different in U, same in truth
  double d = 0.0;  // different in U, different in truth
};

enum class PairSet {
  Distinct,       // unordered pairs i < j; reduces to the crisp indices
  WithSelfPairs,  // also counts each series paired with itself
};

PairAgreement pair_agreement(const Eigen::MatrixXd& memberships, const GroundTruth& truth,
                             PairSet pairs = PairSet::Distinct);

/// Fuzzy adjusted Rand index. Throws InvalidInput on a size mismatch or an
/// isolated label.
double arif(const Eigen::MatrixXd& memberships, const GroundTruth& truth, PairSet pairs = PairSet::Distinct);

/// Fuzzy Jaccard index a / (a + b + c); 0 when the denominator vanishes.
double jif(const Eigen::MatrixXd& memberships, const GroundTruth& truth, PairSet pairs = PairSet::Distinct);

/// True when the partition has two columns, the two labelled groups exceed
/// `cutoff` in different columns, and the single isolated series stays below
/// `cutoff` in both.
bool cutoff_success(const Eigen::MatrixXd& memberships, const GroundTruth& truth, double cutoff = 0.7);

/// Trapezoidal area under the curve.
double aufc(const FuzzinessCurve& curve);

/// lower + step, lower + 2 step, ... up to and including `upper`: the grid on
/// the half-open interval (lower, upper].
std::vector<double> fuzziness_grid(double lower, double upper, double step);

}  // namespace cqa
