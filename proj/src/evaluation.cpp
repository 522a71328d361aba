#include "cqa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cqa/errors.hpp"

namespace cqa {
namespace {

void check_labelled(const Eigen::MatrixXd& memberships, const GroundTruth& truth) {
  if (static_cast<std::size_t>(memberships.rows()) != truth.size()) {
    throw InvalidInput("membership rows (" + std::to_string(memberships.rows()) +
                       ") do not match ground-truth size (" + std::to_string(truth.size()) + ")");
  }
  for (int label : truth.labels) {
    if (label < 0) throw InvalidInput("fuzzy indices require every series to carry a cluster label");
  }
}

}  // namespace

PairAgreement pair_agreement(const Eigen::MatrixXd& memberships, const GroundTruth& truth, PairSet pairs) {
  check_labelled(memberships, truth);
  const Eigen::Index n = memberships.rows();
  const Eigen::Index C = memberships.cols();
  PairAgreement s;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = pairs == PairSet::Distinct ? i + 1 : i; j < n; ++j) {
      double same = 0.0, different = 0.0;
      for (Eigen::Index c = 0; c < C; ++c) {
        same = std::max(same, std::min(memberships(i, c), memberships(j, c)));
        for (Eigen::Index k = 0; k < C; ++k) {
          if (k != c) different = std::max(different, std::min(memberships(i, c), memberships(j, k)));
        }
      }
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      if (truth.labels[ui] == truth.labels[uj]) {
        s.a += same;
        s.c += different;
      } else {
        s.b += same;
        s.d += different;
      }
    }
  }
  return s;
}

double arif(const Eigen::MatrixXd& memberships, const GroundTruth& truth, PairSet pairs) {
  const PairAgreement s = pair_agreement(memberships, truth, pairs);
  const double total = s.a + s.b + s.c + s.d;
  if (total <= 0.0) return 0.0;
  const double expected = (s.a + s.b) * (s.a + s.c) / total;
  const double maximum = 0.5 * ((s.a + s.b) + (s.a + s.c));
  const double denom = maximum - expected;
  if (std::fabs(denom) <= 1e-15 * total) return (s.b + s.c) <= 1e-15 * total ? 1.0 : 0.0;
  return (s.a - expected) / denom;
}

double jif(const Eigen::MatrixXd& memberships, const GroundTruth& truth, PairSet pairs) {
  const PairAgreement s = pair_agreement(memberships, truth, pairs);
  const double denom = s.a + s.b + s.c;
  return denom > 0.0 ? s.a / denom : 0.0;
}

bool cutoff_success(const Eigen::MatrixXd& memberships, const GroundTruth& truth, double cutoff) {
  if (static_cast<std::size_t>(memberships.rows()) != truth.size()) {
    throw InvalidInput("membership rows do not match ground-truth size");
  }
  if (memberships.cols() != 2) throw InvalidInput("cutoff classification requires exactly two clusters");
  std::set<int> groups;
  int isolated = 0;
  for (int label : truth.labels) {
    if (label < 0) {
      ++isolated;
    } else {
      groups.insert(label);
    }
  }
  if (groups.size() != 2 || isolated != 1) {
    throw InvalidInput("cutoff classification requires two labelled groups and one isolated series");
  }

  // Column each group must occupy, fixed by its first member (-2 until seen).
  const int first_group = *groups.begin();
  int first_column = -2, second_column = -2;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int label = truth.labels[i];
    if (label < 0) {
      if (!(memberships(row, 0) < cutoff && memberships(row, 1) < cutoff)) return false;
      continue;
    }
    int column = -1;
    if (memberships(row, 0) > cutoff) column = 0;
    if (memberships(row, 1) > cutoff) column = 1;
    if (column < 0) return false;
    int& expected = label == first_group ? first_column : second_column;
    if (expected == -2) expected = column;
    if (expected != column) return false;
  }
  return first_column != second_column;
}

double aufc(const FuzzinessCurve& curve) {
  if (curve.m_values.size() != curve.rates.size()) {
    throw InvalidInput("fuzziness curve needs one rate per m value");
  }
  if (curve.m_values.size() < 2) throw InvalidInput("fuzziness curve needs at least two points");
  double area = 0.0;
  for (std::size_t k = 1; k < curve.m_values.size(); ++k) {
    const double width = curve.m_values[k] - curve.m_values[k - 1];
    if (!(width > 0.0)) throw InvalidInput("fuzziness curve m values must be strictly increasing");
    area += 0.5 * width * (curve.rates[k] + curve.rates[k - 1]);
  }
  return area;
}

std::vector<double> fuzziness_grid(double lower, double upper, double step) {
  if (!(step > 0.0) || !(upper > lower)) throw InvalidInput("fuzziness grid needs step > 0 and upper > lower");
  std::vector<double> grid;
  for (int k = 1;; ++k) {
    const double m = lower + k * step;
    if (m > upper + 1e-9) break;
    grid.push_back(std::round(m * 1e9) / 1e9);
  }
  return grid;
}

}  // namespace cqa
