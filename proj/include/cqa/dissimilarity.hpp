#pragma once

// Feature-based dissimilarities between circular series and assembly of the
// pairwise matrices consumed by clustering and scaling.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cqa/circular.hpp"
#include "cqa/dependence.hpp"

namespace cqa {

enum class MetricKind { CQA, FL, JS, QA };

std::string_view to_string(MetricKind kind);
MetricKind metric_from_string(std::string_view name);

/// Feature grid shared by every series in a matrix. `radius` is used by CQA only;
/// `levels` by CQA and QA.
struct MetricParams {
  MetricKind kind = MetricKind::CQA;
  std::vector<int> lags{1};
  std::vector<double> levels{0.1, 0.5, 0.9};
  double radius = 1.0;
};

struct DissimilarityMatrix {
  Eigen::MatrixXd values;
  MetricParams params;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

/// (1/(4 L P^2)) * sum of squared CQA differences; lies in [0, 1].
double d_cqa(const CQAFeatures& a, const CQAFeatures& b);
/// (1/(4 L)) * sum of squared Fisher-Lee autocorrelation differences.
double d_fl(const CircularAcfFeatures& a, const CircularAcfFeatures& b);
/// (1/(4 L)) * sum of squared Jammalamadaka-Sarma autocorrelation differences.
double d_js(const CircularAcfFeatures& a, const CircularAcfFeatures& b);
/// (1/(4 L P^2)) * sum of squared QA differences; at most 1/16.
double d_qa(const QAFeatures& a, const QAFeatures& b);

/// Called with the series index each time features are extracted. May be
/// invoked concurrently when threads > 1.
using ExtractionHook = std::function<void(std::size_t)>;

/// Builds the symmetric matrix of pairwise distances. Features are extracted
/// once per series; cells are filled for i < j and mirrored. Errors from
/// feature extraction are rethrown with the offending series index.
DissimilarityMatrix pairwise_matrix(std::span<const CircularSeries> dataset,
                                    const MetricParams& params, unsigned threads = 1,
                                    const ExtractionHook& hook = {});

/// CQA matrices for several radii, reusing one quantile pass per series.
std::vector<DissimilarityMatrix> cqa_matrices(std::span<const CircularSeries> dataset,
                                              std::span<const int> lags,
                                              std::span<const double> levels,
                                              std::span<const double> radii, unsigned threads = 1);

}  // namespace cqa
