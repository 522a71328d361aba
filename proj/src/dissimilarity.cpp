#include "cqa/dissimilarity.hpp"

#include <cctype>
#include <string>
#include <variant>

#include "cqa/errors.hpp"
#include "cqa/parallel.hpp"

namespace cqa {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::CQA: return "CQA";
    case MetricKind::FL: return "FL";
    case MetricKind::JS: return "JS";
    case MetricKind::QA: return "QA";
  }
  return "?";
}

MetricKind metric_from_string(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "CQA") return MetricKind::CQA;
  if (upper == "FL") return MetricKind::FL;
  if (upper == "JS") return MetricKind::JS;
  if (upper == "QA") return MetricKind::QA;
  throw InvalidInput("unknown metric '" + std::string(name) + "'");
}

namespace {

double mean_squared_gap(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / (4.0 * static_cast<double>(a.size()));
}

void require_same_grid(const LagLevelTensor& a, const LagLevelTensor& b) {
  if (a.lags != b.lags || a.levels != b.levels || a.values.size() != b.values.size()) {
    throw IncompatibleFeatures("feature tensors use different lags or levels");
  }
  if (a.values.empty()) throw IncompatibleFeatures("empty feature tensor");
}

double acf_distance(const CircularAcfFeatures& a, const CircularAcfFeatures& b, AcfKind kind) {
  if (a.kind != kind || b.kind != kind) throw IncompatibleFeatures("autocorrelation kind mismatch");
  if (a.lags != b.lags || a.values.size() != b.values.size() || a.values.empty()) {
    throw IncompatibleFeatures("autocorrelation features use different lags");
  }
  return mean_squared_gap(a.values, b.values);
}

}  // namespace

double d_cqa(const CQAFeatures& a, const CQAFeatures& b) {
  require_same_grid(a, b);
  if (a.radius != b.radius) throw IncompatibleFeatures("CQA features use different radii");
  return mean_squared_gap(a.values, b.values);
}

double d_fl(const CircularAcfFeatures& a, const CircularAcfFeatures& b) {
  return acf_distance(a, b, AcfKind::FisherLee);
}

double d_js(const CircularAcfFeatures& a, const CircularAcfFeatures& b) {
  return acf_distance(a, b, AcfKind::JammalamadakaSarma);
}

double d_qa(const QAFeatures& a, const QAFeatures& b) {
  require_same_grid(a, b);
  return mean_squared_gap(a.values, b.values);
}

namespace {

using AnyFeatures = std::variant<CQAFeatures, CircularAcfFeatures, QAFeatures>;

AnyFeatures extract(const CircularSeries& series, const MetricParams& params) {
  switch (params.kind) {
    case MetricKind::CQA: return cqa_features(series, params.lags, params.levels, params.radius);
    case MetricKind::FL: return acf_features(series, params.lags, AcfKind::FisherLee);
    case MetricKind::JS: return acf_features(series, params.lags, AcfKind::JammalamadakaSarma);
    case MetricKind::QA: return qa_features(series.values(), params.lags, params.levels);
  }
  throw InvalidInput("unknown metric kind");
}

double distance(const AnyFeatures& a, const AnyFeatures& b, MetricKind kind) {
  switch (kind) {
    case MetricKind::CQA: return d_cqa(std::get<CQAFeatures>(a), std::get<CQAFeatures>(b));
    case MetricKind::FL: return d_fl(std::get<CircularAcfFeatures>(a), std::get<CircularAcfFeatures>(b));
    case MetricKind::JS: return d_js(std::get<CircularAcfFeatures>(a), std::get<CircularAcfFeatures>(b));
    case MetricKind::QA: return d_qa(std::get<QAFeatures>(a), std::get<QAFeatures>(b));
  }
  throw InvalidInput("unknown metric kind");
}

template <typename Fn>
void with_series_context(std::size_t index, Fn&& fn) {
  const std::string prefix = "series " + std::to_string(index) + ": ";
  try {
    fn();
  } catch (const InvalidLag& e) {
    throw InvalidLag(prefix + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(prefix + e.what());
  }
}

template <typename Features, typename Distance>
Eigen::MatrixXd fill_matrix(const std::vector<Features>& features, Distance&& dist) {
  const auto n = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      values(i, j) = values(j, i) = dist(features[static_cast<std::size_t>(i)],
                                         features[static_cast<std::size_t>(j)]);
    }
  }
  return values;
}

}  // namespace

DissimilarityMatrix pairwise_matrix(std::span<const CircularSeries> dataset,
                                    const MetricParams& params, unsigned threads,
                                    const ExtractionHook& hook) {
  std::vector<AnyFeatures> features(dataset.size());
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    with_series_context(i, [&] {
      features[i] = extract(dataset[i], params);
      if (hook) hook(i);
    });
  });
  DissimilarityMatrix out;
  out.params = params;
  out.values = fill_matrix(features, [&](const AnyFeatures& a, const AnyFeatures& b) {
    return distance(a, b, params.kind);
  });
  return out;
}

std::vector<DissimilarityMatrix> cqa_matrices(std::span<const CircularSeries> dataset,
                                              std::span<const int> lags,
                                              std::span<const double> levels,
                                              std::span<const double> radii, unsigned threads) {
  // features[s][r]
  std::vector<std::vector<CQAFeatures>> features(dataset.size());
  parallel_for(dataset.size(), threads, [&](std::size_t s) {
    with_series_context(s, [&] {
      const CqaExtractor extractor(dataset[s]);
      features[s].reserve(radii.size());
      for (double r : radii) features[s].push_back(extractor.features(lags, levels, r));
    });
  });

  std::vector<DissimilarityMatrix> out(radii.size());
  for (std::size_t r = 0; r < radii.size(); ++r) {
    std::vector<CQAFeatures> at_radius;
    at_radius.reserve(dataset.size());
    for (auto& per_series : features) at_radius.push_back(std::move(per_series[r]));
    out[r].params = MetricParams{MetricKind::CQA, {lags.begin(), lags.end()},
                                 {levels.begin(), levels.end()}, radii[r]};
    out[r].values = fill_matrix(at_radius, d_cqa);
  }
  return out;
}

}  // namespace cqa
