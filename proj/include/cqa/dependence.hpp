#pragma once

// Serial-dependence features of a single series: circular quantile
// autocorrelation (CQA), the Fisher-Lee and Jammalamadaka-Sarma circular
// autocorrelations, and the real-line quantile autocovariance (QA).

#include <cstddef>
#include <span>
#include <vector>

#include "cqa/circular.hpp"

namespace cqa {

/// Tensor of feature values indexed by (lag k, level i, level j), stored
/// row-major. Shared layout for CQA correlations and QA covariances.
struct LagLevelTensor {
  std::vector<int> lags;
  std::vector<double> levels;
  std::vector<double> values;

  std::size_t index(std::size_t k, std::size_t i, std::size_t j) const {
    const std::size_t p = levels.size();
    return (k * p + i) * p + j;
  }
  double at(std::size_t k, std::size_t i, std::size_t j) const { return values[index(k, i, j)]; }
};

/// CQA values rho(tau_i, tau_j, l_k, r); every entry lies in [-1, 1].
struct CQAFeatures : LagLevelTensor {
  double radius = 0.0;
};

/// Quantile autocovariances phi(tau_i, tau_j, l_k); |entry| <= 1/4.
struct QAFeatures : LagLevelTensor {};

enum class AcfKind { FisherLee, JammalamadakaSarma };

struct CircularAcfFeatures {
  AcfKind kind = AcfKind::FisherLee;
  std::vector<int> lags;
  std::vector<double> values;
};

/// (1/T) * #{t : theta_t in A_hat(p, w)}.
double arc_indicator_prob(const CircularSeries& series, double p, double w);

/// (1/(T-l)) * #{t <= T-l : theta_t in A_hat(p, w) and theta_{t+l} in A_hat(p', w)}.
/// Throws InvalidLag unless 1 <= l < T.
double joint_arc_indicator_prob(const CircularSeries& series, double p, double p_prime, double w,
                                int lag);

/// Sample CQA. Marginal probabilities use 1/T, the joint uses 1/(T-l). A
/// marginal of exactly 0 or 1 gives a vanishing normalizer and the result is 0.
/// The ratio is clamped to [-1, 1]: with unequal normalizations in the joint and
/// marginals it can step outside by O(l/T) on short series.
double cqa(const CircularSeries& series, double tau, double tau_prime, int lag, double radius);

/// Precomputes the circular quantiles of one series so that CQA tensors for
/// many radii can be produced without repeating the median search.
class CqaExtractor {
 public:
  explicit CqaExtractor(const CircularSeries& series);

  CQAFeatures features(std::span<const int> lags, std::span<const double> levels,
                       double radius) const;

 private:
  CircularSeries series_;
  CircularQuantiles quantiles_;
};

CQAFeatures cqa_features(const CircularSeries& series, std::span<const int> lags,
                         std::span<const double> levels, double radius);

/// Fisher-Lee circular autocorrelation at lag l; 0 when a normalizer vanishes.
/// Evaluated in O(T) through the product expansion of sin(a - b).
double rho_fl(const CircularSeries& series, int lag);

/// Jammalamadaka-Sarma circular autocorrelation at lag l, centered at the
/// circular mean of the full realization; 0 when a normalizer vanishes.
double rho_js(const CircularSeries& series, int lag);

/// atan2(sum sin, sum cos), reduced to [0, 2*pi).
Angle circular_mean(const CircularSeries& series);

CircularAcfFeatures acf_features(const CircularSeries& series, std::span<const int> lags,
                                 AcfKind kind);

/// Type-1 empirical quantile of a real sample (order statistic ceil(p*T)).
double empirical_quantile(std::span<const double> values, double p);

/// Sample quantile autocovariance of a real-valued series.
double qa(std::span<const double> series, double tau, double tau_prime, int lag);

QAFeatures qa_features(std::span<const double> series, std::span<const int> lags,
                       std::span<const double> levels);

}  // namespace cqa
