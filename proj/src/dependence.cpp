#include "cqa/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cqa/errors.hpp"

namespace cqa {
namespace {

void check_lag(std::size_t length, int lag, std::size_t min_pairs = 1) {
  if (lag < 1 || static_cast<std::size_t>(lag) + min_pairs > length) {
    throw InvalidLag("lag " + std::to_string(lag) + " invalid for series of length " +
                     std::to_string(length));
  }
}

void check_radius(double r) {
  if (!(r >= 0.0 && r < std::numbers::pi)) throw InvalidInput("radius must lie in [0, pi)");
}

std::vector<char> arc_indicators(std::span<const double> values, const Arc& arc) {
  std::vector<char> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double theta) { return static_cast<char>(arc.contains(theta)); });
  return out;
}

std::size_t count_ones(const std::vector<char>& ind) {
  return static_cast<std::size_t>(std::count(ind.begin(), ind.end(), char{1}));
}

std::size_t count_joint(const std::vector<char>& a, const std::vector<char>& b, std::size_t lag) {
  std::size_t hits = 0;
  for (std::size_t t = 0; t + lag < a.size(); ++t) hits += static_cast<std::size_t>(a[t] & b[t + lag]);
  return hits;
}

// Normalized indicator covariance from raw counts.
double indicator_correlation(std::size_t count_a, std::size_t count_b, std::size_t joint,
                             std::size_t length, std::size_t lag) {
  if (count_a == 0 || count_a == length || count_b == 0 || count_b == length) return 0.0;
  const double n = static_cast<double>(length);
  const double pa = static_cast<double>(count_a) / n;
  const double pb = static_cast<double>(count_b) / n;
  const double pj = static_cast<double>(joint) / static_cast<double>(length - lag);
  const double rho = (pj - pa * pb) / std::sqrt(pa * pb * (1.0 - pa) * (1.0 - pb));
  return std::clamp(rho, -1.0, 1.0);
}

}  // namespace

double arc_indicator_prob(const CircularSeries& series, double p, double w) {
  if (series.empty()) throw InvalidInput("arc_indicator_prob: empty series");
  const Arc arc = arc_from_quantile(series, p, w);
  return static_cast<double>(count_ones(arc_indicators(series.values(), arc))) /
         static_cast<double>(series.size());
}

double joint_arc_indicator_prob(const CircularSeries& series, double p, double p_prime, double w,
                                int lag) {
  check_lag(series.size(), lag);
  check_radius(w);
  const CircularQuantiles q(series);
  const auto a = arc_indicators(series.values(), make_arc(q.quantile(p), w));
  const auto b = arc_indicators(series.values(), make_arc(q.quantile(p_prime), w));
  const auto l = static_cast<std::size_t>(lag);
  return static_cast<double>(count_joint(a, b, l)) / static_cast<double>(series.size() - l);
}

double cqa(const CircularSeries& series, double tau, double tau_prime, int lag, double radius) {
  check_lag(series.size(), lag);
  check_radius(radius);
  const CircularQuantiles q(series);
  const auto a = arc_indicators(series.values(), make_arc(q.quantile(tau), radius));
  const auto b = arc_indicators(series.values(), make_arc(q.quantile(tau_prime), radius));
  const auto l = static_cast<std::size_t>(lag);
  return indicator_correlation(count_ones(a), count_ones(b), count_joint(a, b, l), series.size(), l);
}

CqaExtractor::CqaExtractor(const CircularSeries& series)
    : series_(series), quantiles_(series) {}

CQAFeatures CqaExtractor::features(std::span<const int> lags, std::span<const double> levels,
                                   double radius) const {
  check_radius(radius);
  for (int lag : lags) check_lag(series_.size(), lag);

  CQAFeatures out;
  out.lags.assign(lags.begin(), lags.end());
  out.levels.assign(levels.begin(), levels.end());
  out.radius = radius;
  out.values.resize(lags.size() * levels.size() * levels.size());

  std::vector<std::vector<char>> indicators;
  std::vector<std::size_t> counts;
  indicators.reserve(levels.size());
  for (double level : levels) {
    indicators.push_back(arc_indicators(series_.values(), make_arc(quantiles_.quantile(level), radius)));
    counts.push_back(count_ones(indicators.back()));
  }

  for (std::size_t k = 0; k < lags.size(); ++k) {
    const auto l = static_cast<std::size_t>(lags[k]);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (std::size_t j = 0; j < levels.size(); ++j) {
        const std::size_t joint = count_joint(indicators[i], indicators[j], l);
        out.values[out.index(k, i, j)] =
            indicator_correlation(counts[i], counts[j], joint, series_.size(), l);
      }
    }
  }
  return out;
}

CQAFeatures cqa_features(const CircularSeries& series, std::span<const int> lags,
                         std::span<const double> levels, double radius) {
  if (series.empty()) throw InvalidInput("cqa_features: empty series");
  return CqaExtractor(series).features(lags, levels, radius);
}

double rho_fl(const CircularSeries& series, int lag) {
  check_lag(series.size(), lag, 2);
  const auto l = static_cast<std::size_t>(lag);
  const std::size_t n = series.size() - l;

  // sum_{i<j} sin(x_i - x_j) sin(y_i - y_j) = S_ss * S_cc - S_sc * S_cs with
  // S_ss = sum sin x sin y etc.; the normalizers are the same identity with y = x.
  double xy_ss = 0, xy_cc = 0, xy_sc = 0, xy_cs = 0;
  double xx_ss = 0, xx_cc = 0, xx_sc = 0;
  double yy_ss = 0, yy_cc = 0, yy_sc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sx = std::sin(series[i]), cx = std::cos(series[i]);
    const double sy = std::sin(series[i + l]), cy = std::cos(series[i + l]);
    xy_ss += sx * sy;
    xy_cc += cx * cy;
    xy_sc += sx * cy;
    xy_cs += cx * sy;
    xx_ss += sx * sx;
    xx_cc += cx * cx;
    xx_sc += sx * cx;
    yy_ss += sy * sy;
    yy_cc += cy * cy;
    yy_sc += sy * cy;
  }
  const double num = xy_ss * xy_cc - xy_sc * xy_cs;
  const double den_x = xx_ss * xx_cc - xx_sc * xx_sc;
  const double den_y = yy_ss * yy_cc - yy_sc * yy_sc;
  // The pair sums are bounded by n^2 / 4; anything this small is cancellation
  // noise from a (near) constant window.
  const double floor = 1e-12 * static_cast<double>(n) * static_cast<double>(n);
  if (den_x <= floor || den_y <= floor) return 0.0;
  return std::clamp(num / std::sqrt(den_x * den_y), -1.0, 1.0);
}

Angle circular_mean(const CircularSeries& series) {
  if (series.empty()) throw InvalidInput("circular_mean: empty series");
  double s = 0.0, c = 0.0;
  for (double theta : series.values()) {
    s += std::sin(theta);
    c += std::cos(theta);
  }
  return Angle(std::atan2(s, c));
}

double rho_js(const CircularSeries& series, int lag) {
  check_lag(series.size(), lag, 2);
  const auto l = static_cast<std::size_t>(lag);
  const std::size_t n = series.size() - l;
  const double mean = circular_mean(series).radians();
  double num = 0.0, den_x = 0.0, den_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::sin(series[i] - mean);
    const double b = std::sin(series[i + l] - mean);
    num += a * b;
    den_x += a * a;
    den_y += b * b;
  }
  const double floor = 1e-20 * static_cast<double>(n);
  if (den_x <= floor || den_y <= floor) return 0.0;
  return std::clamp(num / std::sqrt(den_x * den_y), -1.0, 1.0);
}

CircularAcfFeatures acf_features(const CircularSeries& series, std::span<const int> lags,
                                 AcfKind kind) {
  CircularAcfFeatures out;
  out.kind = kind;
  out.lags.assign(lags.begin(), lags.end());
  out.values.reserve(lags.size());
  for (int lag : lags) {
    out.values.push_back(kind == AcfKind::FisherLee ? rho_fl(series, lag) : rho_js(series, lag));
  }
  return out;
}

double empirical_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw InvalidInput("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("empirical_quantile: level outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  auto index = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size()) - 1e-9));
  index = std::clamp<std::size_t>(index, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(index - 1), sorted.end());
  return sorted[index - 1];
}

namespace {

std::vector<char> below_indicators(std::span<const double> values, double threshold) {
  std::vector<char> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double y) { return static_cast<char>(y <= threshold); });
  return out;
}

double indicator_covariance(const std::vector<char>& a, const std::vector<char>& b, std::size_t lag) {
  const double n = static_cast<double>(a.size());
  const double pa = static_cast<double>(count_ones(a)) / n;
  const double pb = static_cast<double>(count_ones(b)) / n;
  const double pj = static_cast<double>(count_joint(a, b, lag)) / static_cast<double>(a.size() - lag);
  return pj - pa * pb;
}

}  // namespace

double qa(std::span<const double> series, double tau, double tau_prime, int lag) {
  check_lag(series.size(), lag);
  const auto a = below_indicators(series, empirical_quantile(series, tau));
  const auto b = below_indicators(series, empirical_quantile(series, tau_prime));
  return indicator_covariance(a, b, static_cast<std::size_t>(lag));
}

QAFeatures qa_features(std::span<const double> series, std::span<const int> lags,
                       std::span<const double> levels) {
  for (int lag : lags) check_lag(series.size(), lag);
  QAFeatures out;
  out.lags.assign(lags.begin(), lags.end());
  out.levels.assign(levels.begin(), levels.end());
  out.values.resize(lags.size() * levels.size() * levels.size());

  std::vector<std::vector<char>> indicators;
  for (double level : levels) indicators.push_back(below_indicators(series, empirical_quantile(series, level)));
  for (std::size_t k = 0; k < lags.size(); ++k) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (std::size_t j = 0; j < levels.size(); ++j) {
        out.values[out.index(k, i, j)] =
            indicator_covariance(indicators[i], indicators[j], static_cast<std::size_t>(lags[k]));
      }
    }
  }
  return out;
}

}  // namespace cqa
