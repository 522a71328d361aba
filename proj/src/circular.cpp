#include "cqa/circular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cqa/errors.hpp"

namespace cqa {

double normalize_angle(double x) {
  if (!std::isfinite(x)) throw InvalidInput("normalize_angle: non-finite input");
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double geodesic_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return std::numbers::pi - std::fabs(std::numbers::pi - d);
}

CircularSeries::CircularSeries(std::vector<double> radians) : angles_(std::move(radians)) {
  for (double& a : angles_) a = normalize_angle(a);
}

CircularSeries CircularSeries::rotated(double delta) const {
  std::vector<double> out(angles_.begin(), angles_.end());
  for (double& a : out) a += delta;
  return CircularSeries(std::move(out));
}

double mean_circular_deviation(const CircularSeries& series, double mu) {
  if (series.empty()) throw InvalidInput("mean_circular_deviation: empty series");
  double total = 0.0;
  for (double theta : series.values()) total += geodesic_distance(theta, mu);
  return total / static_cast<double>(series.size());
}

Angle circular_median(const CircularSeries& series) {
  const std::size_t n = series.size();
  if (n == 0) throw InvalidInput("circular_median: empty series");

  std::vector<double> sorted(series.values().begin(), series.values().end());
  std::sort(sorted.begin(), sorted.end());

  // Doubled sample on [0, 4*pi) so that the half-turn ahead of every
  // candidate is a contiguous window; prefix sums give each candidate's total
  // deviation in O(log T).
  std::vector<double> ext(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    ext[j] = sorted[j];
    ext[j + n] = sorted[j] + kTwoPi;
  }
  std::vector<double> prefix(2 * n + 1, 0.0);
  std::partial_sum(ext.begin(), ext.end(), prefix.begin() + 1);

  double best_total = std::numeric_limits<double>::infinity();
  double best_angle = sorted.front();
  for (std::size_t k = 0; k < n; ++k) {
    const double mu = sorted[k];
    const auto first = ext.begin() + static_cast<std::ptrdiff_t>(k);
    const auto last = first + static_cast<std::ptrdiff_t>(n);
    const auto split = static_cast<std::size_t>(
        std::upper_bound(first, last, mu + std::numbers::pi) - ext.begin());
    const double ahead = (prefix[split] - prefix[k]) - static_cast<double>(split - k) * mu;
    const double behind = static_cast<double>(k + n - split) * (kTwoPi + mu) -
                          (prefix[k + n] - prefix[split]);
    const double total = ahead + behind;
    if (k == 0 || total < best_total - 1e-12 * (1.0 + std::fabs(best_total))) {
      best_total = total;
      best_angle = mu;
    }
  }
  return Angle(best_angle);
}

CircularQuantiles::CircularQuantiles(const CircularSeries& series)
    : median_(circular_median(series)) {
  const double mu = median_.radians();
  unwrapped_.reserve(series.size());
  for (double theta : series.values()) {
    unwrapped_.push_back(mu - std::numbers::pi + normalize_angle(theta - mu + std::numbers::pi));
  }
  std::sort(unwrapped_.begin(), unwrapped_.end());
}

Angle CircularQuantiles::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("circular_quantile: level outside [0, 1]");
  const auto n = unwrapped_.size();
  // The small offset keeps products such as 0.7 * 10 = 7.000000000000001
  // from jumping to the next order statistic.
  auto index = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  index = std::clamp<std::size_t>(index, 1, n);
  return Angle(unwrapped_[index - 1]);
}

Angle circular_quantile(const CircularSeries& series, double p) {
  if (series.empty()) throw InvalidInput("circular_quantile: empty series");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("circular_quantile: level outside [0, 1]");
  return CircularQuantiles(series).quantile(p);
}

Arc make_arc(Angle center, double radius) {
  if (!(radius >= 0.0 && radius < std::numbers::pi)) {
    throw InvalidInput("arc radius must lie in [0, pi), got " + std::to_string(radius));
  }
  Arc arc;
  arc.center = center.radians();
  arc.radius = radius;
  const double lo = arc.center - radius;
  const double hi = arc.center + radius;
  // Exactly touching 0 from above is still a plain interval [0, 2r]; only
  // crossing 0 or reaching 2*pi needs the complement form.
  arc.wraps = lo < 0.0 || hi >= kTwoPi;
  const double a = normalize_angle(lo);
  const double b = normalize_angle(hi);
  arc.lower = std::min(a, b);
  arc.upper = std::max(a, b);
  return arc;
}

Arc arc_from_quantile(const CircularSeries& series, double p, double radius) {
  if (!(radius >= 0.0 && radius < std::numbers::pi)) {
    throw InvalidInput("arc radius must lie in [0, pi)");
  }
  return make_arc(circular_quantile(series, p), radius);
}

}  // namespace cqa
