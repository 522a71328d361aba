#pragma once

// Circular statistics primitives: angles, circular series, the sample
// circular median, circular quantiles anchored at the median, and arcs.

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace cqa {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces x modulo 2*pi into [0, 2*pi). Throws InvalidInput for NaN/inf.
double normalize_angle(double x);

/// An angle in radians, always held in [0, 2*pi).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(normalize_angle(radians)) {}

  constexpr double radians() const { return value_; }

  friend Angle operator+(Angle a, Angle b) { return Angle(a.value_ + b.value_); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.value_ - b.value_); }
  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

/// Shortest distance along the unit circle, in [0, pi].
double geodesic_distance(double a, double b);

/// An ordered realization of a circular process. Values are normalized on
/// construction so every element lies in [0, 2*pi).
class CircularSeries {
 public:
  CircularSeries() = default;
  explicit CircularSeries(std::vector<double> radians);

  std::size_t size() const { return angles_.size(); }
  bool empty() const { return angles_.empty(); }
  double operator[](std::size_t i) const { return angles_[i]; }
  std::span<const double> values() const { return angles_; }

  /// Returns the series rotated by delta (mod 2*pi).
  CircularSeries rotated(double delta) const;

 private:
  std::vector<double> angles_;
};

/// Sample circular median: the data point minimizing the mean circular
/// deviation sum_i (pi - |pi - |theta_i - mu||) / T. Ties go to the smallest
/// angle. O(T log T).
Angle circular_median(const CircularSeries& series);

/// Mean circular deviation of the sample about mu.
double mean_circular_deviation(const CircularSeries& series, double mu);

/// Empirical circular quantiles. The sample is unwrapped into
/// [median - pi, median + pi) and the p-quantile is the order statistic with
/// 1-based index ceil(p*T) (index 1 when p = 0), reduced back to [0, 2*pi).
/// Construct once and query many levels.
class CircularQuantiles {
 public:
  explicit CircularQuantiles(const CircularSeries& series);

  Angle median() const { return median_; }
  Angle quantile(double p) const;

  /// Sorted unwrapped sample, all within [median - pi, median + pi).
  std::span<const double> unwrapped() const { return unwrapped_; }

 private:
  Angle median_;
  std::vector<double> unwrapped_;
};

Angle circular_quantile(const CircularSeries& series, double p);

/// Arc of given center and radius. When the naive interval
/// [center - radius, center + radius] crosses the 0/2*pi cut the arc is stored
/// as the closed complement of the open interval (lower, upper).
struct Arc {
  double center = 0.0;
  double radius = 0.0;
  bool wraps = false;
  double lower = 0.0;  // min of (center -/+ radius) mod 2*pi
  double upper = 0.0;  // max of (center -/+ radius) mod 2*pi

  bool contains(double theta) const {
    return wraps ? !(lower < theta && theta < upper)
                 : (lower <= theta && theta <= upper);
  }
};

/// Builds the arc of the given center and radius in [0, pi).
Arc make_arc(Angle center, double radius);

/// Arc centered at the empirical p-quantile of the series.
Arc arc_from_quantile(const CircularSeries& series, double p, double radius);

inline bool arc_contains(const Arc& arc, Angle theta) { return arc.contains(theta.radians()); }

}  // namespace cqa
