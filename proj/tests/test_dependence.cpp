#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "cqa/dependence.hpp"
#include "cqa/errors.hpp"

using namespace cqa;
using std::numbers::pi;

namespace {

std::vector<double> uniform_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

// Wrapped AR(1) angles: enough serial dependence for nonzero estimates.
std::vector<double> wrapped_ar(std::mt19937_64& rng, std::size_t n, double phi) {
  std::normal_distribution<double> e(0.0, 1.0);
  std::vector<double> x(n);
  double y = 0.0;
  for (double& v : x) {
    y = phi * y + e(rng);
    v = oracle::wrap(y);
  }
  return x;
}

const std::vector<double> kHand10{0.3, 1.1, 5.9, 2.2, 0.8, 4.4, 6.1, 1.7, 3.3, 0.05};
const std::vector<double> kLevels{0.1, 0.5, 0.9};

}  // namespace

TEST_CASE("arc indicator probability examples") {
  const CircularSeries constant(std::vector<double>(10, 1.3));
  CHECK(arc_indicator_prob(constant, 0.5, 0.1) == 1.0);

  std::mt19937_64 rng(1);
  const CircularSeries s(uniform_angles(rng, 50));
  CHECK(arc_indicator_prob(s, 0.3, pi - 1e-9) == 1.0);

  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(kTwoPi * i / 100.0);
  CHECK(arc_indicator_prob(CircularSeries(grid), 0.5, pi / 2) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(arc_indicator_prob(CircularSeries(grid), 0.5, pi / 2) == doctest::Approx(oracle::marginal(grid, 0.5, pi / 2)));
}

TEST_CASE("joint arc probability examples") {
  const CircularSeries constant(std::vector<double>(8, 4.0));
  CHECK(joint_arc_indicator_prob(constant, 0.1, 0.9, 0.2, 3) == 1.0);

  const CircularSeries hand(kHand10);
  CHECK(joint_arc_indicator_prob(hand, 0.5, 0.5, 1.0, 1) == doctest::Approx(oracle::joint(kHand10, 0.5, 0.5, 1.0, 1)));
  const double last = joint_arc_indicator_prob(hand, 0.5, 0.5, 1.0, 9);
  CHECK((last == 0.0 || last == 1.0));

  CHECK_THROWS_AS(joint_arc_indicator_prob(hand, 0.5, 0.5, 1.0, 10), InvalidLag);
  CHECK_THROWS_AS(joint_arc_indicator_prob(hand, 0.5, 0.5, 1.0, 0), InvalidLag);
}

TEST_CASE("every dependence estimator equals its brute-force oracle on short series") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t T = 5 + static_cast<std::size_t>(rep % 26);
    const auto x = rep % 2 ? uniform_angles(rng, T) : wrapped_ar(rng, T, 0.7);
    const CircularSeries s(x);
    const std::vector<double> w(s.values().begin(), s.values().end());
    for (int l = 1; l <= 3 && static_cast<std::size_t>(l) + 2 <= T; ++l) {
      for (double r : {0.3, 1.0, 2.5}) {
        for (double p : kLevels) {
          CHECK(arc_indicator_prob(s, p, r) == doctest::Approx(oracle::marginal(w, p, r)).epsilon(1e-12));
          for (double pp : kLevels) {
            CHECK(joint_arc_indicator_prob(s, p, pp, r, l) ==
                  doctest::Approx(oracle::joint(w, p, pp, r, l)).epsilon(1e-12));
            CHECK(cqa::cqa(s, p, pp, l, r) == doctest::Approx(oracle::cqa(w, p, pp, l, r)).epsilon(1e-12));
            CHECK(qa(x, p, pp, l) == doctest::Approx(oracle::quantile_autocov(x, p, pp, l)).epsilon(1e-12));
          }
        }
      }
      CHECK(rho_fl(s, l) == doctest::Approx(oracle::fisher_lee(w, l)).epsilon(1e-12));
      CHECK(rho_js(s, l) == doctest::Approx(oracle::jammalamadaka_sarma(w, l)).epsilon(1e-12));
    }
  }
}

TEST_CASE("hand series spot values") {
  const CircularSeries hand(kHand10);
  CHECK(cqa::cqa(hand, 0.5, 0.5, 1, 1.0) == doctest::Approx(oracle::cqa(kHand10, 0.5, 0.5, 1, 1.0)).epsilon(1e-12));
  const std::vector<double> eight(kHand10.begin(), kHand10.begin() + 8);
  CHECK(rho_fl(CircularSeries(eight), 1) == doctest::Approx(oracle::fisher_lee(eight, 1)).epsilon(1e-12));
  CHECK(rho_js(CircularSeries(eight), 1) == doctest::Approx(oracle::jammalamadaka_sarma(eight, 1)).epsilon(1e-12));
}

TEST_CASE("degenerate and exact cases") {
  const CircularSeries constant(std::vector<double>(20, 2.0));
  CHECK(cqa::cqa(constant, 0.5, 0.5, 1, 0.5) == 0.0);
  CHECK(rho_fl(constant, 1) == 0.0);
  CHECK(rho_js(constant, 1) == 0.0);

  std::vector<double> line;
  for (int t = 0; t < 40; ++t) line.push_back(0.3 * t);
  for (int l : {1, 2, 5}) CHECK(rho_fl(CircularSeries(line), l) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> periodic;
  for (int t = 0; t < 30; ++t) periodic.push_back(std::vector<double>{0.4, 2.9, 5.1}[t % 3]);
  CHECK(rho_js(CircularSeries(periodic), 3) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(rho_fl(CircularSeries(line), 39), InvalidLag);
  CHECK_THROWS_AS(cqa::cqa(constant, 0.5, 0.5, 20, 0.5), InvalidLag);
}

TEST_CASE("independence nulls") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> angles(10000), reals(10000);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    angles[i] = oracle::wrap(z(rng));
    reals[i] = z(rng);
  }
  CHECK(std::fabs(cqa::cqa(CircularSeries(angles), 0.5, 0.5, 1, 1.0)) < 0.05);
  CHECK(std::fabs(qa(reals, 0.5, 0.5, 1)) < 0.02);
  CHECK(std::fabs(qa(reals, 0.0, 0.0, 1)) < 1e-3);
}

TEST_CASE("rotation invariance of the estimators") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> shift(-7.0, 7.0);
  for (int rep = 0; rep < 20; ++rep) {
    const CircularSeries s(wrapped_ar(rng, 201, 0.6));
    const double delta = shift(rng);
    const CircularSeries r = s.rotated(delta);
    for (int l : {1, 2}) {
      CHECK(rho_fl(r, l) == doctest::Approx(rho_fl(s, l)).epsilon(1e-12));
      CHECK(rho_js(r, l) == doctest::Approx(rho_js(s, l)).epsilon(1e-12));
      CHECK(cqa::cqa(r, 0.1, 0.9, l, 0.8) == doctest::Approx(cqa::cqa(s, 0.1, 0.9, l, 0.8)).epsilon(1e-12));
    }
  }
}

TEST_CASE("joint probability on a palindrome is symmetric in the levels") {
  std::mt19937_64 rng(5);
  auto half = uniform_angles(rng, 15);
  std::vector<double> x = half;
  x.insert(x.end(), half.rbegin(), half.rend());
  const CircularSeries s(x);
  for (int l : {1, 2, 4}) {
    CHECK(joint_arc_indicator_prob(s, 0.1, 0.9, 1.0, l) == doctest::Approx(joint_arc_indicator_prob(s, 0.9, 0.1, 1.0, l)));
  }
}

TEST_CASE("estimates stay within their bounds on random series") {
  std::mt19937_64 rng(6);
  const std::vector<int> lags{1, 2};
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t T = 4 + static_cast<std::size_t>(rep % 40);
    const auto x = rep % 3 ? uniform_angles(rng, T) : wrapped_ar(rng, T, 0.9);
    const CircularSeries s(x);
    const double r = 0.05 + 3.0 * static_cast<double>(rep % 17) / 17.0;
    const CQAFeatures f = cqa_features(s, lags, kLevels, r);
    for (double v : f.values) CHECK((v >= -1.0 && v <= 1.0));
    for (int l : lags) {
      const double fl = rho_fl(s, l), js = rho_js(s, l);
      CHECK((fl >= -1.0 && fl <= 1.0));
      CHECK((js >= -1.0 && js <= 1.0));
    }
    // The population covariance is within 1/4; the estimator's 1/(T-l) joint
    // and 1/T marginals widen that to 1/4 (T/(T-l))^2 + l/(T-l).
    const QAFeatures q = qa_features(x, lags, kLevels);
    for (std::size_t k = 0; k < lags.size(); ++k) {
      const double n = static_cast<double>(T), l = lags[k];
      const double bound = 0.25 * (n / (n - l)) * (n / (n - l)) + l / (n - l);
      for (std::size_t i = 0; i < kLevels.size(); ++i) {
        for (std::size_t j = 0; j < kLevels.size(); ++j) CHECK(std::fabs(q.values[q.index(k, i, j)]) <= bound + 1e-12);
      }
    }
  }
}

TEST_CASE("feature tensors have the documented shape and agree elementwise") {
  std::mt19937_64 rng(7);
  const auto x = wrapped_ar(rng, 60, 0.5);
  const CircularSeries s(x);
  const std::vector<int> lags{1, 3};
  const CQAFeatures f = cqa_features(s, lags, kLevels, 0.7);
  CHECK(f.values.size() == 2 * 3 * 3);
  CHECK(f.radius == 0.7);
  const QAFeatures q = qa_features(x, lags, kLevels);
  CHECK(q.values.size() == 18);
  for (std::size_t k = 0; k < lags.size(); ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(f.at(k, i, j) == cqa::cqa(s, kLevels[i], kLevels[j], lags[k], 0.7));
        CHECK(q.at(k, i, j) == qa(x, kLevels[i], kLevels[j], lags[k]));
      }
    }
  }
  const CircularAcfFeatures fl = acf_features(s, lags, AcfKind::FisherLee);
  CHECK(fl.values.size() == 2);
  CHECK(fl.values[1] == rho_fl(s, 3));
  CHECK_THROWS_AS(cqa_features(s, std::vector<int>{60}, kLevels, 0.7), InvalidLag);
}

TEST_CASE("circular mean and linear quantile conventions") {
  CHECK(circular_mean(CircularSeries({6.2, 0.1})).radians() == doctest::Approx(oracle::wrap((6.2 + 0.1 + kTwoPi) / 2)));
  const std::vector<double> y{3.0, 1.0, 2.0, 5.0, 4.0};
  CHECK(empirical_quantile(y, 0.0) == 1.0);
  CHECK(empirical_quantile(y, 0.2) == 1.0);
  CHECK(empirical_quantile(y, 0.21) == 2.0);
  CHECK(empirical_quantile(y, 1.0) == 5.0);
}
