#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "cqa/dissimilarity.hpp"
#include "cqa/errors.hpp"

using namespace cqa;

namespace {

std::vector<CircularSeries> random_dataset(std::uint64_t seed, std::size_t n, std::size_t T) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> e(0.0, 1.0);
  std::vector<CircularSeries> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = -0.8 + 1.6 * static_cast<double>(k) / static_cast<double>(n);
    std::vector<double> x(T);
    double y = 0.0;
    for (double& v : x) {
      y = phi * y + e(rng);
      v = y;
    }
    out.emplace_back(std::move(x));
  }
  return out;
}

CQAFeatures constant_cqa(double value) {
  CQAFeatures f;
  f.lags = {1, 2};
  f.levels = {0.1, 0.5, 0.9};
  f.radius = 1.0;
  f.values.assign(18, value);
  return f;
}

}  // namespace

TEST_CASE("extremal feature vectors attain distance one") {
  CHECK(d_cqa(constant_cqa(1.0), constant_cqa(-1.0)) == doctest::Approx(1.0));
  CHECK(d_cqa(constant_cqa(0.3), constant_cqa(0.3)) == 0.0);

  CircularAcfFeatures up{AcfKind::FisherLee, {1, 2, 3}, {1.0, 1.0, 1.0}};
  CircularAcfFeatures down{AcfKind::FisherLee, {1, 2, 3}, {-1.0, -1.0, -1.0}};
  CHECK(d_fl(up, down) == doctest::Approx(1.0));
  CHECK(d_fl(up, up) == 0.0);
  up.kind = down.kind = AcfKind::JammalamadakaSarma;
  CHECK(d_js(up, down) == doctest::Approx(1.0));

  QAFeatures hi, lo;
  hi.lags = lo.lags = {1};
  hi.levels = lo.levels = {0.1, 0.5, 0.9};
  hi.values.assign(9, 0.25);
  lo.values.assign(9, -0.25);
  CHECK(d_qa(hi, lo) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("mismatched parameterizations are rejected") {
  CQAFeatures other = constant_cqa(0.0);
  other.radius = 0.5;
  CHECK_THROWS_AS(d_cqa(constant_cqa(0.0), other), IncompatibleFeatures);
  other = constant_cqa(0.0);
  other.lags = {1, 3};
  CHECK_THROWS_AS(d_cqa(constant_cqa(0.0), other), IncompatibleFeatures);

  const CircularAcfFeatures fl{AcfKind::FisherLee, {1}, {0.2}};
  const CircularAcfFeatures js{AcfKind::JammalamadakaSarma, {1}, {0.2}};
  CHECK_THROWS_AS(d_fl(fl, js), IncompatibleFeatures);
  CHECK_THROWS_AS(d_js(fl, js), IncompatibleFeatures);
}

TEST_CASE("d_qa on two hand series matches the direct formula") {
  const std::vector<double> a{0.3, -1.2, 0.8, 2.1, -0.4, 0.0, 1.5, -2.2, 0.9, 0.1};
  const std::vector<double> b{1.0, 0.2, -0.3, -0.9, 0.4, 1.8, -1.1, 0.6, -0.2, 0.7};
  const std::vector<int> lags{1, 2};
  const std::vector<double> levels{0.1, 0.5, 0.9};
  double sum = 0.0;
  for (int l : lags) {
    for (double p : levels) {
      for (double pp : levels) {
        const double diff = oracle::quantile_autocov(a, p, pp, l) - oracle::quantile_autocov(b, p, pp, l);
        sum += diff * diff;
      }
    }
  }
  CHECK(d_qa(qa_features(a, lags, levels), qa_features(b, lags, levels)) ==
        doctest::Approx(sum / (4.0 * 2 * 9)).epsilon(1e-12));
}

TEST_CASE("pairwise matrices are symmetric, zero on the diagonal and bounded") {
  const auto data = random_dataset(1, 7, 120);
  for (MetricKind kind : {MetricKind::CQA, MetricKind::FL, MetricKind::JS, MetricKind::QA}) {
    MetricParams params;
    params.kind = kind;
    params.lags = {1, 2};
    params.radius = 0.9;
    const DissimilarityMatrix m = pairwise_matrix(data, params);
    CHECK(m.size() == 7);
    const double upper = kind == MetricKind::QA ? 1.0 / 16.0 : 1.0;
    for (Eigen::Index i = 0; i < 7; ++i) {
      CHECK(m.values(i, i) == 0.0);
      for (Eigen::Index j = 0; j < 7; ++j) {
        CHECK(m.values(i, j) == m.values(j, i));
        CHECK(m.values(i, j) >= 0.0);
        CHECK(m.values(i, j) <= upper);
      }
    }
  }
}

TEST_CASE("matrix entries equal pointwise distance calls") {
  const auto data = random_dataset(2, 4, 80);
  const std::vector<int> lags{1, 2};
  const std::vector<double> levels{0.1, 0.5, 0.9};
  MetricParams params;
  params.lags = lags;
  params.radius = 1.2;
  const DissimilarityMatrix m = pairwise_matrix(data, params);
  params.kind = MetricKind::FL;
  const DissimilarityMatrix fl = pairwise_matrix(data, params);
  params.kind = MetricKind::JS;
  const DissimilarityMatrix js = pairwise_matrix(data, params);
  params.kind = MetricKind::QA;
  const DissimilarityMatrix q = pairwise_matrix(data, params);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
      CHECK(m.values(r, c) == doctest::Approx(d_cqa(cqa_features(data[i], lags, levels, 1.2),
                                                    cqa_features(data[j], lags, levels, 1.2))));
      CHECK(fl.values(r, c) == doctest::Approx(d_fl(acf_features(data[i], lags, AcfKind::FisherLee),
                                                     acf_features(data[j], lags, AcfKind::FisherLee))));
      CHECK(js.values(r, c) == doctest::Approx(d_js(acf_features(data[i], lags, AcfKind::JammalamadakaSarma),
                                                     acf_features(data[j], lags, AcfKind::JammalamadakaSarma))));
      CHECK(q.values(r, c) == doctest::Approx(d_qa(qa_features(data[i].values(), lags, levels),
                                                    qa_features(data[j].values(), lags, levels))));
    }
  }
}

TEST_CASE("features are extracted once per series") {
  const auto data = random_dataset(3, 9, 60);
  for (MetricKind kind : {MetricKind::CQA, MetricKind::FL, MetricKind::JS, MetricKind::QA}) {
    std::atomic<int> calls{0};
    MetricParams params;
    params.kind = kind;
    pairwise_matrix(data, params, 3, [&](std::size_t) { ++calls; });
    CHECK(calls == 9);
  }
}

TEST_CASE("parallel assembly equals serial assembly") {
  const auto data = random_dataset(4, 8, 100);
  MetricParams params;
  params.lags = {1, 2};
  const DissimilarityMatrix serial = pairwise_matrix(data, params, 1);
  const DissimilarityMatrix parallel = pairwise_matrix(data, params, 4);
  CHECK((serial.values.array() == parallel.values.array()).all());
}

TEST_CASE("one series gives a 1x1 zero matrix and series may differ in length") {
  const auto one = random_dataset(5, 1, 50);
  const DissimilarityMatrix m = pairwise_matrix(one, MetricParams{});
  CHECK(m.size() == 1);
  CHECK(m.values(0, 0) == 0.0);

  auto mixed = random_dataset(6, 2, 50);
  mixed.push_back(random_dataset(7, 1, 300).front());
  CHECK_NOTHROW(pairwise_matrix(mixed, MetricParams{}));
}

TEST_CASE("a series too short for the lag reports its index") {
  auto data = random_dataset(8, 3, 50);
  data.push_back(CircularSeries({0.1, 0.2}));
  MetricParams params;
  params.lags = {1, 2};
  try {
    pairwise_matrix(data, params);
    FAIL("expected an error");
  } catch (const InvalidLag& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("cqa_matrices stamps each matrix with its radius") {
  const auto data = random_dataset(9, 5, 80);
  const std::vector<int> lags{1};
  const std::vector<double> levels{0.1, 0.5, 0.9};
  const std::vector<double> radii{0.4, 1.1};
  const auto ms = cqa_matrices(data, lags, levels, radii);
  REQUIRE(ms.size() == 2);
  MetricParams params;
  params.lags = lags;
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(ms[k].params.radius == radii[k]);
    params.radius = radii[k];
    CHECK(ms[k].values.isApprox(pairwise_matrix(data, params).values, 1e-14));
  }
}

TEST_CASE("metric names round-trip") {
  for (MetricKind kind : {MetricKind::CQA, MetricKind::FL, MetricKind::JS, MetricKind::QA}) {
    CHECK(metric_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(metric_from_string("euclid"), InvalidInput);
}
