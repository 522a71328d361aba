#include "cqa/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>

#include "cqa/dependence.hpp"
#include "cqa/dissimilarity.hpp"
#include "cqa/errors.hpp"
#include "cqa/parallel.hpp"
#include "cqa/random.hpp"

namespace cqa {

GeneratorSpec GeneratorSpec::white_noise() { return GeneratorSpec{}; }

GeneratorSpec GeneratorSpec::arma(std::vector<double> ar, std::vector<double> ma) {
  GeneratorSpec s;
  s.family = GeneratorFamily::ARMA;
  s.ar = std::move(ar);
  s.ma = std::move(ma);
  return s;
}

GeneratorSpec GeneratorSpec::qar_process(std::vector<QarTerm> terms) {
  GeneratorSpec s;
  s.family = GeneratorFamily::QAR;
  s.qar = std::move(terms);
  return s;
}

GeneratorSpec GeneratorSpec::garch(double omega, std::vector<double> alpha, std::vector<double> beta) {
  GeneratorSpec s;
  s.family = GeneratorFamily::GARCH;
  s.garch_omega = omega;
  s.garch_alpha = std::move(alpha);
  s.garch_beta = std::move(beta);
  return s;
}

namespace {

double ar_spectral_radius(const std::vector<double>& ar) {
  const auto p = static_cast<Eigen::Index>(ar.size());
  if (p == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

void check_length(int length) {
  if (length < 1) throw InvalidInput("series length must be positive");
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  if (spec.burn_in < 0) throw InvalidSpec("burn-in must be non-negative");
  switch (spec.family) {
    case GeneratorFamily::ARMA:
      // Roots of 1 - sum alpha_i z^i outside the unit circle <=> companion
      // eigenvalues inside it.
      if (ar_spectral_radius(spec.ar) >= 1.0) throw InvalidSpec("ARMA coefficients are not stationary");
      break;
    case GeneratorFamily::GARCH: {
      if (!(spec.garch_omega > 0.0)) throw InvalidSpec("GARCH alpha_0 must be positive");
      double total = 0.0;
      for (double a : spec.garch_alpha) {
        if (a < 0.0) throw InvalidSpec("GARCH alpha coefficients must be non-negative");
        total += a;
      }
      for (double b : spec.garch_beta) {
        if (b < 0.0) throw InvalidSpec("GARCH beta coefficients must be non-negative");
        total += b;
      }
      if (total >= 1.0) throw InvalidSpec("GARCH coefficients are not stationary");
      break;
    }
    case GeneratorFamily::QAR:
    case GeneratorFamily::WN:
      break;
  }
}

std::vector<double> gen_white_noise(int length, std::uint64_t seed) {
  check_length(length);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> out(static_cast<std::size_t>(length));
  for (double& x : out) x = normal(rng);
  return out;
}

std::vector<double> gen_arma(const GeneratorSpec& spec, int length, std::uint64_t seed) {
  validate(spec);
  check_length(length);
  const std::size_t p = spec.ar.size(), q = spec.ma.size();
  const std::size_t total = static_cast<std::size_t>(spec.burn_in) + static_cast<std::size_t>(length);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x(total, 0.0), eps(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    eps[t] = normal(rng);
    double value = eps[t];
    for (std::size_t i = 1; i <= p && i <= t; ++i) value += spec.ar[i - 1] * x[t - i];
    for (std::size_t i = 1; i <= q && i <= t; ++i) value += spec.ma[i - 1] * eps[t - i];
    x[t] = value;
  }
  return {x.begin() + spec.burn_in, x.end()};
}

std::vector<double> qar_recursion(const GeneratorSpec& spec, const std::vector<double>& uniforms) {
  const boost::math::normal_distribution<double> standard;
  const std::size_t p = spec.qar.size();
  std::vector<double> x(uniforms.size(), 0.0);
  for (std::size_t t = 0; t < uniforms.size(); ++t) {
    const double u = uniforms[t];
    double value = boost::math::quantile(standard, u);
    for (std::size_t i = 1; i <= p && i <= t; ++i) {
      value += spec.qar[i - 1].slope * (u - spec.qar[i - 1].offset) * x[t - i];
    }
    x[t] = value;
  }
  return x;
}

std::vector<double> gen_qar(const GeneratorSpec& spec, int length, std::uint64_t seed) {
  validate(spec);
  check_length(length);
  const std::size_t total = static_cast<std::size_t>(spec.burn_in) + static_cast<std::size_t>(length);
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> u(total);
  for (double& v : u) {
    do {
      v = uniform(rng);
    } while (v <= 0.0);
  }
  auto x = qar_recursion(spec, u);
  return {x.begin() + spec.burn_in, x.end()};
}

std::vector<double> gen_garch(const GeneratorSpec& spec, int length, std::uint64_t seed) {
  validate(spec);
  check_length(length);
  const std::size_t p = spec.garch_alpha.size(), q = spec.garch_beta.size();
  double persistence = 0.0;
  for (double a : spec.garch_alpha) persistence += a;
  for (double b : spec.garch_beta) persistence += b;
  const double unconditional = spec.garch_omega / (1.0 - persistence);

  const std::size_t total = static_cast<std::size_t>(spec.burn_in) + static_cast<std::size_t>(length);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x(total), sigma2(total);
  for (std::size_t t = 0; t < total; ++t) {
    double s2 = spec.garch_omega;
    for (std::size_t i = 1; i <= p; ++i) s2 += spec.garch_alpha[i - 1] * (i <= t ? x[t - i] * x[t - i] : unconditional);
    for (std::size_t j = 1; j <= q; ++j) s2 += spec.garch_beta[j - 1] * (j <= t ? sigma2[t - j] : unconditional);
    sigma2[t] = s2;
    x[t] = std::sqrt(s2) * normal(rng);
  }
  return {x.begin() + spec.burn_in, x.end()};
}

std::vector<double> generate(const GeneratorSpec& spec, int length, std::uint64_t seed) {
  switch (spec.family) {
    case GeneratorFamily::ARMA: return gen_arma(spec, length, seed);
    case GeneratorFamily::QAR: return gen_qar(spec, length, seed);
    case GeneratorFamily::GARCH: return gen_garch(spec, length, seed);
    case GeneratorFamily::WN: return gen_white_noise(length, seed);
  }
  throw InvalidSpec("unknown generator family");
}

CircularSeries wrap(const std::vector<double>& values, WrapKind kind) {
  std::vector<double> angles(values.size());
  std::transform(values.begin(), values.end(), angles.begin(), [kind](double x) {
    if (!std::isfinite(x)) throw InvalidInput("wrap: non-finite value");
    return kind == WrapKind::Modulo ? x : 2.0 * std::atan(x) + std::numbers::pi;
  });
  return CircularSeries(std::move(angles));
}

std::string to_string(WrapKind kind) { return kind == WrapKind::Modulo ? "mod" : "arctan"; }

WrapKind wrap_from_string(const std::string& name) {
  if (name == "mod" || name == "eta1" || name == "1") return WrapKind::Modulo;
  if (name == "arctan" || name == "eta2" || name == "2") return WrapKind::Arctan;
  throw InvalidInput("unknown wrap transform '" + name + "'");
}

ScenarioSpec scenario(int id, int length, WrapKind wrap_kind) {
  const GeneratorSpec arma1 = GeneratorSpec::arma({0.2, -0.2, 0.2}, {0.0, 0.0, 0.0});
  const GeneratorSpec arma2 = GeneratorSpec::arma({-0.2, 0.2, -0.2}, {0.0, 0.0, 0.0});
  const GeneratorSpec arma3 = GeneratorSpec::arma({0.0, 0.0, 0.0}, {0.2, -0.2, 0.2});
  const GeneratorSpec qar1 = GeneratorSpec::qar_process({{0.2, 0.4}, {1.2, 0.4}});
  const GeneratorSpec qar2 = GeneratorSpec::qar_process({{-0.2, 0.6}, {-1.2, 0.6}});
  const GeneratorSpec qar3 = GeneratorSpec::qar_process({{0.0, 0.0}, {0.0, 0.0}});
  const GeneratorSpec garch1 = GeneratorSpec::garch(0.1, {0.4, 0.4}, {0.05, 0.05});
  const GeneratorSpec garch2 = GeneratorSpec::garch(0.1, {0.05, 0.05}, {0.4, 0.4});
  const GeneratorSpec garch3 = GeneratorSpec::garch(0.1, {0.05, 0.4}, {0.4, 0.05});

  ScenarioSpec s;
  s.id = std::to_string(id);
  s.length = length;
  s.wrap_kind = wrap_kind;
  switch (id) {
    case 1:
      s.clusters = {{arma1, 5}, {arma2, 5}, {arma3, 5}};
      s.lags = {1, 2, 3};
      break;
    case 2:
      s.clusters = {{qar1, 5}, {qar2, 5}, {qar3, 5}};
      s.lags = {1, 2};
      break;
    case 3:
      s.clusters = {{garch1, 5}, {garch2, 5}, {garch3, 5}};
      s.lags = {1, 2};
      break;
    case 4:
      s.clusters = {{arma1, 5}, {arma2, 5}};
      s.isolated = GeneratorSpec::white_noise();
      s.lags = {1, 2, 3};
      break;
    case 5:
      s.clusters = {{qar1, 5}, {qar2, 5}};
      s.isolated = GeneratorSpec::white_noise();
      s.lags = {1, 2};
      break;
    case 6:
      s.clusters = {{garch1, 5}, {garch2, 5}};
      s.isolated = GeneratorSpec::garch(0.1, {0.225, 0.225}, {0.225, 0.225});
      s.lags = {1, 2};
      break;
    default:
      throw InvalidInput("scenario id must be between 1 and 6");
  }
  return s;
}

Dataset build_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  for (const auto& block : spec.clusters) {
    if (block.count < 1) throw InvalidSpec("cluster series counts must be positive");
    validate(block.generator);
  }
  if (spec.isolated) validate(*spec.isolated);

  Dataset out;
  std::uint64_t stream = 0;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    for (int k = 0; k < spec.clusters[c].count; ++k) {
      out.series.push_back(wrap(generate(spec.clusters[c].generator, spec.length, derive_seed(seed, stream++)),
                                spec.wrap_kind));
      out.labels.push_back(static_cast<int>(c));
    }
  }
  if (spec.isolated) {
    out.series.push_back(wrap(generate(*spec.isolated, spec.length, derive_seed(seed, stream++)), spec.wrap_kind));
    out.labels.push_back(kIsolatedLabel);
  }
  return out;
}

GeneratorSpec motivating_process(int which) {
  if (which == 1) return GeneratorSpec::qar_process({{0.2, 0.5}, {1.2, 0.5}});
  if (which == 2) return GeneratorSpec::qar_process({{-0.2, 0.5}, {-1.2, 0.5}});
  throw InvalidInput("motivating process index must be 1 or 2");
}

namespace {

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double sample_quantile(std::vector<double> sorted, double p) {
  std::sort(sorted.begin(), sorted.end());
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DistanceSummary summarize(std::string name, double radius, const std::vector<double>& raw) {
  std::vector<double> v(raw.size());
  std::transform(raw.begin(), raw.end(), v.begin(), [](double d) { return 100.0 * d; });
  DistanceSummary s;
  s.distance = std::move(name);
  s.radius = radius;
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.q05 = sample_quantile(v, 0.05);
  s.q95 = sample_quantile(v, 0.95);
  return s;
}

}  // namespace

MotivatingResult motivating_example(int length, int replicates, const std::vector<double>& radii,
                                    std::uint64_t seed, unsigned threads) {
  if (replicates < 1 || radii.empty()) throw InvalidInput("replicates and radii must be nonempty");
  const std::vector<int> lags{1, 2};
  const std::vector<double> levels{0.1, 0.5, 0.9};
  const GeneratorSpec first = motivating_process(1);
  const GeneratorSpec second = motivating_process(2);

  const auto reps = static_cast<std::size_t>(replicates);
  std::vector<std::vector<double>> cqa_values(radii.size(), std::vector<double>(reps));
  std::vector<double> fl_values(reps), js_values(reps);

  parallel_for(reps, threads, [&](std::size_t k) {
    const CircularSeries a = wrap(gen_qar(first, length, derive_seed(seed, 2 * k)), WrapKind::Modulo);
    const CircularSeries b = wrap(gen_qar(second, length, derive_seed(seed, 2 * k + 1)), WrapKind::Modulo);
    const CqaExtractor ea(a), eb(b);
    for (std::size_t r = 0; r < radii.size(); ++r) {
      cqa_values[r][k] = d_cqa(ea.features(lags, levels, radii[r]), eb.features(lags, levels, radii[r]));
    }
    fl_values[k] = d_fl(acf_features(a, lags, AcfKind::FisherLee), acf_features(b, lags, AcfKind::FisherLee));
    js_values[k] = d_js(acf_features(a, lags, AcfKind::JammalamadakaSarma),
                        acf_features(b, lags, AcfKind::JammalamadakaSarma));
  });

  MotivatingResult out;
  for (std::size_t r = 0; r < radii.size(); ++r) {
    out.cqa_by_radius.push_back(summarize("CQA", radii[r], cqa_values[r]));
  }
  out.best_cqa = *std::max_element(out.cqa_by_radius.begin(), out.cqa_by_radius.end(),
                                   [](const auto& x, const auto& y) { return x.mean < y.mean; });
  out.fl = summarize("FL", 0.0, fl_values);
  out.js = summarize("JS", 0.0, js_values);
  return out;
}

}  // namespace cqa
