#pragma once

// Real-valued generators (ARMA, QAR, GARCH, white noise), the maps that wrap
// them onto the circle, and the built-in clustering scenarios.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqa/circular.hpp"

namespace cqa {

enum class GeneratorFamily { ARMA, QAR, GARCH, WN };

/// One coefficient function f(U) = slope * (U - offset) of a QAR recursion.
struct QarTerm {
  double slope = 0.0;
  double offset = 0.0;
  friend bool operator==(const QarTerm&, const QarTerm&) = default;
};

struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::WN;
  std::vector<double> ar;         // ARMA: alpha_1..alpha_p
  std::vector<double> ma;         // ARMA: beta_1..beta_q
  std::vector<QarTerm> qar;       // QAR: f_1..f_p; f_0 is the standard normal quantile
  double garch_omega = 0.0;       // GARCH: alpha_0
  std::vector<double> garch_alpha;  // alpha_1..alpha_p
  std::vector<double> garch_beta;   // beta_1..beta_q
  int burn_in = 500;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;

  static GeneratorSpec white_noise();
  static GeneratorSpec arma(std::vector<double> ar, std::vector<double> ma);
  static GeneratorSpec qar_process(std::vector<QarTerm> terms);
  static GeneratorSpec garch(double omega, std::vector<double> alpha, std::vector<double> beta);
};

/// Throws InvalidSpec when ARMA AR roots are not outside the unit circle or
/// GARCH coefficients are not positive with sum(alpha) + sum(beta) < 1.
void validate(const GeneratorSpec& spec);

std::vector<double> gen_arma(const GeneratorSpec& spec, int length, std::uint64_t seed);
std::vector<double> gen_qar(const GeneratorSpec& spec, int length, std::uint64_t seed);
/// QAR recursion driven by the given uniforms; no burn-in is applied.
std::vector<double> qar_recursion(const GeneratorSpec& spec, const std::vector<double>& uniforms);
std::vector<double> gen_garch(const GeneratorSpec& spec, int length, std::uint64_t seed);
std::vector<double> gen_white_noise(int length, std::uint64_t seed);
/// Dispatches on spec.family.
std::vector<double> generate(const GeneratorSpec& spec, int length, std::uint64_t seed);

enum class WrapKind {
  Modulo,   // x mod 2*pi
  Arctan,   // 2 * atan(x) + pi
};

CircularSeries wrap(const std::vector<double>& values, WrapKind kind);

struct ClusterBlock {
  GeneratorSpec generator;
  int count = 5;
  friend bool operator==(const ClusterBlock&, const ClusterBlock&) = default;
};

struct ScenarioSpec {
  std::string id;
  std::vector<ClusterBlock> clusters;
  std::optional<GeneratorSpec> isolated;
  WrapKind wrap_kind = WrapKind::Modulo;
  int length = 500;
  /// Lags used for the distances in this scenario.
  std::vector<int> lags;
};

/// Built-in scenarios 1-6 with the given series length and wrap.
ScenarioSpec scenario(int id, int length, WrapKind wrap_kind = WrapKind::Modulo);

/// Label assigned to the isolated series of scenarios 4-6.
inline constexpr int kIsolatedLabel = -1;

struct Dataset {
  std::vector<CircularSeries> series;
  std::vector<int> labels;  // cluster index, or kIsolatedLabel
};

/// Generates each cluster block in order, then the isolated series (if any).
/// Every series has its own sub-seed derived from `seed`.
Dataset build_scenario(const ScenarioSpec& spec, std::uint64_t seed);

/// The two uncorrelated but dependent QAR(2) processes of the motivating example.
GeneratorSpec motivating_process(int which);

struct DistanceSummary {
  std::string distance;  // "CQA", "FL" or "JS"
  double radius = 0.0;   // CQA only
  double mean = 0.0;     // every statistic scaled by 100
  double sd = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

struct MotivatingResult {
  std::vector<DistanceSummary> cqa_by_radius;
  DistanceSummary best_cqa;  // row with the largest mean
  DistanceSummary fl;
  DistanceSummary js;
};

/// Simulates `replicates` pairs of realizations of the two motivating
/// processes, wrapped modulo 2*pi, and summarizes d_CQA (lags {1, 2}, levels
/// {0.1, 0.5, 0.9}) for each radius together with d_FL and d_JS.
MotivatingResult motivating_example(int length, int replicates, const std::vector<double>& radii,
                                    std::uint64_t seed, unsigned threads = 1);

std::string to_string(WrapKind kind);
WrapKind wrap_from_string(const std::string& name);

}  // namespace cqa
