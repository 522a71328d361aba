#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cqa/commands.hpp"
#include "cqa/errors.hpp"

namespace {

// Values parsed from the command line; a flag given explicitly overrides the
// value loaded from --config.
struct Flags {
  std::string config;
  cqa::RunConfig run;
};

template <typename T>
void override_if_set(const CLI::Option* opt, const T& from, T& to) {
  if (opt->count() > 0) to = from;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy clustering of circular time series by circular quantile autocorrelation"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  cqa::RunConfig& f = flags.run;
  app.add_option("--config", flags.config, "JSON run configuration or manifest");
  auto* o_scenario = app.add_option("--scenario", f.scenario, "Built-in scenario 1-6");
  auto* o_scenario_file = app.add_option("--scenario-file", f.scenario_file, "JSON scenario specification");
  auto* o_wrap = app.add_option("--wrap", f.wrap, "mod | arctan");
  auto* o_input = app.add_option("--input", f.input, "Wind CSV (station,timestamp,direction_deg) or series CSV");
  auto* o_months = app.add_option("--months", f.months, "winter-summer | all");
  auto* o_station = app.add_option("--station", f.station, "Station to use from a wind CSV");
  auto* o_trials = app.add_option("--trials", f.trials, "Monte Carlo trials");
  auto* o_restarts = app.add_option("--restarts", f.restarts, "Random medoid starts");
  auto* o_max_iter = app.add_option("--max-iter", f.max_iter, "Iterations per clustering run");
  auto* o_length = app.add_option("--length", f.length, "Series length T");
  auto* o_replicates = app.add_option("--replicates", f.replicates, "Replicate pairs (motivating)");
  auto* o_lags = app.add_option("--lags", f.lags, "Lags, comma separated")->delimiter(',');
  auto* o_levels = app.add_option("--levels", f.levels, "Probability levels, comma separated")->delimiter(',');
  auto* o_radius = app.add_option("--radius", f.radius, "Arc radius or radius grid")->delimiter(',');
  auto* o_clusters = app.add_option("--clusters", f.clusters, "Number(s) of clusters")->delimiter(',');
  auto* o_fuzziness = app.add_option("--fuzziness", f.fuzziness, "Fuzziness value(s) m")->delimiter(',');
  auto* o_m_step = app.add_option("--m-step", f.m_step, "Step of the (1, 4] m grid for scenarios 4-6");
  auto* o_metrics = app.add_option("--metrics", f.metrics, "CQA, FL, JS, QA")->delimiter(',');
  auto* o_lag_test = app.add_flag("--lag-test", f.lag_test, "Select lags by permutation test");
  auto* o_cutoff = app.add_option("--cutoff", f.cutoff, "Membership cutoff for scenarios 4-6");
  auto* o_seed = app.add_option("--seed", f.seed, "Master seed");
  auto* o_threads = app.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  auto* o_out = app.add_option("--out", f.out, "Output directory");

  auto* simulate = app.add_subcommand("simulate", "ARIF/JIF tables or cutoff curves on simulated scenarios");
  auto* cluster = app.add_subcommand("cluster", "Fuzzy C-medoids on user data with hyperparameter selection");
  auto* mds = app.add_subcommand("mds", "Two-dimensional scaling of a dissimilarity matrix");
  auto* motivating = app.add_subcommand("motivating", "Distances between the two motivating processes");

  CLI11_PARSE(app, argc, argv);

  try {
    cqa::RunConfig run = flags.config.empty() ? cqa::RunConfig{} : cqa::load_run_config(flags.config);
    override_if_set(o_scenario, f.scenario, run.scenario);
    override_if_set(o_scenario_file, f.scenario_file, run.scenario_file);
    override_if_set(o_wrap, f.wrap, run.wrap);
    override_if_set(o_input, f.input, run.input);
    override_if_set(o_months, f.months, run.months);
    override_if_set(o_station, f.station, run.station);
    override_if_set(o_trials, f.trials, run.trials);
    override_if_set(o_restarts, f.restarts, run.restarts);
    override_if_set(o_max_iter, f.max_iter, run.max_iter);
    override_if_set(o_length, f.length, run.length);
    override_if_set(o_replicates, f.replicates, run.replicates);
    override_if_set(o_lags, f.lags, run.lags);
    override_if_set(o_levels, f.levels, run.levels);
    override_if_set(o_radius, f.radius, run.radius);
    override_if_set(o_clusters, f.clusters, run.clusters);
    override_if_set(o_fuzziness, f.fuzziness, run.fuzziness);
    override_if_set(o_m_step, f.m_step, run.m_step);
    override_if_set(o_metrics, f.metrics, run.metrics);
    override_if_set(o_lag_test, f.lag_test, run.lag_test);
    override_if_set(o_cutoff, f.cutoff, run.cutoff);
    override_if_set(o_seed, f.seed, run.seed);
    override_if_set(o_threads, f.threads, run.threads);
    override_if_set(o_out, f.out, run.out);

    if (simulate->parsed()) {
      const auto report = cqa::cmd_simulate(run);
      if (report.cutoff_mode) {
        for (const auto& curve : report.rates) {
          std::cout << cqa::to_string(curve.metric) << ": maximum " << curve.maximum << ", AUFC " << curve.area
                    << '\n';
        }
      } else {
        for (const auto& cell : report.indices) {
          std::cout << cqa::to_string(cell.metric) << " m=" << cell.fuzziness << ": ARIF " << cell.arif_mean
                    << ", JIF " << cell.jif_mean << '\n';
        }
      }
    } else if (cluster->parsed()) {
      const auto result = cqa::cmd_cluster(run);
      std::cout << "C=" << result.clusters << " m=" << result.fuzziness << " r=" << result.params.radius
                << " Xie-Beni " << result.xie_beni << '\n';
    } else if (mds->parsed()) {
      const auto embedding = cqa::cmd_mds(run);
      std::cout << "stress " << embedding.stress << ", 1 - stress^2 " << embedding.r_squared << '\n';
    } else if (motivating->parsed()) {
      const auto result = cqa::cmd_motivating(run);
      std::cout << "CQA (r=" << result.best_cqa.radius << ") " << result.best_cqa.mean << ", FL " << result.fl.mean
                << ", JS " << result.js.mean << " (x100)\n";
    }
    std::cout << "outputs written to " << run.out << '\n';
  } catch (const cqa::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
