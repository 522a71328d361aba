#include "cqa/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cqa/errors.hpp"
#include "cqa/evaluation.hpp"
#include "cqa/wind.hpp"

namespace cqa {
namespace fs = std::filesystem;

Json to_json(const RunConfig& c) {
  return Json{{"command", c.command},       {"scenario", c.scenario},   {"scenario_file", c.scenario_file},
              {"wrap", c.wrap},             {"input", c.input},         {"months", c.months},
              {"station", c.station},       {"trials", c.trials},       {"restarts", c.restarts},
              {"max_iter", c.max_iter},     {"length", c.length},       {"replicates", c.replicates},
              {"lags", c.lags},             {"levels", c.levels},       {"radius", c.radius},
              {"clusters", c.clusters},     {"fuzziness", c.fuzziness}, {"m_step", c.m_step},
              {"metrics", c.metrics},       {"lag_test", c.lag_test},   {"cutoff", c.cutoff},
              {"seed", c.seed},             {"threads", c.threads},     {"out", c.out}};
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  try {
    c.command = j.value("command", c.command);
    c.scenario = j.value("scenario", c.scenario);
    c.scenario_file = j.value("scenario_file", c.scenario_file);
    c.wrap = j.value("wrap", c.wrap);
    c.input = j.value("input", c.input);
    c.months = j.value("months", c.months);
    c.station = j.value("station", c.station);
    c.trials = j.value("trials", c.trials);
    c.restarts = j.value("restarts", c.restarts);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.length = j.value("length", c.length);
    c.replicates = j.value("replicates", c.replicates);
    c.lags = j.value("lags", c.lags);
    c.levels = j.value("levels", c.levels);
    c.radius = j.value("radius", c.radius);
    c.clusters = j.value("clusters", c.clusters);
    c.fuzziness = j.value("fuzziness", c.fuzziness);
    c.m_step = j.value("m_step", c.m_step);
    c.metrics = j.value("metrics", c.metrics);
    c.lag_test = j.value("lag_test", c.lag_test);
    c.cutoff = j.value("cutoff", c.cutoff);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
  } catch (const Json::exception& e) {
    throw InvalidConfig(std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  try {
    return run_config_from_json(Json::parse(read_text(path)));
  } catch (const Json::parse_error& e) {
    throw InvalidConfig("'" + path + "': " + e.what());
  }
}

namespace {

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw InvalidInput("cannot create output directory '" + config.out + "': " + ec.message());
}

std::string out_path(const RunConfig& config, const std::string& name) {
  return (fs::path(config.out) / name).string();
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_manifest(const RunConfig& config, const std::vector<std::string>& outputs) {
  Json manifest = to_json(config);
  manifest["outputs"] = outputs;
  write_json(out_path(config, "manifest.json"), manifest);
}

ScenarioSpec resolve_scenario(const RunConfig& config) {
  ScenarioSpec spec;
  if (!config.scenario_file.empty()) {
    try {
      spec = scenario_from_json(Json::parse(read_text(config.scenario_file)));
    } catch (const Json::parse_error& e) {
      throw InvalidSpec("'" + config.scenario_file + "': " + e.what());
    }
  } else {
    spec = scenario(config.scenario, config.length, wrap_from_string(config.wrap));
  }
  if (!config.lags.empty()) spec.lags = config.lags;
  return spec;
}

std::vector<MetricKind> resolve_metrics(const RunConfig& config, std::vector<MetricKind> fallback) {
  if (config.metrics.empty()) return fallback;
  std::vector<MetricKind> out;
  for (const auto& name : config.metrics) out.push_back(metric_from_string(name));
  return out;
}

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = std::round((first + k * step) * 1e9) / 1e9;
    if (v > last + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

std::string metric_header(const std::vector<MetricKind>& metrics) {
  std::string h = "m";
  for (auto k : metrics) h += "," + std::string(to_string(k));
  return h + "\n";
}

bool truth_is_complete(const std::vector<int>& truth) {
  return !truth.empty() && std::none_of(truth.begin(), truth.end(), [](int l) { return l < 0; });
}

}  // namespace

LabeledInput load_input(const RunConfig& config) {
  LabeledInput out;
  if (config.input.empty()) {
    if (config.scenario == 0 && config.scenario_file.empty()) {
      throw InvalidConfig("an --input file or a --scenario is required");
    }
    const ScenarioSpec spec = resolve_scenario(config);
    Dataset data = build_scenario(spec, config.seed);
    std::vector<int> counters(spec.clusters.size(), 0);
    for (int label : data.labels) {
      out.labels.push_back(label < 0 ? std::string("isolated")
                                     : "C" + std::to_string(label + 1) + "_" +
                                           std::to_string(++counters[static_cast<std::size_t>(label)]));
    }
    out.series = std::move(data.series);
    out.truth = std::move(data.labels);
    return out;
  }

  std::ifstream probe(config.input);
  if (!probe) throw InvalidInput("cannot open '" + config.input + "'");
  std::string header;
  std::getline(probe, header);
  if (header.find("direction_deg") == std::string::npos) {
    LabeledDataset data = read_series_csv(config.input);
    out.labels = std::move(data.labels);
    out.series = std::move(data.series);
    return out;
  }

  WindIngest ingest = ingest_wind_csv(config.input);
  Json report{{"rows_in", ingest.rows_in},
              {"accepted", ingest.accepted},
              {"rejected", ingest.rejected},
              {"duplicates_replaced", ingest.duplicates_replaced}};
  report["errors"] = Json::array();
  for (const auto& e : ingest.errors) report["errors"].push_back({{"line", e.line}, {"message", e.message}});
  out.warnings = ingest.warnings;

  if (ingest.stations.empty()) throw InvalidInput("'" + config.input + "' contains no valid rows");
  std::string station = config.station;
  if (station.empty()) {
    if (ingest.stations.size() > 1) {
      throw InvalidConfig("input holds several stations; choose one with --station");
    }
    station = ingest.stations.begin()->first;
  }
  const auto it = ingest.stations.find(station);
  if (it == ingest.stations.end()) throw InvalidConfig("station '" + station + "' not found in input");

  MonthFilter filter;
  if (config.months == "winter-summer") {
    filter = MonthFilter::WinterSummer;
  } else if (config.months == "all") {
    filter = MonthFilter::All;
  } else {
    throw InvalidConfig("--months must be 'winter-summer' or 'all'");
  }
  MonthlySplit split = monthly_split(it->second, filter);
  out.warnings.insert(out.warnings.end(), split.warnings.begin(), split.warnings.end());
  for (auto& month : split.months) {
    out.labels.push_back(month.label);
    out.series.push_back(std::move(month.series));
    if (filter == MonthFilter::WinterSummer) out.truth.push_back(is_winter_month(month.month) ? 0 : 1);
  }
  report["station"] = station;
  report["series"] = out.labels.size();
  report["warnings"] = out.warnings;
  out.ingest_report = std::move(report);
  return out;
}

SimulationReport cmd_simulate(const RunConfig& config) {
  SimulationConfig sim;
  sim.scenario = resolve_scenario(config);
  sim.trials = config.trials;
  sim.restarts = config.restarts;
  sim.max_iter = config.max_iter;
  sim.levels = config.levels;
  sim.cutoff = config.cutoff;
  sim.seed = config.seed;
  sim.threads = config.threads;
  sim.metrics = resolve_metrics(config, sim.metrics);
  if (!config.radius.empty()) sim.radii = config.radius;
  if (!config.fuzziness.empty()) {
    sim.fuzziness = config.fuzziness;
  } else if (sim.scenario.isolated) {
    sim.fuzziness = fuzziness_grid(1.0, 4.0, config.m_step);
  }

  SimulationReport report = run_simulation(sim);

  prepare_output(config);
  std::vector<std::string> outputs;
  if (report.cutoff_mode) {
    std::ostringstream rates, summary;
    rates << metric_header(sim.metrics);
    for (std::size_t f = 0; f < sim.fuzziness.size(); ++f) {
      rates << format_number(sim.fuzziness[f]);
      for (const auto& curve : report.rates) rates << ',' << format_number(curve.curve.rates[f]);
      rates << '\n';
    }
    summary << "metric,maximum,aufc\n";
    Json j = Json::object();
    for (const auto& curve : report.rates) {
      const std::string name(to_string(curve.metric));
      summary << name << ',' << format_number(curve.maximum) << ',' << format_number(curve.area) << '\n';
      j[name] = {{"Maximum", curve.maximum}, {"AUFC", curve.area}, {"successes", curve.successes}};
    }
    write_text(out_path(config, "rates.csv"), rates.str());
    write_text(out_path(config, "summary.csv"), summary.str());
    write_json(out_path(config, "summary.json"), j);
    outputs = {"rates.csv", "summary.csv", "summary.json"};
  } else {
    std::ostringstream arif_table, jif_table, cells, trials;
    arif_table << metric_header(sim.metrics);
    jif_table << metric_header(sim.metrics);
    cells << "metric,m,arif_mean,arif_sd,jif_mean,jif_sd,arif_self_pairs_mean\n";
    trials << "trial,metric,m,arif,jif,radius\n";
    const std::size_t F = sim.fuzziness.size();
    for (std::size_t f = 0; f < F; ++f) {
      arif_table << format_number(sim.fuzziness[f]);
      jif_table << format_number(sim.fuzziness[f]);
      for (std::size_t k = 0; k < sim.metrics.size(); ++k) {
        const IndexCell& cell = report.indices[k * F + f];
        arif_table << ',' << format_number(cell.arif_mean);
        jif_table << ',' << format_number(cell.jif_mean);
      }
      arif_table << '\n';
      jif_table << '\n';
    }
    for (const auto& cell : report.indices) {
      const std::string name(to_string(cell.metric));
      cells << name << ',' << format_number(cell.fuzziness) << ',' << format_number(cell.arif_mean) << ','
            << format_number(cell.arif_sd) << ',' << format_number(cell.jif_mean) << ','
            << format_number(cell.jif_sd) << ',' << format_number(cell.arif_self_mean) << '\n';
      for (std::size_t t = 0; t < cell.arif.size(); ++t) {
        trials << t << ',' << name << ',' << format_number(cell.fuzziness) << ',' << format_number(cell.arif[t])
               << ',' << format_number(cell.jif[t]) << ','
               << (cell.radius.empty() ? std::string() : format_number(cell.radius[t])) << '\n';
      }
    }
    write_text(out_path(config, "arif.csv"), arif_table.str());
    write_text(out_path(config, "jif.csv"), jif_table.str());
    write_text(out_path(config, "indices.csv"), cells.str());
    write_text(out_path(config, "trials.csv"), trials.str());
    outputs = {"arif.csv", "jif.csv", "indices.csv", "trials.csv"};
  }
  write_json(out_path(config, "scenario.json"), to_json(sim.scenario));
  outputs.push_back("scenario.json");
  RunConfig recorded = config;
  recorded.command = "simulate";
  write_manifest(recorded, outputs);
  return report;
}

ClusterRun cmd_cluster(const RunConfig& config) {
  LabeledInput input = load_input(config);
  const MetricKind metric = resolve_metrics(config, {MetricKind::CQA}).front();

  std::vector<std::vector<int>> lag_sets;
  if (!config.lags.empty()) {
    lag_sets.push_back(config.lags);
  } else if (config.lag_test) {
    LagTestConfig test;
    test.max_lag = 10;
    test.seed = config.seed;
    lag_sets.push_back(select_lags(input.series, test));
  } else {
    std::size_t shortest = input.series.front().size();
    for (const auto& s : input.series) shortest = std::min(shortest, s.size());
    for (std::vector<int> set : {std::vector<int>{1}, std::vector<int>{1, 2},
                                 std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}) {
      if (static_cast<std::size_t>(set.back()) + 2 <= shortest) lag_sets.push_back(set);
    }
    if (lag_sets.empty()) throw InvalidInput("series are too short for lag 1");
  }

  HyperGrid hyper;
  hyper.clusters = config.clusters.empty() ? std::vector<int>{2} : config.clusters;
  hyper.fuzziness = config.fuzziness.empty() ? grid(1.1, 2.0, 0.1) : config.fuzziness;
  if (metric == MetricKind::CQA) {
    hyper.radii = config.radius.empty() ? default_radius_grid() : config.radius;
  } else {
    hyper.radii = {0.0};
  }

  ClusterConfig base;
  base.restarts = config.restarts;
  base.max_iter = config.max_iter;
  base.seed = config.seed;

  ClusterRun run;
  std::ostringstream selection;
  selection << "lags,clusters,fuzziness,radius,xie_beni\n";
  bool first = true;
  for (const auto& lags : lag_sets) {
    std::vector<DissimilarityMatrix> matrices;
    if (metric == MetricKind::CQA) {
      matrices = cqa_matrices(input.series, lags, config.levels, hyper.radii, config.threads);
    } else {
      MetricParams params{metric, lags, config.levels, 0.0};
      matrices.push_back(pairwise_matrix(input.series, params, config.threads));
    }
    HyperSelection chosen = select_hyperparameters(matrices, hyper, base, config.threads);
    std::string lag_text;
    for (int l : lags) lag_text += (lag_text.empty() ? "" : " ") + std::to_string(l);
    for (const auto& cand : chosen.evaluated) {
      selection << lag_text << ',' << cand.clusters << ',' << format_number(cand.fuzziness) << ','
                << format_number(cand.radius) << ',' << format_number(cand.xie_beni) << '\n';
    }
    if (first || chosen.best.xie_beni < run.xie_beni) {
      first = false;
      run.partition = std::move(chosen.partition);
      run.clusters = chosen.best.clusters;
      run.fuzziness = chosen.best.fuzziness;
      run.xie_beni = chosen.best.xie_beni;
      run.params = MetricParams{metric, lags, config.levels, chosen.best.radius};
    }
  }
  run.labels = input.labels;
  run.truth = input.truth;

  prepare_output(config);
  std::vector<std::string> outputs{"memberships.csv", "partition.json", "selection.csv"};
  write_text(out_path(config, "memberships.csv"), membership_csv(run.partition, run.labels));
  write_text(out_path(config, "selection.csv"), selection.str());

  ClusterConfig chosen = base;
  chosen.clusters = run.clusters;
  chosen.fuzziness = run.fuzziness;
  Json summary = to_json(run.partition, chosen);
  summary["metric"] = std::string(to_string(metric));
  summary["lags"] = run.params.lags;
  summary["levels"] = run.params.levels;
  if (metric == MetricKind::CQA) summary["radius"] = run.params.radius;
  summary["clusters"] = run.clusters;
  summary["fuzziness"] = run.fuzziness;
  summary["xie_beni"] = run.xie_beni;
  summary["labels"] = run.labels;
  summary["medoid_labels"] = Json::array();
  for (std::size_t m : run.partition.medoids) summary["medoid_labels"].push_back(run.labels[m]);
  if (truth_is_complete(run.truth)) {
    const GroundTruth truth{run.truth};
    summary["arif"] = arif(run.partition.memberships, truth);
    summary["jif"] = jif(run.partition.memberships, truth);
  }
  write_json(out_path(config, "partition.json"), summary);

  if (metric == MetricKind::CQA) {
    for (std::size_t c = 0; c < run.partition.medoids.size(); ++c) {
      const auto& medoid = input.series[run.partition.medoids[c]];
      const std::string name = "medoid_C" + std::to_string(c + 1) + "_fingerprint.csv";
      write_text(out_path(config, name),
                 fingerprint_csv(cqa_features(medoid, run.params.lags, run.params.levels, run.params.radius)));
      outputs.push_back(name);
    }
  }
  if (!input.ingest_report.is_null()) {
    write_json(out_path(config, "ingest_report.json"), input.ingest_report);
    outputs.push_back("ingest_report.json");
  }
  RunConfig recorded = config;
  recorded.command = "cluster";
  write_manifest(recorded, outputs);
  for (const auto& w : input.warnings) std::cerr << "warning: " << w << '\n';
  return run;
}

Embedding2D cmd_mds(const RunConfig& config) {
  LabeledInput input = load_input(config);
  MetricParams params;
  params.kind = resolve_metrics(config, {MetricKind::CQA}).front();
  params.lags = config.lags.empty() ? std::vector<int>{1} : config.lags;
  params.levels = config.levels;
  params.radius = config.radius.empty() ? 1.0 : config.radius.front();
  const DissimilarityMatrix dist = pairwise_matrix(input.series, params, config.threads);
  MdsOptions options;
  options.seed = config.seed;
  const Embedding2D embedding = mds_2d(dist, options);

  prepare_output(config);
  write_text(out_path(config, "coordinates.csv"), coordinates_csv(embedding, input.labels));
  write_text(out_path(config, "dissimilarity.csv"), matrix_csv(dist.values));
  write_json(out_path(config, "dissimilarity.json"), to_json(dist));
  write_json(out_path(config, "mds.json"), Json{{"stress", embedding.stress},
                                                {"r_squared", embedding.r_squared},
                                                {"iterations", embedding.iterations},
                                                {"stress_history", embedding.stress_history},
                                                {"metric", std::string(to_string(params.kind))},
                                                {"lags", params.lags},
                                                {"levels", params.levels},
                                                {"radius", params.radius}});
  RunConfig recorded = config;
  recorded.command = "mds";
  write_manifest(recorded, {"coordinates.csv", "dissimilarity.csv", "dissimilarity.json", "mds.json"});
  for (const auto& w : input.warnings) std::cerr << "warning: " << w << '\n';
  return embedding;
}

MotivatingResult cmd_motivating(const RunConfig& config) {
  const std::vector<double> radii = config.radius.empty() ? grid(0.1, 3.1, 0.1) : config.radius;
  const MotivatingResult result =
      motivating_example(config.length, config.replicates, radii, config.seed, config.threads);

  prepare_output(config);
  std::ostringstream table;
  table << "distance,radius,mean,sd,q05,q95\n";
  auto row = [&](const DistanceSummary& s, bool with_radius) {
    table << s.distance << ',' << (with_radius ? format_number(s.radius) : std::string()) << ','
          << format_number(s.mean) << ',' << format_number(s.sd) << ',' << format_number(s.q05) << ','
          << format_number(s.q95) << '\n';
  };
  for (const auto& s : result.cqa_by_radius) row(s, true);
  row(result.fl, false);
  row(result.js, false);
  write_text(out_path(config, "motivating.csv"), table.str());
  RunConfig recorded = config;
  recorded.command = "motivating";
  write_manifest(recorded, {"motivating.csv"});
  return result;
}

}  // namespace cqa
