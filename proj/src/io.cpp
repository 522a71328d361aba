#include "cqa/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cqa/errors.hpp"

namespace cqa {

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw InvalidInput("cannot format number");
  return std::string(buffer, ptr);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("error while writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_series_csv(const std::string& path, const std::vector<CircularSeries>& series,
                      const std::vector<std::string>& labels) {
  if (labels.size() != series.size()) throw InvalidInput("one label per series is required");
  std::ostringstream out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << labels[i];
    for (double v : series[i].values()) out << ',' << format_number(v);
    out << '\n';
  }
  write_text(path, out.str());
}

LabeledDataset read_series_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  LabeledDataset out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    out.labels.push_back(cell);
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw InvalidInput(path + ":" + std::to_string(line_no) + ": unparseable value '" + cell + "'");
      }
      values.push_back(v);
    }
    if (values.size() < 2) {
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": a series needs at least 2 values");
    }
    out.series.emplace_back(std::move(values));
  }
  if (out.series.empty()) throw InvalidInput("'" + path + "' contains no series");
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& matrix) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) out << (j ? "," : "") << format_number(matrix(i, j));
    out << '\n';
  }
  return out.str();
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) throw InvalidInput("matrix: unparseable '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw InvalidInput("matrix: ragged rows");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

namespace {

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const Json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index cols = n == 0 ? 0 : static_cast<Eigen::Index>(rows.at(0).size());
  Eigen::MatrixXd out(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw InvalidInput("matrix: ragged rows");
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return out;
}

}  // namespace

Json to_json(const DissimilarityMatrix& matrix) {
  return Json{{"kind", std::string(to_string(matrix.params.kind))},
              {"lags", matrix.params.lags},
              {"levels", matrix.params.levels},
              {"radius", matrix.params.radius},
              {"values", matrix_rows(matrix.values)}};
}

DissimilarityMatrix dissimilarity_from_json(const Json& j) {
  try {
    DissimilarityMatrix out;
    out.params.kind = metric_from_string(j.at("kind").get<std::string>());
    out.params.lags = j.at("lags").get<std::vector<int>>();
    out.params.levels = j.at("levels").get<std::vector<double>>();
    out.params.radius = j.value("radius", 0.0);
    out.values = rows_matrix(j.at("values"));
    if (out.values.rows() != out.values.cols()) throw InvalidInput("dissimilarity matrix must be square");
    return out;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("dissimilarity matrix: ") + e.what());
  }
}

std::string membership_csv(const FuzzyPartition& partition, const std::vector<std::string>& labels) {
  if (partition.size() != labels.size()) throw InvalidInput("membership label count mismatch");
  std::ostringstream out;
  out << "series";
  for (int c = 1; c <= partition.clusters(); ++c) out << ",C" << c;
  out << ",medoid_of\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i];
    for (int c = 0; c < partition.clusters(); ++c) {
      out << ',' << format_number(partition.memberships(static_cast<Eigen::Index>(i), c));
    }
    out << ',';
    for (std::size_t c = 0; c < partition.medoids.size(); ++c) {
      if (partition.medoids[c] == i) out << c + 1;
    }
    out << '\n';
  }
  return out.str();
}

std::string coordinates_csv(const Embedding2D& embedding, const std::vector<std::string>& labels) {
  if (static_cast<std::size_t>(embedding.points.rows()) != labels.size()) {
    throw InvalidInput("coordinate label count mismatch");
  }
  std::ostringstream out;
  out << "index,a,b,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    out << i << ',' << format_number(embedding.points(row, 0)) << ','
        << format_number(embedding.points(row, 1)) << ',' << labels[i] << '\n';
  }
  return out.str();
}

std::string fingerprint_csv(const CQAFeatures& f) {
  std::ostringstream out;
  out << "lag,tau,tau_prime,value\n";
  for (std::size_t k = 0; k < f.lags.size(); ++k) {
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
      for (std::size_t j = 0; j < f.levels.size(); ++j) {
        out << f.lags[k] << ',' << format_number(f.levels[i]) << ',' << format_number(f.levels[j]) << ','
            << format_number(f.at(k, i, j)) << '\n';
      }
    }
  }
  return out.str();
}

namespace {

const char* family_name(GeneratorFamily f) {
  switch (f) {
    case GeneratorFamily::ARMA: return "ARMA";
    case GeneratorFamily::QAR: return "QAR";
    case GeneratorFamily::GARCH: return "GARCH";
    case GeneratorFamily::WN: return "WN";
  }
  return "WN";
}

GeneratorFamily family_from_name(const std::string& name) {
  if (name == "ARMA") return GeneratorFamily::ARMA;
  if (name == "QAR") return GeneratorFamily::QAR;
  if (name == "GARCH") return GeneratorFamily::GARCH;
  if (name == "WN") return GeneratorFamily::WN;
  throw InvalidSpec("unknown generator family '" + name + "'");
}

}  // namespace

Json to_json(const GeneratorSpec& spec) {
  Json j;
  j["family"] = family_name(spec.family);
  j["burn_in"] = spec.burn_in;
  switch (spec.family) {
    case GeneratorFamily::ARMA:
      j["ar"] = spec.ar;
      j["ma"] = spec.ma;
      break;
    case GeneratorFamily::QAR:
      j["qar"] = Json::array();
      for (const auto& t : spec.qar) j["qar"].push_back({{"slope", t.slope}, {"offset", t.offset}});
      break;
    case GeneratorFamily::GARCH:
      j["omega"] = spec.garch_omega;
      j["alpha"] = spec.garch_alpha;
      j["beta"] = spec.garch_beta;
      break;
    case GeneratorFamily::WN:
      break;
  }
  return j;
}

GeneratorSpec generator_from_json(const Json& j) {
  try {
    GeneratorSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.burn_in = j.value("burn_in", 500);
    switch (spec.family) {
      case GeneratorFamily::ARMA:
        spec.ar = j.value("ar", std::vector<double>{});
        spec.ma = j.value("ma", std::vector<double>{});
        break;
      case GeneratorFamily::QAR:
        for (const auto& t : j.at("qar")) spec.qar.push_back({t.at("slope").get<double>(), t.at("offset").get<double>()});
        break;
      case GeneratorFamily::GARCH:
        spec.garch_omega = j.at("omega").get<double>();
        spec.garch_alpha = j.value("alpha", std::vector<double>{});
        spec.garch_beta = j.value("beta", std::vector<double>{});
        break;
      case GeneratorFamily::WN:
        break;
    }
    validate(spec);
    return spec;
  } catch (const Json::exception& e) {
    throw InvalidSpec(std::string("generator spec: ") + e.what());
  }
}

Json to_json(const ScenarioSpec& spec) {
  Json j;
  j["id"] = spec.id;
  j["length"] = spec.length;
  j["wrap"] = to_string(spec.wrap_kind);
  j["lags"] = spec.lags;
  j["clusters"] = Json::array();
  for (const auto& block : spec.clusters) {
    j["clusters"].push_back({{"count", block.count}, {"generator", to_json(block.generator)}});
  }
  if (spec.isolated) j["isolated"] = to_json(*spec.isolated);
  return j;
}

ScenarioSpec scenario_from_json(const Json& j) {
  try {
    ScenarioSpec spec;
    spec.id = j.value("id", std::string("custom"));
    spec.length = j.value("length", 500);
    spec.wrap_kind = wrap_from_string(j.value("wrap", std::string("mod")));
    spec.lags = j.value("lags", std::vector<int>{1});
    for (const auto& block : j.at("clusters")) {
      spec.clusters.push_back({generator_from_json(block.at("generator")), block.value("count", 5)});
      if (spec.clusters.back().count < 1) throw InvalidSpec("cluster series counts must be positive");
    }
    if (spec.clusters.empty()) throw InvalidSpec("scenario needs at least one cluster block");
    if (j.contains("isolated") && !j["isolated"].is_null()) spec.isolated = generator_from_json(j["isolated"]);
    return spec;
  } catch (const Json::exception& e) {
    throw InvalidSpec(std::string("scenario spec: ") + e.what());
  }
}

Json to_json(const FuzzyPartition& partition, const ClusterConfig& config) {
  return Json{{"memberships", matrix_rows(partition.memberships)},
              {"medoids", partition.medoids},
              {"objective", partition.objective},
              {"iterations", partition.iterations},
              {"converged", partition.converged},
              {"config",
               {{"clusters", config.clusters},
                {"fuzziness", config.fuzziness},
                {"max_iter", config.max_iter},
                {"restarts", config.restarts},
                {"seed", config.seed}}}};
}

}  // namespace cqa
