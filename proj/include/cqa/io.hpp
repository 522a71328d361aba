#pragma once

// CSV and JSON serialization of datasets, matrices, partitions, embeddings and
// scenario specifications.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "cqa/clustering.hpp"
#include "cqa/dependence.hpp"
#include "cqa/embedding.hpp"
#include "cqa/simulation.hpp"

namespace cqa {

using Json = nlohmann::json;

/// Shortest decimal that round-trips the double.
std::string format_number(double value);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// One series per row: label, then angles in radians.
void write_series_csv(const std::string& path, const std::vector<CircularSeries>& series,
                      const std::vector<std::string>& labels);
struct LabeledDataset {
  std::vector<std::string> labels;
  std::vector<CircularSeries> series;
};
LabeledDataset read_series_csv(const std::string& path);

/// n rows of n comma-separated decimals.
std::string matrix_csv(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

/// {kind, lags, levels, radius, values (row-major rows)}.
Json to_json(const DissimilarityMatrix& matrix);
DissimilarityMatrix dissimilarity_from_json(const Json& j);

/// Columns: series, C1..CC, medoid_of. medoid_of holds the cluster number
/// (1-based) when the series is that cluster's medoid and is empty otherwise.
std::string membership_csv(const FuzzyPartition& partition, const std::vector<std::string>& labels);

/// Columns: index, a, b, label.
std::string coordinates_csv(const Embedding2D& embedding, const std::vector<std::string>& labels);

/// Columns: lag, tau, tau_prime, value.
std::string fingerprint_csv(const CQAFeatures& features);

Json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const Json& j);
Json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const Json& j);

/// {memberships (row-major rows), medoids, objective, iterations, converged, config}.
Json to_json(const FuzzyPartition& partition, const ClusterConfig& config);

}  // namespace cqa
