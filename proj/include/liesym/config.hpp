#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "liesym/experiments.hpp"
#include "liesym/serialize.hpp"

namespace liesym {

/// Sampling section: cube bounds, point count (default: certified or 4 N dim G) and seed.
struct SamplingConfig {
  std::optional<Index> num_points;
  double lower = -1.0;
  double upper = 1.0;
  std::uint64_t seed = 0;
};

/// One parsed run configuration. Paths are resolved against the config file's directory.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<GroupDescriptor> group;
  std::optional<DictionaryDescriptor> dictionary;
  SamplingConfig sampling;
  SolverOptions solver;
  RankCutoff cutoff;
  std::string input_action = "identity";  ///< "identity" | "spring-mass"
  std::string output_action = "trivial";  ///< "trivial" | "linear"
  int num_particles = 5;

  // discover
  std::string source = "model";  ///< "model" | "pointcloud" | "system-matrix"
  std::optional<VectorXd> coefficients;
  std::filesystem::path model_file;
  std::filesystem::path points_csv;
  std::filesystem::path matrix_csv;
  int intrinsic_dim = 1;
  int neighbors = 0;

  // fit
  std::filesystem::path data_csv;
  std::vector<double> gamma_grid;

  PolyRecoveryConfig poly_recovery;
  SpringMassConfig spring_mass;

  Json raw;
  std::string hash;
};

/// 16 hex digits of FNV-1a over the compact dump of the document.
std::string config_hash(const Json& document);

/// Validates the document against the schema of its "command"; throws ConfigError.
RunConfig parse_config(const Json& document, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Numeric CSV with an optional header line; rows become matrix rows.
/// Errors name the file and line.
MatrixXd read_csv_matrix(const std::filesystem::path& path);

}  // namespace liesym
