#include "liesym/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "liesym/error.hpp"

namespace liesym {

std::string config_hash(const Json& document) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : document.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const std::set<std::string> kCommands{"discover", "enforce", "fit", "exp-polyrec", "exp-springmass"};
const std::set<std::string> kCommon{"command", "seed", "workers", "group", "dictionary", "sampling", "solver",
                                    "cutoff", "action"};

std::set<std::string> command_keys(const std::string& command) {
  if (command == "discover")
    return {"source", "coefficients", "model_file", "points_csv", "matrix_csv", "intrinsic_dim", "neighbors",
            "num_particles"};
  if (command == "fit") return {"data_csv", "gamma", "gamma_grid", "num_particles"};
  if (command == "exp-polyrec") return {"family", "n", "r", "phi_degree", "trials", "tolerance"};
  if (command == "exp-springmass")
    return {"num_particles", "train_trajectories", "train_samples", "train_dt", "gamma_grid", "l1_gamma_grid",
            "mse_threshold", "test_trajectories", "test_horizon", "test_dt"};
  return {};
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

template <class T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("key '" + (where.empty() ? std::string(key) : where + "." + key) + "' has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
}

}  // namespace

RunConfig parse_config(const Json& document, const std::filesystem::path& base_dir) {
  if (!document.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  cfg.raw = document;
  cfg.hash = config_hash(document);
  if (!document.contains("command")) throw ConfigError("missing key 'command'");
  read(document, "command", cfg.command, "");
  if (!kCommands.count(cfg.command)) throw ConfigError("unknown command '" + cfg.command + "'");
  std::set<std::string> allowed = kCommon;
  allowed.merge(command_keys(cfg.command));
  check_keys(document, allowed, "");

  read(document, "seed", cfg.seed, "");
  read(document, "workers", cfg.workers, "");
  if (cfg.workers < 1) throw ConfigError("'workers' must be at least 1");
  try {
    if (document.contains("group")) cfg.group = group_from_json(document.at("group"));
    if (document.contains("dictionary")) cfg.dictionary = dictionary_from_json(document.at("dictionary"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed group or dictionary: ") + e.what());
  }

  cfg.sampling.seed = cfg.seed;
  if (document.contains("sampling")) {
    const Json& s = document.at("sampling");
    check_keys(s, {"num_points", "lower", "upper", "seed"}, "sampling");
    Index m = 0;
    read(s, "num_points", m, "sampling");
    if (s.contains("num_points")) {
      if (m < 1) throw ConfigError("'sampling.num_points' must be positive");
      cfg.sampling.num_points = m;
    }
    read(s, "lower", cfg.sampling.lower, "sampling");
    read(s, "upper", cfg.sampling.upper, "sampling");
    read(s, "seed", cfg.sampling.seed, "sampling");
    if (!(cfg.sampling.lower < cfg.sampling.upper)) throw ConfigError("'sampling.lower' must be below 'sampling.upper'");
  }
  if (document.contains("solver")) {
    const Json& s = document.at("solver");
    check_keys(s, {"rho", "max_iter", "abs_tol", "rel_tol", "adaptive_rho", "monotone"}, "solver");
    read(s, "rho", cfg.solver.rho, "solver");
    read(s, "max_iter", cfg.solver.max_iter, "solver");
    read(s, "abs_tol", cfg.solver.abs_tol, "solver");
    read(s, "rel_tol", cfg.solver.rel_tol, "solver");
    read(s, "adaptive_rho", cfg.solver.adaptive_rho, "solver");
    read(s, "monotone", cfg.solver.monotone, "solver");
    require_positive(cfg.solver.rho, "solver.rho");
    if (cfg.solver.max_iter < 1) throw ConfigError("'solver.max_iter' must be at least 1");
  }
  if (document.contains("cutoff")) {
    const Json& c = document.at("cutoff");
    check_keys(c, {"relative", "absolute"}, "cutoff");
    read(c, "relative", cfg.cutoff.relative, "cutoff");
    if (c.contains("absolute")) {
      double a = 0.0;
      read(c, "absolute", a, "cutoff");
      cfg.cutoff.absolute = a;
    }
  }
  if (document.contains("action")) {
    const Json& a = document.at("action");
    check_keys(a, {"input", "output"}, "action");
    read(a, "input", cfg.input_action, "action");
    read(a, "output", cfg.output_action, "action");
    if (cfg.input_action != "identity" && cfg.input_action != "spring-mass")
      throw ConfigError("'action.input' must be 'identity' or 'spring-mass'");
    if (cfg.output_action != "trivial" && cfg.output_action != "linear")
      throw ConfigError("'action.output' must be 'trivial' or 'linear'");
  }
  read(document, "num_particles", cfg.num_particles, "");
  if (cfg.num_particles < 2) throw ConfigError("'num_particles' must be at least 2");

  if (cfg.command == "discover") {
    read(document, "source", cfg.source, "");
    if (cfg.source != "model" && cfg.source != "pointcloud" && cfg.source != "system-matrix")
      throw ConfigError("'source' must be 'model', 'pointcloud' or 'system-matrix'");
    if (document.contains("coefficients")) {
      std::vector<double> c;
      read(document, "coefficients", c, "");
      cfg.coefficients = Eigen::Map<const VectorXd>(c.data(), static_cast<Index>(c.size()));
    }
    std::string path;
    if (document.contains("model_file")) {
      read(document, "model_file", path, "");
      cfg.model_file = resolve(base_dir, path);
    }
    if (document.contains("points_csv")) {
      read(document, "points_csv", path, "");
      cfg.points_csv = resolve(base_dir, path);
    }
    if (document.contains("matrix_csv")) {
      read(document, "matrix_csv", path, "");
      cfg.matrix_csv = resolve(base_dir, path);
    }
    read(document, "intrinsic_dim", cfg.intrinsic_dim, "");
    read(document, "neighbors", cfg.neighbors, "");
    if (cfg.source == "model" && !cfg.coefficients && cfg.model_file.empty())
      throw ConfigError("source 'model' needs 'coefficients' or 'model_file'");
    if (cfg.source == "pointcloud" && cfg.points_csv.empty()) throw ConfigError("source 'pointcloud' needs 'points_csv'");
    if (cfg.source == "system-matrix" && cfg.matrix_csv.empty())
      throw ConfigError("source 'system-matrix' needs 'matrix_csv'");
    if (cfg.source != "system-matrix" && !cfg.group) throw ConfigError("missing key 'group'");
    if (cfg.source == "model" && !cfg.dictionary) throw ConfigError("missing key 'dictionary'");
    if (cfg.intrinsic_dim < 1) throw ConfigError("'intrinsic_dim' must be at least 1");
  } else if (cfg.command == "enforce") {
    if (!cfg.group) throw ConfigError("missing key 'group'");
    if (!cfg.dictionary) throw ConfigError("missing key 'dictionary'");
  } else if (cfg.command == "fit") {
    std::string path;
    if (!document.contains("data_csv")) throw ConfigError("missing key 'data_csv'");
    read(document, "data_csv", path, "");
    cfg.data_csv = resolve(base_dir, path);
    if (document.contains("gamma") && document.contains("gamma_grid"))
      throw ConfigError("give either 'gamma' or 'gamma_grid', not both");
    double gamma = 0.0;
    read(document, "gamma", gamma, "");
    read(document, "gamma_grid", cfg.gamma_grid, "");
    if (cfg.gamma_grid.empty()) cfg.gamma_grid.push_back(gamma);
    for (double g : cfg.gamma_grid)
      if (g < 0.0) throw ConfigError("gamma values must be nonnegative");
    if (cfg.input_action == "identity" && (!cfg.group || !cfg.dictionary))
      throw ConfigError("fit needs 'group' and 'dictionary' unless action.input is 'spring-mass'");
  } else if (cfg.command == "exp-polyrec") {
    PolyRecoveryConfig& p = cfg.poly_recovery;
    read(document, "family", p.family, "");
    read(document, "n", p.n, "");
    read(document, "r", p.r, "");
    read(document, "phi_degree", p.phi_degree, "");
    read(document, "trials", p.trials, "");
    read(document, "tolerance", p.tolerance, "");
    if (p.family != "lin" && p.family != "rad") throw ConfigError("'family' must be 'lin' or 'rad'");
    if (p.n < 1 || p.n > 6) throw ConfigError("'n' must lie in [1, 6]");
    if (p.r < 1 || p.r > p.n) throw ConfigError("'r' must lie in [1, n]");
    if (p.phi_degree < 0) throw ConfigError("'phi_degree' must be nonnegative");
    if (p.trials < 1) throw ConfigError("'trials' must be at least 1");
    require_positive(p.tolerance, "tolerance");
    p.group = cfg.group.value_or(GroupDescriptor{GroupKind::T, p.n, {}});
    p.seed = cfg.seed;
    p.workers = cfg.workers;
    p.solver = cfg.solver;
  } else if (cfg.command == "exp-springmass") {
    SpringMassConfig& s = cfg.spring_mass;
    s.num_particles = cfg.num_particles;
    read(document, "train_trajectories", s.train_trajectories, "");
    read(document, "train_samples", s.train_samples, "");
    read(document, "train_dt", s.train_dt, "");
    read(document, "gamma_grid", s.gamma_grid, "");
    read(document, "l1_gamma_grid", s.l1_gamma_grid, "");
    read(document, "mse_threshold", s.mse_threshold, "");
    read(document, "test_trajectories", s.test_trajectories, "");
    read(document, "test_horizon", s.test_horizon, "");
    read(document, "test_dt", s.test_dt, "");
    if (s.train_trajectories < 1 || s.train_samples < 2) throw ConfigError("training data needs at least one trajectory of two samples");
    if (s.test_trajectories < 1) throw ConfigError("'test_trajectories' must be at least 1");
    require_positive(s.train_dt, "train_dt");
    require_positive(s.test_dt, "test_dt");
    require_positive(s.test_horizon, "test_horizon");
    require_positive(s.mse_threshold, "mse_threshold");
    s.seed = cfg.seed;
    s.workers = cfg.workers;
    s.solver = cfg.solver;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string t = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(rows.front().size()) + " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path.string() + ": no data rows");
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace liesym
