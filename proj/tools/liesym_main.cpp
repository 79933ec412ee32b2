#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "liesym/config.hpp"
#include "liesym/discover.hpp"
#include "liesym/dynamics.hpp"
#include "liesym/enforce.hpp"
#include "liesym/error.hpp"
#include "liesym/experiments.hpp"
#include "liesym/serialize.hpp"

namespace fs = std::filesystem;
using namespace liesym;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

/// Single writer for one run directory.
class RunWriter {
 public:
  RunWriter(const fs::path& out, const RunConfig& cfg) : dir_(out / cfg.hash), cfg_(cfg) {
    fs::create_directories(dir_);
  }

  Json provenance() const {
    return Json{{"config_hash", cfg_.hash},
                {"seed", cfg_.seed},
                {"command", cfg_.command},
                {"version", LIESYM_VERSION},
                {"config", cfg_.raw}};
  }

  void json(const std::string& name, Json body) const {
    Json doc{{"provenance", provenance()}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    std::ofstream(dir_ / name) << std::setw(2) << doc << '\n';
  }

  std::ofstream csv(const std::string& name) const {
    std::ofstream os(dir_ / name);
    os << "# config_hash=" << cfg_.hash << " seed=" << cfg_.seed << " version=" << LIESYM_VERSION << '\n'
       << std::setprecision(17);
    return os;
  }

  void matrix_csv(const std::string& name, const MatrixXd& m) const {
    auto os = csv(name);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
      os << '\n';
    }
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  const RunConfig& cfg_;
};

CubeDomain domain_of(const RunConfig& cfg, int m) {
  return {VectorXd::Constant(m, cfg.sampling.lower), VectorXd::Constant(m, cfg.sampling.upper)};
}

ActionPair make_pair(const RunConfig& cfg, const MatrixLieGroup& group, const Dictionary& dict) {
  const Representation in = cfg.input_action == "spring-mass" ? spring_mass_representation(group, cfg.num_particles)
                                                              : Representation::identity(group);
  if (in.space_dim() != dict.input_dim()) throw ConfigError("dictionary input dimension does not match the action");
  if (cfg.output_action == "linear") {
    Representation out = Representation::linear_part(in);
    if (out.dim() != dict.output_dim()) throw ConfigError("dictionary output dimension does not match the action");
    return ActionPair(in, out);
  }
  return ActionPair(in, Representation::trivial(group, dict.output_dim()));
}

SampledInnerProduct make_inner(const RunConfig& cfg, const ActionPair& pair, const Dictionary& dict) {
  const Index m = cfg.sampling.num_points.value_or(default_sample_count(pair, dict));
  return build_inner_product(domain_of(cfg, static_cast<int>(dict.input_dim())), m, cfg.sampling.seed);
}

void write_spectrum(const RunWriter& w, const VectorXd& s, double threshold) {
  auto os = w.csv("spectrum.csv");
  os << "index,singular_value,below_cutoff\n";
  for (Index i = 0; i < s.size(); ++i) os << i << ',' << s[i] << ',' << (s[i] <= threshold ? 1 : 0) << '\n';
}

VectorXd model_coefficients(const RunConfig& cfg) {
  if (cfg.coefficients) return *cfg.coefficients;
  std::ifstream in(cfg.model_file);
  if (!in) throw ConfigError("cannot open model file '" + cfg.model_file.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(cfg.model_file.string() + ": " + e.what());
  }
  if (doc.contains("fit")) return vector_from_json(doc.at("fit").at("coefficients"));
  if (doc.contains("coefficients")) return vector_from_json(doc.at("coefficients"));
  throw ConfigError(cfg.model_file.string() + ": no 'coefficients' entry");
}

int cmd_discover(const RunConfig& cfg, const RunWriter& w) {
  SymmetryReport report;
  if (cfg.source == "model") {
    const MatrixLieGroup group = MatrixLieGroup::from_descriptor(*cfg.group);
    const Dictionary dict = Dictionary::from_descriptor(*cfg.dictionary);
    const ActionPair pair = make_pair(cfg, group, dict);
    const SampledInnerProduct inner = make_inner(cfg, pair, dict);
    const LieOperatorTensor tensor = assemble_lie_tensor(pair, dict, inner);
    const VectorXd c = model_coefficients(cfg);
    if (c.size() != dict.size()) throw ConfigError("coefficient count does not match the dictionary");
    report = function_symmetries(tensor, c, {cfg.cutoff});
  } else if (cfg.source == "system-matrix") {
    const MatrixXd a = read_csv_matrix(cfg.matrix_csv);
    const int np = cfg.num_particles;
    if (a.rows() != 6 * np + 1 || a.cols() != 6 * np + 1)
      throw ConfigError(cfg.matrix_csv.string() + ": expected a " + std::to_string(6 * np + 1) + " x " +
                        std::to_string(6 * np + 1) + " homogeneous matrix");
    const LieOperatorTensor tensor = spring_mass_tensor(np, cfg.sampling.seed);
    report = function_symmetries(tensor, system_matrix_to_coefficients(spring_mass_dictionary(np), a), {cfg.cutoff});
  } else {
    const MatrixLieGroup group = MatrixLieGroup::from_descriptor(*cfg.group);
    const Representation rep = Representation::identity(group);
    const Index d = rep.space_dim();
    const MatrixXd rows = read_csv_matrix(cfg.points_csv);
    PointCloud cloud;
    cloud.intrinsic_dim = cfg.intrinsic_dim;
    if (rows.cols() == d) {
      cloud.points = rows.transpose();
      const int k = cfg.neighbors > 0 ? cfg.neighbors : default_neighbor_count(cfg.intrinsic_dim);
      cloud = estimate_tangent_frames(cloud, k);
    } else if (rows.cols() == d * (1 + cfg.intrinsic_dim)) {
      cloud.points = rows.leftCols(d).transpose();
      for (Index j = 0; j < rows.rows(); ++j) {
        MatrixXd frame(d, cfg.intrinsic_dim);
        for (int t = 0; t < cfg.intrinsic_dim; ++t) frame.col(t) = rows.row(j).segment(d * (1 + t), d).transpose();
        cloud.frames.push_back(orthonormal_span(frame));
      }
    } else {
      throw ConfigError(cfg.points_csv.string() + ": expected " + std::to_string(d) + " or " +
                        std::to_string(d * (1 + cfg.intrinsic_dim)) + " columns");
    }
    report = pointcloud_symmetries(cloud, rep, {cfg.cutoff});
  }
  w.json("report.json", Json{{"report", to_json(report)}});
  write_spectrum(w, report.singular_values, report.threshold);
  std::cout << "nullity " << report.nullity() << '\n';
  return 0;
}

int cmd_enforce(const RunConfig& cfg, const RunWriter& w) {
  const MatrixLieGroup group = MatrixLieGroup::from_descriptor(*cfg.group);
  const Dictionary dict = Dictionary::from_descriptor(*cfg.dictionary);
  const ActionPair pair = make_pair(cfg, group, dict);
  const SampledInnerProduct inner = make_inner(cfg, pair, dict);
  const LieOperatorTensor tensor = assemble_lie_tensor(pair, dict, inner);
  const EquivariantBasis basis = equivariant_function_basis(tensor, pair, dict, inner, {cfg.cutoff});
  w.json("basis.json", Json{{"basis", to_json(basis)}});
  auto os = w.csv("residuals.csv");
  os << "column,residual\n";
  for (std::size_t i = 0; i < basis.residuals.size(); ++i) os << i << ',' << basis.residuals[i] << '\n';
  std::cout << "basis dimension " << basis.dim() << '\n';
  return 0;
}

int cmd_fit(const RunConfig& cfg, const RunWriter& w) {
  std::optional<Dictionary> dict;
  std::optional<LieOperatorTensor> tensor;
  if (cfg.input_action == "spring-mass" && !cfg.dictionary) {
    dict = spring_mass_dictionary(cfg.num_particles);
    tensor = spring_mass_tensor(cfg.num_particles, cfg.sampling.seed);
  } else {
    const MatrixLieGroup group = MatrixLieGroup::from_descriptor(cfg.group.value_or(GroupDescriptor{GroupKind::SE, 3, {}}));
    dict = Dictionary::from_descriptor(*cfg.dictionary);
    const ActionPair pair = make_pair(cfg, group, *dict);
    tensor = assemble_lie_tensor(pair, *dict, make_inner(cfg, pair, *dict));
  }
  const MatrixXd data = read_csv_matrix(cfg.data_csv);
  const Index m = dict->input_dim();
  const Index n = dict->output_dim();
  if (data.cols() != m + n)
    throw ConfigError(cfg.data_csv.string() + ": expected " + std::to_string(m + n) + " columns (inputs then outputs)");
  PromoteProblem problem{*dict, &*tensor, data.leftCols(m).transpose(), data.rightCols(n).transpose(), 0.0, cfg.solver};

  Json fits = Json::array();
  auto path = w.csv("path.csv");
  path << "gamma,mse,penalty,converged,iterations\n";
  std::optional<VectorXd> warm;
  bool all_converged = true;
  for (double gamma : cfg.gamma_grid) {
    problem.gamma = gamma;
    FitResult fit = fit_regularized(problem, warm);
    warm = fit.coeffs;
    fit.symmetry = function_symmetries(*tensor, fit.coeffs, {cfg.cutoff});
    all_converged = all_converged && fit.converged;
    path << gamma << ',' << fit.mse << ',' << fit.penalty << ',' << (fit.converged ? 1 : 0) << ',' << fit.iterations
         << '\n';
    Json entry = to_json(fit);
    entry["gamma"] = gamma;
    fits.push_back(std::move(entry));
  }
  w.json("fit.json", Json{{"dictionary", to_json(dict->descriptor())}, {"fits", std::move(fits)}});
  if (!all_converged) {
    std::cerr << "error: solver did not converge for at least one gamma\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_polyrec(const RunConfig& cfg, const RunWriter& w) {
  const PolyRecoveryResult res = run_poly_recovery(cfg.poly_recovery);
  {
    auto os = w.csv("sweep.csv");
    os << "trial,n,success,max_error\n";
    for (const auto& t : res.trials)
      for (std::size_t k = 0; k < t.success.size(); ++k)
        os << t.trial << ',' << k + 1 << ',' << (t.success[k] ? 1 : 0) << ',' << t.max_error[k] << '\n';
  }
  {
    auto os = w.csv("summary.csv");
    os << "row,n_star\n";
    for (const auto& t : res.trials) os << "trial" << t.trial << ',' << t.n_star << '\n';
    os << "min," << res.min_n_star << "\nmean," << res.mean_n_star << "\nmax," << res.max_n_star << "\nbaseline,"
       << res.dictionary_size << '\n';
  }
  Json trials = Json::array();
  for (const auto& t : res.trials) trials.push_back({{"trial", t.trial}, {"n_star", t.n_star}, {"all_converged", t.all_converged}});
  w.json("summary.json", Json{{"dictionary_size", res.dictionary_size},
                              {"tensor_range", res.tensor_range},
                              {"min_n_star", res.min_n_star},
                              {"mean_n_star", res.mean_n_star},
                              {"max_n_star", res.max_n_star},
                              {"trials", std::move(trials)}});
  std::cout << "mean N* " << res.mean_n_star << " (baseline " << res.dictionary_size << ")\n";
  return 0;
}

Json branch_json(const SpringMassBranch& b) {
  Json path = Json::array();
  for (const auto& p : b.path)
    path.push_back({{"gamma", p.gamma}, {"mse", p.mse}, {"penalty", p.penalty}, {"converged", p.converged}, {"iterations", p.iterations}});
  return Json{{"gamma", b.gamma},
              {"threshold_met", b.threshold_met},
              {"frobenius_error", b.frobenius_error},
              {"integrated_test_error", b.integrated_test_error},
              {"mse", b.fit.mse},
              {"converged", b.fit.converged},
              {"path", std::move(path)}};
}

int cmd_springmass(const RunConfig& cfg, const RunWriter& w) {
  const SpringMassResult res = run_spring_mass(cfg.spring_mass);
  w.json("report.json", Json{{"assumptions", {{"initial_centres", "q0 and p0 drawn afresh for every trajectory"}}},
                             {"true_training_mse", res.true_training_mse},
                             {"true_symmetry", to_json(res.true_symmetry)},
                             {"nuclear", branch_json(res.nuclear)},
                             {"l1", branch_json(res.l1)}});
  w.matrix_csv("A_true.csv", res.system.a);
  w.matrix_csv("A_nuclear.csv", res.nuclear.a);
  w.matrix_csv("A_l1.csv", res.l1.a);
  {
    auto os = w.csv("test_error.csv");
    os << "t,nuclear,l1\n";
    for (std::size_t s = 0; s < res.test_times.size(); ++s)
      os << res.test_times[s] << ',' << res.test_error_curves(s, 0) << ',' << res.test_error_curves(s, 1) << '\n';
  }
  for (const SpringMassBranch* b : {&res.nuclear, &res.l1}) {
    auto os = w.csv("path_" + b->name + ".csv");
    os << "gamma,mse,penalty,converged,iterations\n";
    for (const auto& p : b->path)
      os << p.gamma << ',' << p.mse << ',' << p.penalty << ',' << (p.converged ? 1 : 0) << ',' << p.iterations << '\n';
  }
  {
    auto os = w.csv("training.csv");
    write_trajectory_csv(os, res.training);
  }
  std::cout << "frobenius error nuclear " << res.nuclear.frobenius_error << " l1 " << res.l1.frobenius_error << '\n';
  if (!res.nuclear.fit.converged || !res.l1.fit.converged) {
    std::cerr << "error: a selected fit did not converge\n";
    return kExitNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie-derivative symmetry toolkit"};
  app.require_subcommand(1);
  fs::path config_path, out_dir = "out";
  for (const char* name : {"discover", "enforce", "fit", "exp-polyrec", "exp-springmass"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output root; results go to <out>/<config hash>/");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig cfg = load_config(config_path);
    if (cfg.command != command)
      throw ConfigError("config command '" + cfg.command + "' does not match subcommand '" + command + "'");
    const RunWriter writer(out_dir, cfg);
    int code = 0;
    if (command == "discover") code = cmd_discover(cfg, writer);
    else if (command == "enforce") code = cmd_enforce(cfg, writer);
    else if (command == "fit") code = cmd_fit(cfg, writer);
    else if (command == "exp-polyrec") code = cmd_polyrec(cfg, writer);
    else code = cmd_springmass(cfg, writer);
    std::cout << writer.dir().string() << '\n';
    return code;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
