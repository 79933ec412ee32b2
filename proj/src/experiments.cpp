#include "liesym/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <Eigen/SVD>

#include "liesym/error.hpp"

namespace liesym {

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

Polynomial compose_phi(const std::vector<Polynomial>& features, int r, int phi_degree, VectorXd& phi, Rng& rng) {
  const auto indices = graded_lex_indices(r, phi_degree);
  phi.resize(static_cast<Index>(indices.size()));
  const int n = features.front().num_vars();
  Polynomial out(n);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    phi[static_cast<Index>(a)] = rng.uniform();
    Polynomial term = Polynomial::constant(n, phi[static_cast<Index>(a)]);
    for (int k = 0; k < r; ++k) term = term * features[k].pow(indices[a][k]);
    out = out + term;
  }
  return out;
}

}  // namespace

StructuredPolynomial random_f_rad(int n, int r, int phi_degree, Rng& rng) {
  if (r < 1 || r > n) throw InvalidArgument("F_rad needs 1 <= r <= n");
  StructuredPolynomial out;
  out.features = MatrixXd(n, r);
  std::vector<Polynomial> radii;
  for (int k = 0; k < r; ++k) {
    out.features.col(k) = rng.uniform_vector(n, -1.0, 1.0);
    const VectorXd& c = out.features.col(k);
    // ||x - c||^2 = sum_i x_i^2 - 2 c.x + |c|^2
    Polynomial rho = Polynomial::affine(-2.0 * c, c.squaredNorm());
    for (int i = 0; i < n; ++i) rho = rho + Polynomial::variable(n, i).pow(2);
    radii.push_back(std::move(rho));
  }
  out.poly = compose_phi(radii, r, phi_degree, out.phi, rng);
  out.degree = 2 * phi_degree;
  return out;
}

StructuredPolynomial random_f_lin(int n, int r, int phi_degree, Rng& rng) {
  if (r < 1 || r > n) throw InvalidArgument("F_lin needs 1 <= r <= n");
  StructuredPolynomial out;
  Eigen::JacobiSVD<MatrixXd> svd(rng.normal_matrix(n, r), Eigen::ComputeThinU);
  out.features = svd.matrixU();
  std::vector<Polynomial> lin;
  for (int k = 0; k < r; ++k) lin.push_back(Polynomial::affine(out.features.col(k), 0.0));
  out.poly = compose_phi(lin, r, phi_degree, out.phi, rng);
  out.degree = phi_degree;
  return out;
}

PolyRecoveryResult run_poly_recovery(const PolyRecoveryConfig& config) {
  if (config.family != "lin" && config.family != "rad") throw InvalidArgument("family must be 'lin' or 'rad'");
  if (config.trials < 1) throw InvalidArgument("at least one trial is required");
  const MatrixLieGroup group = MatrixLieGroup::from_descriptor(config.group);
  const ActionPair pair(Representation::identity(group), Representation::trivial(group, 1));
  if (pair.input_dim() != config.n) throw InvalidArgument("group does not act on R^n");
  const int degree = config.family == "lin" ? config.phi_degree : 2 * config.phi_degree;
  const Dictionary dict = Dictionary::polynomial(config.n, 1, degree);
  const Index n_dict = dict.size();
  const Index points = default_sample_count(pair, dict);

  PolyRecoveryResult result;
  result.config = config;
  result.dictionary_size = static_cast<int>(n_dict);
  result.trials.resize(config.trials);
  std::vector<Index> ranges(config.trials, 0);
  const Rng root(config.seed);

  parallel_for(config.trials, config.workers, [&](int t) {
    Rng rng = root.split("poly-recovery").split(static_cast<std::uint64_t>(t));
    Rng fn_rng = rng.split("function");
    const StructuredPolynomial truth_poly = config.family == "lin"
                                                ? random_f_lin(config.n, config.r, config.phi_degree, fn_rng)
                                                : random_f_rad(config.n, config.r, config.phi_degree, fn_rng);
    const VectorXd truth = truth_poly.poly.coefficients(degree);
    const SampledInnerProduct inner =
        build_inner_product(CubeDomain::symmetric(config.n), points, rng.split("discretization")());
    const LieOperatorTensor tensor = assemble_lie_tensor(pair, dict, inner);
    ranges[t] = tensor.range_dim;

    Rng sample_rng = rng.split("samples");
    MatrixXd xs(config.n, n_dict);
    for (Index j = 0; j < n_dict; ++j) xs.col(j) = sample_rng.uniform_vector(config.n, -1.0, 1.0);
    MatrixXd ys(1, n_dict);
    for (Index j = 0; j < n_dict; ++j) ys(0, j) = truth_poly.poly(xs.col(j));

    PolyRecoveryTrial& trial = result.trials[t];
    trial.trial = t;
    const double scale = truth.cwiseAbs().maxCoeff();
    for (Index nn = 1; nn <= n_dict; ++nn) {
      const FitResult fit = recover_interpolating(tensor, dict, xs.leftCols(nn), ys.leftCols(nn), config.solver);
      trial.all_converged = trial.all_converged && fit.converged;
      trial.success.push_back(recovery_success(fit.coeffs, truth, config.tolerance));
      trial.max_error.push_back((fit.coeffs - truth).cwiseAbs().maxCoeff() / scale);
    }
    int n_star = static_cast<int>(n_dict) + 1;
    for (Index nn = n_dict; nn >= 1 && trial.success[nn - 1]; --nn) n_star = static_cast<int>(nn);
    trial.n_star = n_star;
  });

  result.tensor_range = ranges.front();
  double sum = 0.0;
  result.min_n_star = result.trials.front().n_star;
  result.max_n_star = result.trials.front().n_star;
  for (const auto& t : result.trials) {
    sum += t.n_star;
    result.min_n_star = std::min(result.min_n_star, t.n_star);
    result.max_n_star = std::max(result.max_n_star, t.n_star);
  }
  result.mean_n_star = sum / static_cast<double>(result.trials.size());
  return result;
}

Dictionary spring_mass_dictionary(int num_particles) {
  const int d = 6 * num_particles;
  return Dictionary::polynomial(d, d, 1);
}

ActionPair spring_mass_pair(int num_particles) {
  const MatrixLieGroup se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  const Representation rep = spring_mass_representation(se3, num_particles);
  return ActionPair(rep, Representation::linear_part(rep));
}

LieOperatorTensor spring_mass_tensor(int num_particles, std::uint64_t seed) {
  const Dictionary dict = spring_mass_dictionary(num_particles);
  const ActionPair pair = spring_mass_pair(num_particles);
  const SampledInnerProduct inner =
      build_inner_product(CubeDomain::symmetric(dict.input_dim()), default_sample_count(pair, dict), seed);
  return assemble_lie_tensor(pair, dict, inner);
}

VectorXd system_matrix_to_coefficients(const Dictionary& dict, const MatrixXd& a_homogeneous) {
  const Index d = dict.output_dim();
  if (a_homogeneous.rows() != d + 1 || a_homogeneous.cols() != d + 1 || dict.degree() != 1 || dict.input_dim() != d) {
    throw DimensionError("system matrix does not match the affine dictionary");
  }
  MatrixXd w(d, d + 1);
  w.col(0) = a_homogeneous.block(0, d, d, 1);
  w.rightCols(d) = a_homogeneous.topLeftCorner(d, d);
  return matrix_to_coefficients(dict, w);
}

MatrixXd coefficients_to_system_matrix(const Dictionary& dict, const VectorXd& coeffs) {
  const MatrixXd w = coefficients_to_matrix(dict, coeffs);
  const Index d = w.rows();
  MatrixXd a = MatrixXd::Zero(d + 1, d + 1);
  a.topLeftCorner(d, d) = w.rightCols(d);
  a.block(0, d, d, 1) = w.col(0);
  return a;
}

namespace {

std::vector<double> half_decades(int lo, int hi) {
  std::vector<double> g;
  for (int e = 2 * lo; e <= 2 * hi; ++e) g.push_back(std::pow(10.0, e / 2.0));
  return g;
}

}  // namespace

std::vector<double> default_nuclear_gamma_grid() { return half_decades(-5, -1); }

std::vector<double> default_l1_gamma_grid() { return half_decades(-7, -1); }

namespace {

using Fitter = FitResult (*)(const PromoteProblem&, const std::optional<VectorXd>&);

SpringMassBranch sweep(const std::string& name, Fitter fitter, const PromoteProblem& base,
                       const std::vector<double>& grid, double threshold) {
  SpringMassBranch branch;
  branch.name = name;
  std::optional<VectorXd> warm;
  bool have = false;
  for (double gamma : grid) {
    PromoteProblem p = base;
    p.gamma = gamma;
    FitResult fit = fitter(p, warm);
    warm = fit.coeffs;
    branch.path.push_back({gamma, fit.mse, fit.penalty, fit.converged, fit.iterations});
    if (fit.mse < threshold || !have) {
      branch.threshold_met = fit.mse < threshold;
      branch.gamma = gamma;
      branch.fit = std::move(fit);
      have = true;
    }
  }
  return branch;
}

double relative_error(const VectorXd& pred, const VectorXd& truth) {
  return (pred - truth).norm() / std::max(truth.norm(), 1e-300);
}

}  // namespace

SpringMassResult run_spring_mass(const SpringMassConfig& config) {
  const int np = config.num_particles;
  SpringMassResult result;
  result.config = config;
  result.system = make_spring_mass(np, config.seed);
  const Rng root(config.seed);

  const VectorField true_field = linear_field(result.system.a);
  const Index d = result.system.state_dim();
  MatrixXd inputs(d, config.train_trajectories * config.train_samples);
  MatrixXd outputs(d, inputs.cols());
  for (int t = 0; t < config.train_trajectories; ++t) {
    const VectorXd x0 = planar_initial_conditions(np, root.split("train").split(static_cast<std::uint64_t>(t))());
    const TrajectoryData traj = simulate(true_field, x0, config.train_dt, config.train_samples - 1);
    if (traj.diverged) throw NumericalError("training trajectory diverged");
    inputs.middleCols(t * config.train_samples, config.train_samples) = traj.states;
    outputs.middleCols(t * config.train_samples, config.train_samples) = traj.derivatives;
    if (t == 0) result.training = traj;
  }

  const Dictionary dict = spring_mass_dictionary(np);
  const LieOperatorTensor tensor = spring_mass_tensor(np, root.split("discretization")());
  const VectorXd c_true = system_matrix_to_coefficients(dict, result.system.a);
  result.true_symmetry = function_symmetries(tensor, c_true);

  PromoteProblem base{dict, &tensor, inputs, outputs, 0.0, config.solver};
  result.true_training_mse = training_mse(base, c_true);

  const auto nuclear_grid = config.gamma_grid.empty() ? default_nuclear_gamma_grid() : config.gamma_grid;
  const auto l1_grid = config.l1_gamma_grid.empty() ? default_l1_gamma_grid() : config.l1_gamma_grid;
  std::vector<SpringMassBranch> branches(2);
  parallel_for(2, config.workers, [&](int b) {
    branches[b] = b == 0 ? sweep("nuclear", fit_regularized, base, nuclear_grid, config.mse_threshold)
                         : sweep("l1", fit_l1, base, l1_grid, config.mse_threshold);
  });
  result.nuclear = std::move(branches[0]);
  result.l1 = std::move(branches[1]);
  for (SpringMassBranch* br : {&result.nuclear, &result.l1}) {
    br->a = coefficients_to_system_matrix(dict, br->fit.coeffs);
    br->frobenius_error = (br->a - result.system.a).norm();
  }

  const int steps = static_cast<int>(std::lround(config.test_horizon / config.test_dt));
  result.test_error_curves = MatrixXd::Zero(steps + 1, 2);
  for (int s = 0; s <= steps; ++s) result.test_times.push_back(s * config.test_dt);
  const VectorField nuc_field = linear_field(result.nuclear.a);
  const VectorField l1_field = linear_field(result.l1.a);
  for (int t = 0; t < config.test_trajectories; ++t) {
    const VectorXd x0 = general_initial_conditions(np, root.split("test").split(static_cast<std::uint64_t>(t))());
    const TrajectoryData truth = simulate(true_field, x0, config.test_dt, steps);
    const TrajectoryData nuc = simulate(nuc_field, x0, config.test_dt, steps);
    const TrajectoryData l1 = simulate(l1_field, x0, config.test_dt, steps);
    const Index len = std::min({truth.states.cols(), nuc.states.cols(), l1.states.cols()});
    for (Index s = 0; s < len; ++s) {
      result.test_error_curves(s, 0) += relative_error(nuc.states.col(s), truth.states.col(s));
      result.test_error_curves(s, 1) += relative_error(l1.states.col(s), truth.states.col(s));
    }
    for (Index s = len; s <= steps; ++s) result.test_error_curves.row(s).setConstant(INFINITY);
    result.test_truth.push_back(truth);
  }
  result.test_error_curves /= static_cast<double>(config.test_trajectories);
  auto integrate = [&](int col) {
    double total = 0.0;
    for (int s = 0; s < steps; ++s) {
      total += 0.5 * config.test_dt * (result.test_error_curves(s, col) + result.test_error_curves(s + 1, col));
    }
    return total;
  };
  result.nuclear.integrated_test_error = integrate(0);
  result.l1.integrated_test_error = integrate(1);
  return result;
}

}  // namespace liesym
