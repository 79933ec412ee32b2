#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "liesym/dynamics.hpp"
#include "liesym/promote.hpp"
#include "liesym/rng.hpp"

namespace liesym {

/// Runs fn(0..count-1) on up to `workers` threads. Each index must write only
/// its own output slot; the call returns after every index has finished and
/// rethrows the first exception raised.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

/// A random F_rad or F_lin: phi has monomial coefficients ~ U[0, 1]; centres
/// c_k ~ U[-1, 1]^n; features u_k are the left singular vectors of a Gaussian
/// n x r matrix.
struct StructuredPolynomial {
  Polynomial poly{1};
  int degree = 0;     ///< degree of the composed polynomial
  MatrixXd features;  ///< n x r: centres (rad) or features (lin)
  VectorXd phi;       ///< coefficients of phi over graded_lex_indices(r, deg phi)
};

StructuredPolynomial random_f_rad(int n, int r, int phi_degree, Rng& rng);
StructuredPolynomial random_f_lin(int n, int r, int phi_degree, Rng& rng);

struct PolyRecoveryConfig {
  std::string family = "lin";  ///< "lin" or "rad"
  int n = 3;
  int r = 1;
  int phi_degree = 2;
  GroupDescriptor group{GroupKind::T, 3, {}};
  int trials = 10;
  std::uint64_t seed = 0;
  int workers = 1;
  double tolerance = 5e-3;
  SolverOptions solver;
};

struct PolyRecoveryTrial {
  int trial = 0;
  /// Smallest N such that recovery succeeds for every N' >= N.
  int n_star = 0;
  std::vector<bool> success;       ///< index N - 1
  std::vector<double> max_error;   ///< relative max-coefficient error per N
  bool all_converged = true;
};

struct PolyRecoveryResult {
  PolyRecoveryConfig config;
  int dictionary_size = 0;
  Index tensor_range = 0;
  std::vector<PolyRecoveryTrial> trials;
  double mean_n_star = 0.0;
  int min_n_star = 0;
  int max_n_star = 0;
};

PolyRecoveryResult run_poly_recovery(const PolyRecoveryConfig& config);

/// Affine dictionary P_1(R^{6 n_p}) -> R^{6 n_p} and the simultaneous SE(3) action.
Dictionary spring_mass_dictionary(int num_particles);
ActionPair spring_mass_pair(int num_particles);
/// Tensor on the certified sample count 6 n_p + 1.
LieOperatorTensor spring_mass_tensor(int num_particles, std::uint64_t seed);
VectorXd system_matrix_to_coefficients(const Dictionary& dict, const MatrixXd& a_homogeneous);
MatrixXd coefficients_to_system_matrix(const Dictionary& dict, const VectorXd& coeffs);

struct SpringMassConfig {
  int num_particles = 5;
  std::uint64_t seed = 0;
  int train_trajectories = 2;
  int train_samples = 50;
  double train_dt = 0.1;
  std::vector<double> gamma_grid;     ///< nuclear-norm strengths, ascending
  std::vector<double> l1_gamma_grid;  ///< l1 strengths, ascending
  double mse_threshold = 1e-4;
  int test_trajectories = 3;
  double test_horizon = 5.0;
  double test_dt = 0.01;
  SolverOptions solver;
  int workers = 1;
};

std::vector<double> default_nuclear_gamma_grid();
std::vector<double> default_l1_gamma_grid();

struct PathPoint {
  double gamma = 0.0;
  double mse = 0.0;
  double penalty = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct SpringMassBranch {
  std::string name;
  double gamma = 0.0;
  bool threshold_met = false;
  FitResult fit;
  MatrixXd a;
  double frobenius_error = 0.0;
  /// Mean over test trajectories of the time-integrated relative state error.
  double integrated_test_error = 0.0;
  std::vector<PathPoint> path;
};

struct SpringMassResult {
  SpringMassConfig config;
  SpringMassSystem system;
  SymmetryReport true_symmetry;
  double true_training_mse = 0.0;
  TrajectoryData training;
  SpringMassBranch nuclear;
  SpringMassBranch l1;
  std::vector<double> test_times;
  MatrixXd test_error_curves;  ///< T x 2 (nuclear, l1), mean relative error over test trajectories
  std::vector<TrajectoryData> test_truth;
};

SpringMassResult run_spring_mass(const SpringMassConfig& config);

}  // namespace liesym
