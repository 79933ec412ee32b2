#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liesym/discover.hpp"
#include "liesym/operators.hpp"

namespace liesym {

struct PenaltyValue {
  double value = 0.0;
  VectorXd subgradient;
};

/// ||L_F||_* with the subgradient L^*(U V^T) from a thin SVD.
PenaltyValue nuclear_penalty(const LieOperatorTensor& tensor, const VectorXd& coeffs);

/// sum_g ||K_g F - F|| in the sampled norm.
double discrete_penalty(const Dictionary& dict, const VectorXd& coeffs, const std::vector<MatrixXd>& group_elements,
                        const ActionPair& pair, const SampledInnerProduct& inner);

/// One layer of a stack for the grouped discrete penalty.
struct PenaltyLayer {
  Dictionary dict;
  VectorXd coeffs;
  ActionPair pair;
  SampledInnerProduct inner;
};

/// sum_g sqrt(sum_l ||K_g F^(l) - F^(l)||^2).
double discrete_layer_penalty(const std::vector<PenaltyLayer>& layers, const std::vector<MatrixXd>& group_elements);

/// Singular-value soft-thresholding: U max(S - t, 0) V^T.
MatrixXd singular_value_shrink(const MatrixXd& a, double threshold);

struct SolverOptions {
  double rho = 1.0;
  int max_iter = 5000;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  /// Residual balancing: rescale rho when one residual dominates the other by mu.
  bool adaptive_rho = true;
  double balance_mu = 10.0;
  double balance_factor = 2.0;
  /// Report the best objective seen so far; the returned iterate is that best one.
  bool monotone = false;
  /// Over-relaxation factor in (0, 2); 1 is plain ADMM.
  double relaxation = 1.0;
  /// Active-set step cap for the l1 baseline.
  int max_l1_steps = 10000;
};

/// min (1/M) sum_j ||y_j - F(x_j)||^2 + gamma ||L_F||_*.
struct PromoteProblem {
  Dictionary dict;
  const LieOperatorTensor* tensor = nullptr;
  MatrixXd inputs;   ///< m x M
  MatrixXd outputs;  ///< n x M
  double gamma = 0.0;
  SolverOptions solver;
};

struct FitResult {
  VectorXd coeffs;
  std::vector<double> objective;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// ||Z - L c|| / max(||Z||, ||L c||) at the returned iterate.
  double consensus_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_rho = 0.0;
  double mse = 0.0;
  double penalty = 0.0;
  std::optional<SymmetryReport> symmetry;
  std::optional<bool> success;
  std::string solver;
};

double training_mse(const PromoteProblem& problem, const VectorXd& coeffs);
/// The regularized objective at c.
double objective(const PromoteProblem& problem, const VectorXd& coeffs);

/// ADMM with Z = L_F; gamma = 0 or a missing tensor solves least squares directly.
FitResult fit_regularized(const PromoteProblem& problem, const std::optional<VectorXd>& warm_start = std::nullopt);

/// Elementwise l1 baseline: min (1/M) sum ||y_j - F(x_j)||^2 + gamma ||c||_1,
/// by feature-sign search on the Gram matrix (one block per output for
/// polynomial dictionaries); converged means the KKT violation is within
/// solver.abs_tol times max(1, |2 X^T y|_inf).
FitResult fit_l1(const PromoteProblem& problem, const std::optional<VectorXd>& warm_start = std::nullopt);

/// min ||L_F||_* subject to F(x_j) = y_j.
FitResult recover_interpolating(const LieOperatorTensor& tensor, const Dictionary& dict, const MatrixXd& inputs,
                                const MatrixXd& outputs, const SolverOptions& options = {});

/// max_i |fitted_i - truth_i| <= tolerance * max_i |truth_i|.
bool recovery_success(const VectorXd& fitted, const VectorXd& truth, double tolerance = 5e-3);

}  // namespace liesym
