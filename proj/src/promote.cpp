#include "liesym/promote.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/SVD>

#include "liesym/error.hpp"

namespace liesym {

PenaltyValue nuclear_penalty(const LieOperatorTensor& tensor, const VectorXd& coeffs) {
  PenaltyValue out;
  const MatrixXd lf = tensor.operator_matrix(coeffs);
  if (lf.size() == 0) {
    out.subgradient = VectorXd::Zero(tensor.num_functions);
    return out;
  }
  Eigen::JacobiSVD<MatrixXd> svd(lf, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  out.value = s.sum();
  const double tol = s.size() ? s[0] * 1e-12 : 0.0;
  Index rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;
  const MatrixXd uv = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).transpose();
  out.subgradient = tensor.adjoint(uv);
  return out;
}

double discrete_penalty(const Dictionary& dict, const VectorXd& coeffs, const std::vector<MatrixXd>& group_elements,
                        const ActionPair& pair, const SampledInnerProduct& inner) {
  if (coeffs.size() != dict.size()) throw DimensionError("coefficients do not match the dictionary");
  const Index n = dict.output_dim();
  const VectorXd base = evaluation_matrix(dict, inner.points) * coeffs;
  double total = 0.0;
  for (const MatrixXd& g : group_elements) {
    const VectorXd diff = sample_finite_transforms(pair, dict, inner, g) * coeffs - base;
    total += inner.norm(diff, n);
  }
  return total;
}

double discrete_layer_penalty(const std::vector<PenaltyLayer>& layers, const std::vector<MatrixXd>& group_elements) {
  double total = 0.0;
  for (const MatrixXd& g : group_elements) {
    double sq = 0.0;
    for (const auto& layer : layers) {
      const double r = discrete_penalty(layer.dict, layer.coeffs, {g}, layer.pair, layer.inner);
      sq += r * r;
    }
    total += std::sqrt(sq);
  }
  return total;
}

MatrixXd singular_value_shrink(const MatrixXd& a, double threshold) {
  if (a.size() == 0) return a;
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd s = (svd.singularValues().array() - threshold).max(0.0).matrix();
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

namespace {

double nuclear_norm(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(a).singularValues().sum();
}

struct RegressionData {
  MatrixXd x;  // (M n) x N, scaled by sqrt(1/M)
  VectorXd y;  // scaled the same way
};

RegressionData regression_data(const PromoteProblem& p) {
  if (p.inputs.cols() == 0) throw InvalidArgument("regression needs at least one data pair");
  if (p.inputs.cols() != p.outputs.cols()) throw DimensionError("inputs and outputs have different sample counts");
  if (p.inputs.rows() != p.dict.input_dim() || p.outputs.rows() != p.dict.output_dim()) {
    throw DimensionError("data dimensions do not match the dictionary");
  }
  if (!(p.gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  const double s = 1.0 / std::sqrt(static_cast<double>(p.inputs.cols()));
  RegressionData d;
  d.x = s * evaluation_matrix(p.dict, p.inputs);
  d.y = s * Eigen::Map<const VectorXd>(p.outputs.data(), p.outputs.size());
  return d;
}

/// Solves (P + rho A^T A) c = rhs, falling back to a pseudo-inverse when the
/// system is singular.
class ShiftedSolver {
 public:
  ShiftedSolver(const MatrixXd& p, const MatrixXd& ata) : p_(p), ata_(ata) {}

  void factor(double rho) {
    const MatrixXd h = p_ + rho * ata_;
    llt_.compute(h);
    use_llt_ = llt_.info() == Eigen::Success;
    if (use_llt_) {
      const VectorXd d = llt_.matrixLLT().diagonal();
      use_llt_ = d.minCoeff() > 1e-7 * d.maxCoeff();
    }
    if (!use_llt_) cod_.compute(h);
  }

  VectorXd solve(const VectorXd& rhs) const { return use_llt_ ? VectorXd(llt_.solve(rhs)) : VectorXd(cod_.solve(rhs)); }

 private:
  const MatrixXd& p_;
  const MatrixXd& ata_;
  Eigen::LLT<MatrixXd> llt_;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod_;
  bool use_llt_ = false;
};

/// ADMM for min 1/2 c^T P c - q^T c + constant + h(A c + b0), with h given by
/// its value and its prox. A == nullptr means the identity.
struct AdmmSpec {
  const MatrixXd* p;
  VectorXd q;
  double constant = 0.0;
  const MatrixXd* a;
  VectorXd b0;
  std::function<VectorXd(const VectorXd&, double)> prox;  // prox of h scaled by 1/rho
  std::function<double(const VectorXd&)> h;
};

FitResult run_admm(const AdmmSpec& spec, const SolverOptions& opt, VectorXd c) {
  const Index n = spec.p->cols();
  const Index rows = spec.a ? spec.a->rows() : n;
  auto apply_a = [&](const VectorXd& v) -> VectorXd { return spec.a ? VectorXd(*spec.a * v) : v; };
  auto apply_at = [&](const VectorXd& v) -> VectorXd { return spec.a ? VectorXd(spec.a->transpose() * v) : v; };

  const MatrixXd ata = spec.a ? MatrixXd(spec.a->transpose() * *spec.a) : MatrixXd(MatrixXd::Identity(n, n));
  ShiftedSolver solver(*spec.p, ata);
  double rho = opt.rho;
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  solver.factor(rho);

  VectorXd ac = apply_a(c) + spec.b0;
  VectorXd w = ac;
  VectorXd u = VectorXd::Zero(rows);
  VectorXd at_w = apply_at(w);
  VectorXd at_u = VectorXd::Zero(n);
  const VectorXd at_b0 = apply_at(spec.b0);

  auto objective = [&](const VectorXd& x, const VectorXd& ax) {
    return 0.5 * x.dot(*spec.p * x) - spec.q.dot(x) + spec.constant + spec.h(ax);
  };
  const double alpha = opt.relaxation;
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidArgument("relaxation must lie in (0, 2)");

  FitResult out;
  out.coeffs = c;
  double best = objective(c, ac);
  VectorXd best_c = c;
  const double sqrt_p = std::sqrt(static_cast<double>(rows));
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  for (int it = 1; it <= opt.max_iter; ++it) {
    c = solver.solve(spec.q + rho * (at_w - at_u - at_b0));
    ac = apply_a(c) + spec.b0;
    const VectorXd at_w_old = at_w;
    const VectorXd w_old = w;
    const VectorXd relaxed = alpha * ac + (1.0 - alpha) * w_old;
    w = spec.prox(relaxed + u, rho);
    u += relaxed - w;
    at_w = apply_at(w);
    // A^T u tracked without a second product with A^T.
    at_u += alpha * (ata * c + at_b0) + (1.0 - alpha) * at_w_old - at_w;

    const double r = (ac - w).norm();
    const double s = rho * (at_w - at_w_old).norm();
    const double eps_pri = sqrt_p * opt.abs_tol + opt.rel_tol * std::max(ac.norm(), w.norm());
    const double eps_dual = sqrt_n * opt.abs_tol + opt.rel_tol * rho * at_u.norm();

    const double obj = objective(c, ac);
    if (obj < best) {
      best = obj;
      best_c = c;
    }
    out.objective.push_back(opt.monotone ? best : obj);
    out.iterations = it;
    out.primal_residual = r;
    out.dual_residual = s;
    if (r <= eps_pri && s <= eps_dual) {
      out.converged = true;
      break;
    }
    if (opt.adaptive_rho) {
      double factor = 1.0;
      if (r > opt.balance_mu * s) factor = opt.balance_factor;
      else if (s > opt.balance_mu * r) factor = 1.0 / opt.balance_factor;
      if (factor != 1.0) {
        rho *= factor;
        u /= factor;
        at_u /= factor;
        solver.factor(rho);
      }
    }
  }
  out.final_rho = rho;
  out.coeffs = opt.monotone ? best_c : c;
  const VectorXd lc = apply_a(out.coeffs) + spec.b0;
  const double scale = std::max({w.norm(), lc.norm(), 1e-12});
  out.consensus_residual = opt.monotone ? 0.0 : (w - lc).norm() / scale;
  return out;
}

void finish(FitResult& out, const PromoteProblem& problem) {
  out.mse = training_mse(problem, out.coeffs);
  if (problem.tensor) {
    out.penalty = nuclear_penalty(*problem.tensor, out.coeffs).value;
    out.symmetry = function_symmetries(*problem.tensor, out.coeffs);
  }
}

}  // namespace

double training_mse(const PromoteProblem& problem, const VectorXd& coeffs) {
  if (coeffs.size() != problem.dict.size()) throw DimensionError("coefficients do not match the dictionary");
  double total = 0.0;
  for (Index j = 0; j < problem.inputs.cols(); ++j) {
    total += (problem.outputs.col(j) - evaluate_model(problem.dict, coeffs, problem.inputs.col(j))).squaredNorm();
  }
  return total / static_cast<double>(problem.inputs.cols());
}

double objective(const PromoteProblem& problem, const VectorXd& coeffs) {
  double value = training_mse(problem, coeffs);
  if (problem.tensor && problem.gamma > 0.0) value += problem.gamma * nuclear_penalty(*problem.tensor, coeffs).value;
  return value;
}

FitResult fit_regularized(const PromoteProblem& problem, const std::optional<VectorXd>& warm_start) {
  const RegressionData data = regression_data(problem);
  if (problem.tensor && problem.tensor->num_functions != problem.dict.size()) {
    throw DimensionError("tensor was assembled for a different dictionary");
  }
  FitResult out;
  const bool penalized = problem.tensor && problem.gamma > 0.0 && problem.tensor->slices.rows() > 0;
  if (!penalized) {
    out.coeffs = data.x.completeOrthogonalDecomposition().solve(data.y);
    out.converged = true;
    out.solver = "least-squares";
    out.objective.push_back(objective(problem, out.coeffs));
    finish(out, problem);
    return out;
  }
  const LieOperatorTensor& t = *problem.tensor;
  const MatrixXd p = 2.0 * data.x.transpose() * data.x;
  AdmmSpec spec;
  spec.p = &p;
  spec.q = 2.0 * data.x.transpose() * data.y;
  spec.constant = data.y.squaredNorm();
  spec.a = &t.slices;
  spec.b0 = VectorXd::Zero(t.slices.rows());
  const double gamma = problem.gamma;
  spec.prox = [&t, gamma](const VectorXd& v, double rho) {
    return vec(singular_value_shrink(unvec(v, t.range_dim, t.algebra_dim), gamma / rho));
  };
  spec.h = [&t, gamma](const VectorXd& v) { return gamma * nuclear_norm(unvec(v, t.range_dim, t.algebra_dim)); };
  VectorXd c0 = warm_start.value_or(VectorXd::Zero(problem.dict.size()));
  if (c0.size() != problem.dict.size()) throw DimensionError("warm start has the wrong length");
  out = run_admm(spec, problem.solver, c0);
  out.solver = "admm-nuclear";
  finish(out, problem);
  return out;
}

namespace {

// KKT violation of c for min |X c - y|^2 + gamma |c|_1.
double lasso_kkt(const MatrixXd& x, const VectorXd& y, double gamma, const VectorXd& c) {
  const VectorXd grad = 2.0 * x.transpose() * (x * c - y);
  double worst = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    const double v = c[i] != 0.0 ? std::abs(grad[i] + std::copysign(gamma, c[i])) : std::max(0.0, std::abs(grad[i]) - gamma);
    worst = std::max(worst, v);
  }
  return worst;
}

// Residual form of |X c - y|^2 + gamma |c|_1; the Gram form cancels badly
// when c is large.
double lasso_value(const MatrixXd& x, const VectorXd& y, double gamma, const VectorXd& c) {
  return (x * c - y).squaredNorm() + gamma * c.lpNorm<1>();
}

// Feature-sign search: guess a sign pattern, minimize the resulting quadratic
// on the active set, then line-search back to the first point where the
// objective stops decreasing across sign changes. The objective decreases
// strictly, so the loop terminates. Returns the number of steps taken.
int lasso_feature_sign(const MatrixXd& x, const VectorXd& y, double gamma, VectorXd& c, double tol, int max_steps) {
  const Index n = x.cols();
  const MatrixXd g = x.transpose() * x;
  const VectorXd b = x.transpose() * y;
  VectorXd theta = c.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
  int steps = 0;
  while (steps < max_steps) {
    const VectorXd grad = 2.0 * x.transpose() * (x * c - y);
    bool nonzero_optimal = true;
    for (Index i = 0; i < n; ++i)
      if (c[i] != 0.0 && std::abs(grad[i] + gamma * theta[i]) > tol) nonzero_optimal = false;
    if (nonzero_optimal) {
      Index best = -1;
      double worst = gamma + tol;
      for (Index i = 0; i < n; ++i) {
        if (c[i] == 0.0 && theta[i] == 0.0 && std::abs(grad[i]) > worst) {
          worst = std::abs(grad[i]);
          best = i;
        }
      }
      if (best < 0) return steps;
      theta[best] = grad[best] > 0.0 ? -1.0 : 1.0;
    }
    ++steps;
    std::vector<Index> active;
    for (Index i = 0; i < n; ++i)
      if (theta[i] != 0.0) active.push_back(i);
    const Index k = static_cast<Index>(active.size());
    MatrixXd gaa(k, k);
    VectorXd rhs(k), cur(k);
    for (Index i = 0; i < k; ++i) {
      rhs[i] = b[active[i]] - 0.5 * gamma * theta[active[i]];
      cur[i] = c[active[i]];
      for (Index j = 0; j < k; ++j) gaa(i, j) = g(active[i], active[j]);
    }
    VectorXd target;
    const Eigen::LDLT<MatrixXd> ldlt(gaa);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) target = ldlt.solve(rhs);
    else target = gaa.completeOrthogonalDecomposition().solve(rhs);

    // Candidates: the quadratic minimizer and every zero crossing on the way to it.
    const VectorXd d = target - cur;
    std::vector<double> ts{1.0};
    for (Index i = 0; i < k; ++i)
      if (cur[i] != 0.0 && d[i] != 0.0 && cur[i] * target[i] < 0.0) ts.push_back(-cur[i] / d[i]);
    VectorXd best_c = c;
    double best_f = lasso_value(x, y, gamma, c);
    Index zero_at = -1;
    for (double t : ts) {
      VectorXd trial = c;
      for (Index i = 0; i < k; ++i) trial[active[i]] = cur[i] + t * d[i];
      Index crossing = -1;
      if (t < 1.0) {
        for (Index i = 0; i < k; ++i)
          if (cur[i] != 0.0 && d[i] != 0.0 && std::abs(-cur[i] / d[i] - t) <= 1e-15 * std::max(1.0, t)) crossing = i;
        if (crossing >= 0) trial[active[crossing]] = 0.0;
      }
      const double f = lasso_value(x, y, gamma, trial);
      if (f < best_f) {
        best_f = f;
        best_c = trial;
        zero_at = crossing;
      }
    }
    if (best_c == c) return steps;  // no decrease left at working precision
    c = best_c;
    if (zero_at >= 0) c[active[zero_at]] = 0.0;
    theta = c.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
  }
  return steps;
}

}  // namespace

FitResult fit_l1(const PromoteProblem& problem, const std::optional<VectorXd>& warm_start) {
  const RegressionData data = regression_data(problem);
  FitResult out;
  if (problem.gamma == 0.0) {
    out.coeffs = data.x.completeOrthogonalDecomposition().solve(data.y);
    out.converged = true;
    out.solver = "least-squares";
    out.mse = training_mse(problem, out.coeffs);
    out.penalty = out.coeffs.lpNorm<1>();
    return out;
  }
  const Index n = problem.dict.size();
  VectorXd c = warm_start.value_or(VectorXd::Zero(n));
  if (c.size() != n) throw DimensionError("warm start has the wrong length");
  const SolverOptions& opt = problem.solver;
  const double tol = opt.abs_tol * std::max(1.0, (2.0 * data.x.transpose() * data.y).lpNorm<Eigen::Infinity>());
  double violation = 0.0;
  int steps = 0;
  if (problem.dict.is_polynomial()) {
    // Output-major coefficients: the Gram matrix is I_n (x) G_mono, one lasso per output.
    const Index outputs = problem.dict.output_dim();
    const Index mono = n / outputs;
    const double s = 1.0 / std::sqrt(static_cast<double>(problem.inputs.cols()));
    MatrixXd features(problem.inputs.cols(), mono);
    for (Index j = 0; j < problem.inputs.cols(); ++j)
      features.row(j) = s * problem.dict.monomial_values(problem.inputs.col(j)).transpose();
    for (Index a = 0; a < outputs; ++a) {
      const VectorXd y = s * problem.outputs.row(a).transpose();
      VectorXd block = c.segment(a * mono, mono);
      steps = std::max(steps, lasso_feature_sign(features, y, problem.gamma, block, tol, opt.max_l1_steps));
      c.segment(a * mono, mono) = block;
      violation = std::max(violation, lasso_kkt(features, y, problem.gamma, block));
    }
  } else {
    steps = lasso_feature_sign(data.x, data.y, problem.gamma, c, tol, opt.max_l1_steps);
    violation = lasso_kkt(data.x, data.y, problem.gamma, c);
  }
  out.coeffs = c;
  out.iterations = steps;
  out.primal_residual = violation;
  out.converged = violation <= tol;
  out.solver = "feature-sign-l1";
  out.mse = training_mse(problem, out.coeffs);
  out.penalty = out.coeffs.lpNorm<1>();
  out.objective.push_back(out.mse + problem.gamma * out.penalty);
  return out;
}

FitResult recover_interpolating(const LieOperatorTensor& tensor, const Dictionary& dict, const MatrixXd& inputs,
                                const MatrixXd& outputs, const SolverOptions& options) {
  if (tensor.num_functions != dict.size()) throw DimensionError("tensor was assembled for a different dictionary");
  if (inputs.cols() != outputs.cols()) throw DimensionError("inputs and outputs have different sample counts");
  if (inputs.rows() != dict.input_dim() || outputs.rows() != dict.output_dim()) {
    throw DimensionError("sample dimensions do not match the dictionary");
  }
  const Index n = dict.size();
  FitResult out;
  out.solver = "admm-interpolating";
  VectorXd cp = VectorXd::Zero(n);
  MatrixXd null_basis = MatrixXd::Identity(n, n);
  if (inputs.cols() > 0) {
    const MatrixXd e = evaluation_matrix(dict, inputs);
    const VectorXd y = Eigen::Map<const VectorXd>(outputs.data(), outputs.size());
    Eigen::BDCSVD<MatrixXd> svd(e, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const VectorXd& s = svd.singularValues();
    const double tol = (s.size() ? s[0] : 0.0) * 1e-10;
    Index rank = 0;
    while (rank < s.size() && s[rank] > tol) ++rank;
    cp = svd.matrixV().leftCols(rank) *
         (s.head(rank).cwiseInverse().asDiagonal() * (svd.matrixU().leftCols(rank).transpose() * y));
    const double mismatch = (e * cp - y).norm();
    if (mismatch > 1e-8 * std::max(1.0, y.norm())) {
      throw InfeasibleError("interpolation samples are inconsistent with the dictionary (residual " +
                            std::to_string(mismatch) + ")");
    }
    null_basis = svd.matrixV().rightCols(n - rank);
  }
  if (null_basis.cols() == 0 || tensor.slices.rows() == 0) {
    out.coeffs = cp;
    out.converged = true;
  } else {
    const MatrixXd a = tensor.slices * null_basis;
    const MatrixXd p = MatrixXd::Zero(null_basis.cols(), null_basis.cols());
    AdmmSpec spec;
    spec.p = &p;
    spec.q = VectorXd::Zero(null_basis.cols());
    spec.a = &a;
    spec.b0 = tensor.slices * cp;
    spec.prox = [&tensor](const VectorXd& v, double rho) {
      return vec(singular_value_shrink(unvec(v, tensor.range_dim, tensor.algebra_dim), 1.0 / rho));
    };
    spec.h = [&tensor](const VectorXd& v) { return nuclear_norm(unvec(v, tensor.range_dim, tensor.algebra_dim)); };
    FitResult inner = run_admm(spec, options, VectorXd::Zero(null_basis.cols()));
    out.objective = std::move(inner.objective);
    out.iterations = inner.iterations;
    out.converged = inner.converged;
    out.primal_residual = inner.primal_residual;
    out.dual_residual = inner.dual_residual;
    out.consensus_residual = inner.consensus_residual;
    out.final_rho = inner.final_rho;
    out.coeffs = cp + null_basis * inner.coeffs;
  }
  out.penalty = nuclear_penalty(tensor, out.coeffs).value;
  out.symmetry = function_symmetries(tensor, out.coeffs);
  return out;
}

bool recovery_success(const VectorXd& fitted, const VectorXd& truth, double tolerance) {
  if (fitted.size() != truth.size()) throw DimensionError("fitted and true coefficients differ in length");
  if (truth.size() == 0) return true;
  return (fitted - truth).cwiseAbs().maxCoeff() <= tolerance * truth.cwiseAbs().maxCoeff();
}

}  // namespace liesym
