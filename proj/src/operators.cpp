#include "liesym/operators.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/SVD>

#include "liesym/error.hpp"
#include "liesym/linalg.hpp"
#include "liesym/polynomial.hpp"
#include "liesym/rng.hpp"

namespace liesym {

CubeDomain CubeDomain::symmetric(int m, double half_width) {
  return {VectorXd::Constant(m, -half_width), VectorXd::Constant(m, half_width)};
}

double SampledInnerProduct::inner(const VectorXd& f, const VectorXd& g, Index n) const {
  if (f.size() != size() * n || g.size() != size() * n) throw DimensionError("sampled function has the wrong length");
  double s = 0.0;
  for (Index i = 0; i < size(); ++i) s += weights[i] * f.segment(i * n, n).dot(g.segment(i * n, n));
  return s / static_cast<double>(size());
}

MatrixXd SampledInnerProduct::weigh(const MatrixXd& samples, Index n) const {
  if (samples.rows() != size() * n) throw DimensionError("sampled matrix has the wrong number of rows");
  MatrixXd out = samples;
  const double inv_m = 1.0 / static_cast<double>(size());
  for (Index i = 0; i < size(); ++i) out.middleRows(i * n, n) *= std::sqrt(weights[i] * inv_m);
  return out;
}

SampledInnerProduct build_inner_product(const CubeDomain& domain, Index num_points, std::uint64_t seed,
                                        std::optional<VectorXd> weights) {
  if (num_points < 1) throw InvalidArgument("inner product needs at least one sample point");
  const int m = domain.dim();
  if (m < 1 || domain.upper.size() != m) throw InvalidArgument("sampling domain is empty");
  for (int k = 0; k < m; ++k) {
    if (!(domain.upper[k] > domain.lower[k])) throw InvalidArgument("sampling domain is empty");
  }
  SampledInnerProduct out;
  out.domain = domain;
  out.seed = seed;
  out.points.resize(m, num_points);
  Rng rng = Rng(seed).split("inner-product");
  for (Index j = 0; j < num_points; ++j)
    for (int k = 0; k < m; ++k) out.points(k, j) = rng.uniform(domain.lower[k], domain.upper[k]);
  if (weights) {
    if (weights->size() != num_points) throw DimensionError("weight vector length differs from the point count");
    if ((weights->array() <= 0.0).any()) throw InvalidArgument("inner-product weights must be positive");
    out.weights = *weights;
  } else {
    out.weights = VectorXd::Ones(num_points);
  }
  return out;
}

GramCertificate gram_certificate(const Dictionary& dict, const SampledInnerProduct& inner) {
  if (inner.dim() != dict.input_dim()) throw DimensionError("inner-product points do not match the dictionary");
  const MatrixXd e = inner.weigh(evaluation_matrix(dict, inner.points), dict.output_dim());
  GramCertificate out;
  const Index n = dict.size();
  out.eigenvalues = VectorXd::Zero(n);
  Eigen::BDCSVD<MatrixXd> svd(e);
  const VectorXd& s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) out.eigenvalues[n - 1 - i] = s[i] * s[i];
  out.min_eigenvalue = out.eigenvalues[0];
  const double max_ev = out.eigenvalues[n - 1];
  out.condition = out.min_eigenvalue > 0.0 ? max_ev / out.min_eigenvalue : std::numeric_limits<double>::infinity();
  const double smin = std::sqrt(out.min_eigenvalue);
  const double smax = std::sqrt(max_ev);
  out.positive_definite = smin > static_cast<double>(n) * std::numeric_limits<double>::epsilon() * smax;
  return out;
}

namespace {

void check_pair(const ActionPair& pair, const Dictionary& dict) {
  if (pair.input_dim() != dict.input_dim() || pair.output_dim() != dict.output_dim()) {
    throw DimensionError("representations act on R^" + std::to_string(pair.input_dim()) + " -> R^" +
                         std::to_string(pair.output_dim()) + " but the dictionary maps R^" +
                         std::to_string(dict.input_dim()) + " -> R^" + std::to_string(dict.output_dim()));
  }
}

// phi x for a representation matrix, with (x, 1) for affine representations.
VectorXd act(const MatrixXd& phi, bool affine, const VectorXd& x) {
  if (!affine) return phi * x;
  const Index k = x.size();
  return phi.topLeftCorner(k, k) * x + phi.block(0, k, k, 1);
}

}  // namespace

VectorXd generator_vector(const ActionPair& pair, const LieAlgebraElement& xi, const VectorXd& x) {
  if (x.size() != pair.input_dim()) throw DimensionError("point has the wrong dimension for the action");
  return -pair.in.apply_algebra(xi, x);
}

VectorXd lie_derivative_eval(const ActionPair& pair, const Dictionary& dict, const ModelCoefficients& coeffs,
                             const LieAlgebraElement& xi, const VectorXd& x) {
  check_pair(pair, dict);
  const VectorXd w = pair.in.apply_algebra(xi, x);
  return pair.out.algebra_matrix(xi) * evaluate_model(dict, coeffs, x) - jacobian_model(dict, coeffs, x) * w;
}

VectorXd finite_transform_eval(const ActionPair& pair, const Dictionary& dict, const ModelCoefficients& coeffs,
                               const MatrixXd& g, const VectorXd& x) {
  check_pair(pair, dict);
  const VectorXd y = pair.in.apply_group_inverse(g, x);
  return pair.out.group_matrix(g) * evaluate_model(dict, coeffs, y);
}

MatrixXd sample_lie_derivatives(const ActionPair& pair, const Dictionary& dict, const SampledInnerProduct& inner,
                                const MatrixXd& phi_in, const MatrixXd& psi_out) {
  check_pair(pair, dict);
  if (inner.dim() != dict.input_dim()) throw DimensionError("inner-product points do not match the dictionary");
  const Index n = dict.output_dim();
  const bool psi_zero = psi_out.isZero(0.0);
  MatrixXd out(inner.size() * n, dict.size());
  for (Index j = 0; j < inner.size(); ++j) {
    const VectorXd x = inner.points.col(j);
    const VectorXd w = act(phi_in, pair.in.affine(), x);
    auto block = out.middleRows(j * n, n);
    block = -dict.directional(x, w);
    if (!psi_zero) block += psi_out * dict.values(x);
  }
  return out;
}

MatrixXd sample_finite_transforms(const ActionPair& pair, const Dictionary& dict, const SampledInnerProduct& inner,
                                  const MatrixXd& g) {
  check_pair(pair, dict);
  if (inner.dim() != dict.input_dim()) throw DimensionError("inner-product points do not match the dictionary");
  const Index n = dict.output_dim();
  const MatrixXd psi = pair.out.group_matrix(g);
  MatrixXd out(inner.size() * n, dict.size());
  for (Index j = 0; j < inner.size(); ++j) {
    const VectorXd y = pair.in.apply_group_inverse(g, inner.points.col(j));
    out.middleRows(j * n, n) = psi * dict.values(y);
  }
  return out;
}

std::optional<Index> certified_sample_count(const ActionPair& pair, const Dictionary& dict) {
  if (!dict.is_polynomial()) return std::nullopt;
  if (pair.group().dim() == 0) return 0;
  const int m = dict.input_dim();
  int degree = dict.degree();
  bool translations_only = true;
  for (Index k = 0; k < pair.group().dim(); ++k) {
    const MatrixXd& phi = pair.in.basis_matrices()[k];
    const Index s = pair.in.space_dim();
    if (!pair.out.basis_matrices()[k].isZero(0.0) || !phi.topLeftCorner(s, s).isZero(0.0)) {
      translations_only = false;
      break;
    }
  }
  if (translations_only) --degree;
  if (degree < 0) return 0;
  const std::uint64_t count = binomial(static_cast<std::uint64_t>(degree + m), static_cast<std::uint64_t>(m));
  return static_cast<Index>(count);
}

Index default_sample_count(const ActionPair& pair, const Dictionary& dict) {
  if (auto c = certified_sample_count(pair, dict)) return std::max<Index>(*c, 1);
  return std::max<Index>(4 * dict.size() * pair.group().dim(), 1);
}

MatrixXd LieOperatorTensor::slice(Index i) const {
  if (i < 0 || i >= num_functions) throw DimensionError("tensor slice index out of range");
  return unvec(slices.col(i), range_dim, algebra_dim);
}

MatrixXd LieOperatorTensor::operator_matrix(const VectorXd& coeffs) const {
  if (coeffs.size() != num_functions) throw DimensionError("coefficient vector does not match the tensor");
  return unvec(slices * coeffs, range_dim, algebra_dim);
}

VectorXd LieOperatorTensor::adjoint(const MatrixXd& y) const {
  if (y.rows() != range_dim || y.cols() != algebra_dim) throw DimensionError("adjoint argument has the wrong shape");
  return slices.transpose() * vec(y);
}

LieOperatorTensor assemble_lie_tensor(const ActionPair& pair, const Dictionary& dict,
                                      const SampledInnerProduct& inner, const TensorOptions& options) {
  check_pair(pair, dict);
  if (dict.size() == 0) throw InvalidArgument("empty dictionary");
  if (options.enforce_certificate) {
    if (auto bound = certified_sample_count(pair, dict); bound && inner.size() < *bound) {
      throw NumericalError("inner product has " + std::to_string(inner.size()) +
                           " points but a degree-" + std::to_string(dict.degree()) + " polynomial dictionary on R^" +
                           std::to_string(dict.input_dim()) + " needs at least " + std::to_string(*bound) +
                           "; increase the sample count");
    }
  }
  const MatrixLieGroup& group = pair.group();
  const Index n_fun = dict.size();
  const Index dim_g = group.dim();
  const Index n_out = dict.output_dim();

  LieOperatorTensor out;
  out.group = group.descriptor();
  out.dictionary = dict.descriptor();
  out.inner = inner;
  out.num_functions = n_fun;
  out.algebra_dim = dim_g;
  if (dim_g == 0) {
    out.slices = MatrixXd(0, n_fun);
    return out;
  }

  // Candidate column i * dim G + k holds the weighted samples of L_{xi_k} F_i.
  MatrixXd candidates(inner.size() * n_out, n_fun * dim_g);
  for (Index k = 0; k < dim_g; ++k) {
    const MatrixXd s =
        inner.weigh(sample_lie_derivatives(pair, dict, inner, pair.in.basis_matrices()[k], pair.out.basis_matrices()[k]),
                    n_out);
    for (Index i = 0; i < n_fun; ++i) candidates.col(i * dim_g + k) = s.col(i);
  }
  const double max_norm = candidates.colwise().norm().maxCoeff();
  const GramSchmidtResult gs =
      modified_gram_schmidt(candidates, options.drop_tolerance, options.floor_relative * max_norm);
  out.range_dim = gs.q.cols();
  out.dropped = gs.dropped;
  if (!gs.pivots.empty()) {
    const auto [lo, hi] = std::minmax_element(gs.pivots.begin(), gs.pivots.end());
    out.gram_condition = *hi / *lo;
  }
  const MatrixXd t = gs.q.transpose() * candidates;  // N' x (N dim G)
  out.slices.resize(out.range_dim * dim_g, n_fun);
  for (Index i = 0; i < n_fun; ++i)
    for (Index k = 0; k < dim_g; ++k)
      out.slices.col(i).segment(k * out.range_dim, out.range_dim) = t.col(i * dim_g + k);
  return out;
}

LieDerivativeMatrix lie_derivative_matrix(const ActionPair& pair, const Dictionary& dict,
                                          const SampledInnerProduct& inner, const LieAlgebraElement& xi) {
  check_pair(pair, dict);
  if (inner.size() * dict.output_dim() < dict.size()) {
    throw NumericalError("too few sample points to identify the Lie derivative in the dictionary basis");
  }
  const Index n = dict.output_dim();
  const MatrixXd e = inner.weigh(evaluation_matrix(dict, inner.points), n);
  const MatrixXd rhs =
      inner.weigh(sample_lie_derivatives(pair, dict, inner, pair.in.algebra_matrix(xi), pair.out.algebra_matrix(xi)), n);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(e);
  if (qr.rank() < dict.size()) throw NumericalError("dictionary values are rank deficient at the sample points");
  LieDerivativeMatrix out;
  out.matrix = qr.solve(rhs);
  const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
  out.residual = (e * out.matrix - rhs).norm() / scale;
  return out;
}

}  // namespace liesym
