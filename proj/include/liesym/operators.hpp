#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "liesym/fnspace.hpp"
#include "liesym/liegroup.hpp"
#include "liesym/representation.hpp"

namespace liesym {

/// Axis-aligned box [lower, upper] in R^m.
struct CubeDomain {
  VectorXd lower;
  VectorXd upper;

  static CubeDomain symmetric(int m, double half_width = 1.0);
  int dim() const { return static_cast<int>(lower.size()); }
};

/// <f, g> = (1/M) sum_i w_i f(x_i) . g(x_i) over fixed sample points.
///
/// Sampled functions are stored as stacked vectors of length M n whose block i
/// is f(x_i). weigh() rescales block i by sqrt(w_i / M) so that the sampled
/// inner product becomes the Euclidean one.
struct SampledInnerProduct {
  MatrixXd points;  ///< m x M
  VectorXd weights;
  CubeDomain domain;
  std::uint64_t seed = 0;

  Index size() const { return points.cols(); }
  int dim() const { return static_cast<int>(points.rows()); }

  double inner(const VectorXd& f, const VectorXd& g, Index n) const;
  double norm(const VectorXd& f, Index n) const { return std::sqrt(inner(f, f, n)); }
  /// Applies the sqrt(w_i / M) row scaling to stacked samples with n outputs.
  MatrixXd weigh(const MatrixXd& samples, Index n) const;
};

/// M points drawn uniformly from the cube; unit weights unless given.
SampledInnerProduct build_inner_product(const CubeDomain& domain, Index num_points, std::uint64_t seed,
                                        std::optional<VectorXd> weights = std::nullopt);

/// Spectrum of the Gram matrix G_ij = <F_i, F_j> of a dictionary.
struct GramCertificate {
  VectorXd eigenvalues;  ///< ascending
  double min_eigenvalue = 0.0;
  double condition = 0.0;
  bool positive_definite = false;
};

GramCertificate gram_certificate(const Dictionary& dict, const SampledInnerProduct& inner);

/// theta_hat(xi)_x = -phi(xi) x on the input space.
VectorXd generator_vector(const ActionPair& pair, const LieAlgebraElement& xi, const VectorXd& x);

/// (L_xi F)(x) = psi(xi) F(x) - DF(x) phi(xi) x.
VectorXd lie_derivative_eval(const ActionPair& pair, const Dictionary& dict, const ModelCoefficients& coeffs,
                             const LieAlgebraElement& xi, const VectorXd& x);

/// (K_g F)(x) = Psi(g) F(Phi(g)^{-1} x).
VectorXd finite_transform_eval(const ActionPair& pair, const Dictionary& dict, const ModelCoefficients& coeffs,
                               const MatrixXd& g, const VectorXd& x);

/// Stacked samples (M n x N) of L_xi F_i at the inner-product points, unweighted.
MatrixXd sample_lie_derivatives(const ActionPair& pair, const Dictionary& dict, const SampledInnerProduct& inner,
                                const MatrixXd& phi_in, const MatrixXd& psi_out);
/// Stacked samples (M n x N) of K_g F_i at the inner-product points, unweighted.
MatrixXd sample_finite_transforms(const ActionPair& pair, const Dictionary& dict, const SampledInnerProduct& inner,
                                  const MatrixXd& g);

/// Sample count that makes the sampled form an inner product on span{L_xi F_i}
/// almost surely, for polynomial dictionaries: C(d' + m, m) where d' is the
/// dictionary degree, lowered by one when the action is by pure translations
/// with a trivial output action. Returns nullopt for non-polynomial dictionaries.
std::optional<Index> certified_sample_count(const ActionPair& pair, const Dictionary& dict);

/// Default M: the certified count, or 4 N dim G for other dictionaries.
Index default_sample_count(const ActionPair& pair, const Dictionary& dict);

/// [L_{F_i}]_{j,k} = <u_j, L_{xi_k} F_i> with u an orthonormal basis of F'.
struct LieOperatorTensor {
  GroupDescriptor group;
  DictionaryDescriptor dictionary;
  SampledInnerProduct inner;
  Index num_functions = 0;  ///< N
  Index range_dim = 0;      ///< N'
  Index algebra_dim = 0;    ///< dim G
  /// (N' dim G) x N; column i is the column-major vec of the N' x dim G slice L[i].
  MatrixXd slices;
  Index dropped = 0;
  /// max/min Gram-Schmidt pivot ratio; grows with the conditioning of the sampled Gram matrix.
  double gram_condition = 0.0;

  MatrixXd slice(Index i) const;
  /// L_F = sum_i c_i L[i] (N' x dim G).
  MatrixXd operator_matrix(const VectorXd& coeffs) const;
  /// Adjoint of c -> L_F applied to an N' x dim G matrix.
  VectorXd adjoint(const MatrixXd& y) const;
};

struct TensorOptions {
  double drop_tolerance = 1e-10;
  /// Absolute floor for candidates, relative to the largest candidate norm.
  double floor_relative = 1e-13;
  /// Skip the certified-count check (for callers that validate M themselves).
  bool enforce_certificate = true;
};

LieOperatorTensor assemble_lie_tensor(const ActionPair& pair, const Dictionary& dict,
                                      const SampledInnerProduct& inner, const TensorOptions& options = {});

/// Matrix of L_xi on a dictionary span closed under L_xi, in the dictionary
/// basis, fitted by least squares on the sample points.
struct LieDerivativeMatrix {
  MatrixXd matrix;
  double residual = 0.0;  ///< relative residual of the fit; ~0 iff the span is closed
};

LieDerivativeMatrix lie_derivative_matrix(const ActionPair& pair, const Dictionary& dict,
                                          const SampledInnerProduct& inner, const LieAlgebraElement& xi);

}  // namespace liesym
