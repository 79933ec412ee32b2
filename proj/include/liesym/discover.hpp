#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liesym/linalg.hpp"
#include "liesym/operators.hpp"

namespace liesym {

/// Nullspace of a linear operator on the Lie algebra.
struct SymmetryReport {
  GroupDescriptor group;
  VectorXd singular_values;  ///< nonincreasing, length dim G
  double threshold = 0.0;
  /// dim G x nullity; orthonormal coordinates in the group's algebra basis.
  MatrixXd basis;
  /// Norm of the operator applied to each basis column.
  std::vector<double> residuals;
  /// The operator itself (rows x dim G), kept for downstream checks.
  MatrixXd operator_matrix;
  std::uint64_t seed = 0;
  Index num_points = 0;
  std::string source;
  std::vector<std::string> notes;

  Index nullity() const { return basis.cols(); }
  /// The reported generators as algebra elements of the given group.
  std::vector<LieAlgebraElement> generators(const MatrixLieGroup& g) const;
};

struct DiscoverOptions {
  RankCutoff cutoff;
};

/// Nullspace of L_F = sum_i c_i L[i].
SymmetryReport function_symmetries(const LieOperatorTensor& tensor, const VectorXd& coeffs,
                                   const DiscoverOptions& options = {});

/// Nullspace of the vertically stacked L_{F^(l)}.
SymmetryReport shared_symmetries(const std::vector<LieOperatorTensor>& tensors, const std::vector<VectorXd>& coeffs,
                                 const DiscoverOptions& options = {});

/// Points z_i in R^d (columns) with optional orthonormal tangent frames.
struct PointCloud {
  MatrixXd points;  ///< d x M
  int intrinsic_dim = 1;
  std::vector<MatrixXd> frames;  ///< each d x intrinsic_dim

  Index size() const { return points.cols(); }
  int ambient_dim() const { return static_cast<int>(points.rows()); }
  bool has_frames() const { return !frames.empty(); }
};

/// Default neighbour count max(2m + 2, 10).
int default_neighbor_count(int intrinsic_dim);

/// Local PCA: the top intrinsic_dim principal directions of each point
/// together with its k nearest neighbours, centred on their mean.
PointCloud estimate_tangent_frames(const PointCloud& cloud, int k_neighbors);

/// Nullspace of S = (1/M) sum_z Theta(z)^T (I - P_z)^T (I - P_z) Theta(z), where
/// column k of Theta(z) is the generator -phi(xi_k) z. The reported spectrum is
/// that of the stacked residual operator, i.e. the square roots of eig(S).
SymmetryReport pointcloud_symmetries(const PointCloud& cloud, const Representation& action,
                                     const DiscoverOptions& options = {});

/// Where graph tangent frames come from.
struct GraphFrames {
  /// Jacobians DF(x_j) (n x m); when empty, frames are estimated by local PCA.
  std::vector<MatrixXd> jacobians;
  int k_neighbors = 0;  ///< 0 selects the default
};

/// Symmetries of the graph {(x_j, y_j)} under (x, y) -> (Phi_in x, Psi_out y),
/// using P_z = U (E U)^{-1} E with E the projection onto the input coordinates.
SymmetryReport graph_symmetries(const MatrixXd& inputs, const MatrixXd& outputs, const ActionPair& pair,
                                const GraphFrames& frames, const DiscoverOptions& options = {});

/// Nullspace of f -> (df/dx) F over a scalar candidate dictionary.
struct ConservedQuantities {
  MatrixXd columns;  ///< N_candidates x k
  VectorXd singular_values;
  double threshold = 0.0;
  std::vector<double> residuals;

  Index nullity() const { return columns.cols(); }
};

ConservedQuantities conserved_quantities(const Dictionary& field_dict, const VectorXd& field_coeffs,
                                         const Dictionary& candidate_dict, const SampledInnerProduct& inner,
                                         const DiscoverOptions& options = {});

/// Nullspace of xi -> [theta_hat(xi), F] for a vector field F on the space
/// acted on by `action`, sampled at the inner-product points.
SymmetryReport vectorfield_symmetries(const Dictionary& field_dict, const VectorXd& field_coeffs,
                                      const Representation& action, const SampledInnerProduct& inner,
                                      const DiscoverOptions& options = {});

}  // namespace liesym
