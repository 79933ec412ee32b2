#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace liesym {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Rank cutoff: a singular value counts as zero when it falls below
/// max(relative * sigma_max, absolute).
struct RankCutoff {
  double relative = 1e-8;
  std::optional<double> absolute;

  double threshold(double sigma_max) const {
    const double rel = relative * sigma_max;
    return absolute ? std::max(rel, *absolute) : rel;
  }
};

/// Right nullspace of a matrix together with its full singular spectrum.
struct Nullspace {
  /// Nonincreasing, padded with zeros to the number of columns.
  VectorXd singular_values;
  /// Orthonormal columns spanning the numerical nullspace.
  MatrixXd basis;
  /// Right singular vectors (all of them), matching singular_values.
  MatrixXd right_vectors;
  double threshold = 0.0;
  Index nullity() const { return basis.cols(); }
};

Nullspace nullspace(const MatrixXd& a, const RankCutoff& cutoff = {});

/// Orthonormal basis for the column span (rank decided by a relative cutoff).
MatrixXd orthonormal_span(const MatrixXd& a, double rel_tol = 1e-12);

/// Principal angles (radians, ascending) between the column spans of a and b.
/// Small angles are computed from sines so they stay accurate near zero.
VectorXd principal_angles(const MatrixXd& a, const MatrixXd& b);

/// Largest principal angle; +inf when the dimensions differ.
double subspace_distance(const MatrixXd& a, const MatrixXd& b);

/// True when span(a) is contained in span(b) up to the given angle.
bool span_contained(const MatrixXd& a, const MatrixXd& b, double tol);

/// Result of orthonormalizing a sequence of candidate columns.
struct GramSchmidtResult {
  MatrixXd q;                  ///< kept orthonormal directions
  std::vector<Index> kept;     ///< indices of the candidates that produced them
  std::vector<double> pivots;  ///< residual norm of each kept candidate
  Index dropped = 0;
};

/// Modified Gram-Schmidt with one reorthogonalization pass. A candidate is
/// dropped when its residual after projection is below drop_tol times its
/// original norm, or when its norm is below abs_floor.
GramSchmidtResult modified_gram_schmidt(const MatrixXd& candidates, double drop_tol,
                                        double abs_floor = 0.0);

/// Column-major vectorization helpers.
VectorXd vec(const MatrixXd& m);
MatrixXd unvec(const VectorXd& v, Index rows, Index cols);

/// Kronecker product of two dense matrices.
MatrixXd kron(const MatrixXd& a, const MatrixXd& b);

}  // namespace liesym
