#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace liesym {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class GroupKind { Trivial, SO, O, SE, GL, T, DirectProduct };

std::string to_string(GroupKind kind);
GroupKind parse_group_kind(std::string_view name);

/// Serializable description of a group: {kind, n, factors?}.
struct GroupDescriptor {
  GroupKind kind = GroupKind::Trivial;
  int n = 0;
  std::vector<GroupDescriptor> factors;

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

std::string to_string(const GroupDescriptor& d);

class LieAlgebraElement;

namespace detail {
struct GroupData;
}

/// A matrix Lie group with a Frobenius-orthonormal Lie algebra basis and one
/// representative per non-identity connected component.
///
/// Canonical basis ordering:
///  - so(n): (E_ij - E_ji)/sqrt(2) for i < j, lexicographic in (i, j);
///  - se(n): the so(n) block followed by the translations E_{i,n}, i = 0..n-1;
///  - t(n):  E_{i,n};
///  - gl(n): E_ij, row-major;
///  - direct products: factor bases in order, embedded block-diagonally.
/// O(n) has the single component representative diag(-1, 1, ..., 1).
///
/// Instances are immutable and cheap to copy (shared state).
class MatrixLieGroup {
 public:
  static MatrixLieGroup make(GroupKind kind, int n);
  static MatrixLieGroup direct_product(const std::vector<MatrixLieGroup>& factors);
  static MatrixLieGroup from_descriptor(const GroupDescriptor& descriptor);

  GroupKind kind() const;
  int n() const;
  Index ambient_dim() const;
  Index dim() const;
  const std::vector<MatrixXd>& algebra_basis() const;
  const std::vector<MatrixXd>& component_reps() const;
  const std::vector<MatrixLieGroup>& factors() const;
  const GroupDescriptor& descriptor() const;
  std::string name() const;

  /// SE(n) and T(n) act on R^n through homogeneous coordinates x -> (x, 1).
  bool is_affine() const;

  LieAlgebraElement element(const VectorXd& coeffs) const;
  LieAlgebraElement basis_element(Index k) const;
  LieAlgebraElement zero() const;

  /// Frobenius coordinates of an ambient matrix against the algebra basis.
  VectorXd coordinates(const MatrixXd& ambient) const;

  bool in_algebra(const MatrixXd& ambient, double tol = 1e-10) const;
  bool in_group(const MatrixXd& g, double tol = 1e-10) const;

  friend bool operator==(const MatrixLieGroup& a, const MatrixLieGroup& b);

 private:
  explicit MatrixLieGroup(std::shared_ptr<const detail::GroupData> data) : data_(std::move(data)) {}
  std::shared_ptr<const detail::GroupData> data_;
};

/// Element of Lie(G): coefficients in the group's basis plus the ambient matrix.
class LieAlgebraElement {
 public:
  LieAlgebraElement(MatrixLieGroup group, VectorXd coeffs);

  const MatrixLieGroup& group() const { return group_; }
  const VectorXd& coeffs() const { return coeffs_; }
  const MatrixXd& matrix() const { return matrix_; }

  LieAlgebraElement operator+(const LieAlgebraElement& other) const;
  LieAlgebraElement operator*(double s) const;

 private:
  MatrixLieGroup group_;
  VectorXd coeffs_;
  MatrixXd matrix_;
};

inline LieAlgebraElement operator*(double s, const LieAlgebraElement& x) { return x * s; }

/// Matrix exponential by scaling and squaring of the degree-13 Taylor polynomial;
/// the matrix is scaled until its 1-norm is at most 0.5.
MatrixXd expm(const MatrixXd& a);

/// exp(t * xi) as an ambient group matrix.
MatrixXd exp_map(const LieAlgebraElement& xi, double t = 1.0);

/// [xi, eta] = xi eta - eta xi re-expressed in the algebra basis.
/// Throws DimensionError for elements of different groups and NumericalError
/// when the commutator leaves the algebra.
LieAlgebraElement bracket(const LieAlgebraElement& xi, const LieAlgebraElement& eta);

/// Orthogonal (Frobenius) projection of an ambient matrix onto Lie(G).
LieAlgebraElement algebra_projection(const MatrixLieGroup& group, const MatrixXd& ambient);

}  // namespace liesym
