#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liesym/liegroup.hpp"

namespace liesym {

/// A paired group representation g -> Phi(g) and its differential xi -> phi(xi).
///
/// Affine representations act on R^k through homogeneous coordinates: the
/// matrices are (k+1)x(k+1) with last row (0,...,0,1) for group elements and
/// zero for algebra elements, and apply_* act on points v in R^k via (v, 1).
class Representation {
 public:
  using AlgebraMap = std::function<MatrixXd(const MatrixXd&)>;
  using GroupMap = std::function<MatrixXd(const MatrixXd&)>;

  Representation(MatrixLieGroup group, Index dim, bool affine, AlgebraMap algebra, GroupMap group_map,
                 std::string name);

  /// The defining representation of a matrix group (affine for SE(n), T(n)).
  static Representation identity(const MatrixLieGroup& group);
  /// Phi(g) = I, phi(xi) = 0 on R^dim.
  static Representation trivial(const MatrixLieGroup& group, Index dim);
  /// Block sum; two affine summands share a single homogeneous coordinate.
  static Representation direct_sum(const Representation& a, const Representation& b);
  /// Linear part of an affine representation (the differential of the action).
  static Representation linear_part(const Representation& rep);

  enum class Block { Position, Vector };
  /// Rigid motions acting on a stack of R^n blocks: positions rotate and
  /// translate, vectors (velocities, momenta) only rotate. The group must be
  /// SE(n), SO(n) or T(n); SE(n)/T(n) give an affine representation.
  static Representation particles(const MatrixLieGroup& group, const std::vector<Block>& blocks);

  /// Values of integral kernels, W (x) V*: A -> Phi_W A Phi_V^{-1} det(Phi_Rm^{-1}),
  /// in column-major vec(A) coordinates.
  static Representation kernel_values(const Representation& rep_w, const Representation& rep_v,
                                      const Representation& rep_rm);

  const MatrixLieGroup& group() const { return group_; }
  /// Matrix size (includes the homogeneous coordinate for affine representations).
  Index dim() const { return dim_; }
  /// Dimension of the space acted upon.
  Index space_dim() const { return affine_ ? dim_ - 1 : dim_; }
  bool affine() const { return affine_; }
  const std::string& name() const { return name_; }

  MatrixXd group_matrix(const MatrixXd& g) const;
  MatrixXd algebra_matrix(const MatrixXd& xi_ambient) const;
  MatrixXd algebra_matrix(const LieAlgebraElement& xi) const;
  /// phi(xi_k) for the group's algebra basis, cached at construction.
  const std::vector<MatrixXd>& basis_matrices() const { return basis_matrices_; }

  /// Phi(g) v (affine: first k entries of Phi(g)(v, 1)).
  VectorXd apply_group(const MatrixXd& g, const VectorXd& v) const;
  /// phi(xi) v (affine: first k entries of phi(xi)(v, 1)).
  VectorXd apply_algebra(const LieAlgebraElement& xi, const VectorXd& v) const;
  VectorXd apply_algebra(const MatrixXd& phi_xi, const VectorXd& v) const;
  /// Phi(g)^{-1} v.
  VectorXd apply_group_inverse(const MatrixXd& g, const VectorXd& v) const;

 private:
  MatrixLieGroup group_;
  Index dim_;
  bool affine_;
  AlgebraMap algebra_;
  GroupMap group_map_;
  std::string name_;
  std::vector<MatrixXd> basis_matrices_;
};

/// Input and output representations of one group, for functions R^m -> R^n.
struct ActionPair {
  Representation in;
  Representation out;

  ActionPair(Representation in_rep, Representation out_rep);
  const MatrixLieGroup& group() const { return in.group(); }
  Index input_dim() const { return in.space_dim(); }
  Index output_dim() const { return out.dim(); }
};

}  // namespace liesym
