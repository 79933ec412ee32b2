#include "liesym/representation.hpp"

#include "liesym/error.hpp"
#include "liesym/linalg.hpp"

namespace liesym {

Representation::Representation(MatrixLieGroup group, Index dim, bool affine, AlgebraMap algebra,
                               GroupMap group_map, std::string name)
    : group_(std::move(group)),
      dim_(dim),
      affine_(affine),
      algebra_(std::move(algebra)),
      group_map_(std::move(group_map)),
      name_(std::move(name)) {
  if (dim_ < (affine_ ? 1 : 0)) throw InvalidArgument("representation dimension too small");
  basis_matrices_.reserve(group_.dim());
  for (const auto& b : group_.algebra_basis()) {
    MatrixXd m = algebra_(b);
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw DimensionError("representation '" + name_ + "' produced a matrix of the wrong size");
    }
    basis_matrices_.push_back(std::move(m));
  }
}

Representation Representation::identity(const MatrixLieGroup& group) {
  return Representation(
      group, group.ambient_dim(), group.is_affine(), [](const MatrixXd& x) { return x; },
      [](const MatrixXd& g) { return g; }, "identity");
}

Representation Representation::trivial(const MatrixLieGroup& group, Index dim) {
  return Representation(
      group, dim, false, [dim](const MatrixXd&) { return MatrixXd::Zero(dim, dim); },
      [dim](const MatrixXd&) { return MatrixXd::Identity(dim, dim); }, "trivial");
}

namespace {

// Places the linear blocks of two representation matrices on the diagonal and
// merges their translation columns into one trailing homogeneous coordinate.
MatrixXd combine(const MatrixXd& ma, bool aff_a, const MatrixXd& mb, bool aff_b, bool group_element) {
  const Index la = aff_a ? ma.rows() - 1 : ma.rows();
  const Index lb = aff_b ? mb.rows() - 1 : mb.rows();
  const bool affine = aff_a || aff_b;
  const Index d = la + lb + (affine ? 1 : 0);
  MatrixXd out = MatrixXd::Zero(d, d);
  out.topLeftCorner(la, la) = ma.topLeftCorner(la, la);
  out.block(la, la, lb, lb) = mb.topLeftCorner(lb, lb);
  if (aff_a) out.block(0, d - 1, la, 1) = ma.block(0, la, la, 1);
  if (aff_b) out.block(la, d - 1, lb, 1) = mb.block(0, lb, lb, 1);
  if (affine && group_element) out(d - 1, d - 1) = 1.0;
  return out;
}

}  // namespace

Representation Representation::direct_sum(const Representation& a, const Representation& b) {
  if (!(a.group() == b.group())) throw DimensionError("direct sum of representations of different groups");
  const bool affine = a.affine() || b.affine();
  const Index d = a.space_dim() + b.space_dim() + (affine ? 1 : 0);
  return Representation(
      a.group(), d, affine,
      [a, b](const MatrixXd& x) {
        return combine(a.algebra_matrix(x), a.affine(), b.algebra_matrix(x), b.affine(), false);
      },
      [a, b](const MatrixXd& g) {
        return combine(a.group_matrix(g), a.affine(), b.group_matrix(g), b.affine(), true);
      },
      a.name() + "+" + b.name());
}

Representation Representation::linear_part(const Representation& rep) {
  if (!rep.affine()) return rep;
  const Index k = rep.space_dim();
  return Representation(
      rep.group(), k, false, [rep, k](const MatrixXd& x) { return MatrixXd(rep.algebra_matrix(x).topLeftCorner(k, k)); },
      [rep, k](const MatrixXd& g) { return MatrixXd(rep.group_matrix(g).topLeftCorner(k, k)); },
      "linear(" + rep.name() + ")");
}

Representation Representation::particles(const MatrixLieGroup& group, const std::vector<Block>& blocks) {
  const GroupKind kind = group.kind();
  if (kind != GroupKind::SE && kind != GroupKind::SO && kind != GroupKind::T) {
    throw InvalidArgument("particle representation requires SE(n), SO(n) or T(n)");
  }
  const Index n = group.n();
  const bool affine = group.is_affine();
  const Index k = n * static_cast<Index>(blocks.size());
  const Index d = affine ? k + 1 : k;
  auto build = [group, blocks, n, k, d, affine](const MatrixXd& x, bool group_element) {
    MatrixXd out = MatrixXd::Zero(d, d);
    const MatrixXd lin = x.topLeftCorner(n, n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Index off = static_cast<Index>(b) * n;
      out.block(off, off, n, n) = lin;
      if (affine && blocks[b] == Block::Position) out.block(off, k, n, 1) = x.block(0, n, n, 1);
    }
    if (affine && group_element) out(k, k) = 1.0;
    return out;
  };
  return Representation(
      group, d, affine, [build](const MatrixXd& x) { return build(x, false); },
      [build](const MatrixXd& g) { return build(g, true); }, "particles");
}

Representation Representation::kernel_values(const Representation& rep_w, const Representation& rep_v,
                                             const Representation& rep_rm) {
  if (!(rep_w.group() == rep_v.group()) || !(rep_w.group() == rep_rm.group())) {
    throw DimensionError("kernel representations must share one group");
  }
  if (rep_w.affine() || rep_v.affine()) throw InvalidArgument("kernel value spaces must be linear");
  const Index dw = rep_w.dim();
  const Index dv = rep_v.dim();
  const Index km = rep_rm.space_dim();
  return Representation(
      rep_w.group(), dw * dv, false,
      [rep_w, rep_v, rep_rm, dw, dv, km](const MatrixXd& x) {
        const MatrixXd pw = rep_w.algebra_matrix(x);
        const MatrixXd pv = rep_v.algebra_matrix(x);
        const double trace = rep_rm.algebra_matrix(x).topLeftCorner(km, km).trace();
        return MatrixXd(kron(MatrixXd::Identity(dv, dv), pw) - kron(pv.transpose(), MatrixXd::Identity(dw, dw)) -
                        trace * MatrixXd::Identity(dw * dv, dw * dv));
      },
      [rep_w, rep_v, rep_rm, km](const MatrixXd& g) {
        const MatrixXd gw = rep_w.group_matrix(g);
        const MatrixXd gv_inv = rep_v.group_matrix(g).inverse();
        const double det = rep_rm.group_matrix(g).topLeftCorner(km, km).determinant();
        return MatrixXd(kron(gv_inv.transpose(), gw) / det);
      },
      "kernel(" + rep_w.name() + "," + rep_v.name() + ")");
}

MatrixXd Representation::group_matrix(const MatrixXd& g) const {
  if (g.rows() != group_.ambient_dim() || g.cols() != group_.ambient_dim()) {
    throw DimensionError("group element has the wrong shape for " + group_.name());
  }
  return group_map_(g);
}

MatrixXd Representation::algebra_matrix(const MatrixXd& xi_ambient) const {
  if (xi_ambient.rows() != group_.ambient_dim() || xi_ambient.cols() != group_.ambient_dim()) {
    throw DimensionError("algebra element has the wrong shape for " + group_.name());
  }
  return algebra_(xi_ambient);
}

MatrixXd Representation::algebra_matrix(const LieAlgebraElement& xi) const {
  if (!(xi.group() == group_)) throw DimensionError("algebra element from a different group");
  MatrixXd out = MatrixXd::Zero(dim_, dim_);
  for (Index k = 0; k < xi.coeffs().size(); ++k) {
    if (xi.coeffs()[k] != 0.0) out += xi.coeffs()[k] * basis_matrices_[k];
  }
  return out;
}

namespace {
VectorXd act(const MatrixXd& m, bool affine, const VectorXd& v, double homogeneous) {
  if (!affine) return m * v;
  const Index k = m.rows() - 1;
  return m.topLeftCorner(k, k) * v + homogeneous * m.block(0, k, k, 1);
}
}  // namespace

VectorXd Representation::apply_group(const MatrixXd& g, const VectorXd& v) const {
  if (v.size() != space_dim()) throw DimensionError("vector size does not match representation");
  return act(group_matrix(g), affine_, v, 1.0);
}

VectorXd Representation::apply_group_inverse(const MatrixXd& g, const VectorXd& v) const {
  if (v.size() != space_dim()) throw DimensionError("vector size does not match representation");
  const MatrixXd m = group_matrix(g);
  Eigen::PartialPivLU<MatrixXd> lu(m);
  if (std::abs(lu.determinant()) == 0.0) throw NumericalError("singular representation matrix");
  return act(lu.inverse(), affine_, v, 1.0);
}

VectorXd Representation::apply_algebra(const LieAlgebraElement& xi, const VectorXd& v) const {
  return apply_algebra(algebra_matrix(xi), v);
}

VectorXd Representation::apply_algebra(const MatrixXd& phi_xi, const VectorXd& v) const {
  if (v.size() != space_dim()) throw DimensionError("vector size does not match representation");
  return act(phi_xi, affine_, v, 1.0);
}

ActionPair::ActionPair(Representation in_rep, Representation out_rep)
    : in(std::move(in_rep)), out(std::move(out_rep)) {
  if (!(in.group() == out.group())) throw DimensionError("action pair representations use different groups");
  if (out.affine()) throw InvalidArgument("output representation must be linear");
}

}  // namespace liesym
