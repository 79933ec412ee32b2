#include "liesym/enforce.hpp"

#include <iomanip>

#include "liesym/error.hpp"

namespace liesym {

namespace {

EquivariantBasis solve_constraints(const MatrixXd& constraints, Index n, const RankCutoff& cutoff) {
  EquivariantBasis out;
  const Nullspace ns = nullspace(constraints, cutoff);
  out.columns = ns.basis;
  out.singular_values = ns.singular_values;
  out.threshold = ns.threshold;
  out.constraint_rows = constraints.rows();
  out.residuals.reserve(ns.basis.cols());
  for (Index k = 0; k < ns.basis.cols(); ++k) {
    out.residuals.push_back(constraints.rows() > 0 ? (constraints * ns.basis.col(k)).norm() : 0.0);
  }
  if (n != ns.basis.rows()) throw DimensionError("constraint matrix has the wrong width");
  return out;
}

}  // namespace

EquivariantBasis equivariant_function_basis(const LieOperatorTensor& tensor, const ActionPair& pair,
                                            const Dictionary& dict, const SampledInnerProduct& inner,
                                            const EnforceOptions& options) {
  if (dict.size() == 0) throw InvalidArgument("empty dictionary");
  if (tensor.num_functions != dict.size()) throw DimensionError("tensor was assembled for a different dictionary");
  if (tensor.algebra_dim != pair.group().dim()) throw DimensionError("tensor was assembled for a different group");
  const Index n_out = dict.output_dim();
  const auto& reps = pair.group().component_reps();

  const MatrixXd values = evaluation_matrix(dict, inner.points);
  MatrixXd constraints(tensor.slices.rows() + static_cast<Index>(reps.size()) * values.rows(), dict.size());
  constraints.topRows(tensor.slices.rows()) = tensor.slices;
  Index row = tensor.slices.rows();
  for (const MatrixXd& g : reps) {
    constraints.middleRows(row, values.rows()) =
        inner.weigh(sample_finite_transforms(pair, dict, inner, g) - values, n_out);
    row += values.rows();
  }
  EquivariantBasis out = solve_constraints(constraints, dict.size(), options.cutoff);
  out.group = pair.group().descriptor();
  out.dictionary = dict.descriptor();
  out.seed = inner.seed;
  out.num_points = inner.size();
  return out;
}

LayerBasis equivariant_layer_basis(const Representation& rep_prev, const Representation& rep_next,
                                   const EnforceOptions& options) {
  if (!(rep_prev.group() == rep_next.group())) throw DimensionError("layer representations use different groups");
  if (rep_prev.affine() || rep_next.affine()) throw InvalidArgument("layer representations must be linear");
  const MatrixLieGroup& group = rep_prev.group();
  const Index p = rep_prev.dim();
  const Index q = rep_next.dim();
  const Index nw = p * q;
  const Index nvar = nw + q;
  const MatrixXd ip = MatrixXd::Identity(p, p);
  const MatrixXd iq = MatrixXd::Identity(q, q);

  std::vector<MatrixXd> blocks;
  auto add = [&](const MatrixXd& a_next, const MatrixXd& a_prev, const MatrixXd& bias) {
    MatrixXd blk = MatrixXd::Zero(nw + q, nvar);
    blk.block(0, 0, nw, nw) = kron(ip, a_next) - kron(a_prev.transpose(), iq);
    blk.block(nw, nw, q, q) = bias;
    blocks.push_back(std::move(blk));
  };
  for (Index k = 0; k < group.dim(); ++k) {
    const MatrixXd& pn = rep_next.basis_matrices()[k];
    add(pn, rep_prev.basis_matrices()[k], pn);
  }
  for (const MatrixXd& g : group.component_reps()) {
    const MatrixXd gn = rep_next.group_matrix(g);
    add(gn, rep_prev.group_matrix(g), gn - iq);
  }
  MatrixXd constraints(static_cast<Index>(blocks.size()) * (nw + q), nvar);
  for (std::size_t b = 0; b < blocks.size(); ++b) constraints.middleRows(static_cast<Index>(b) * (nw + q), nw + q) = blocks[b];

  const Nullspace ns = nullspace(constraints, options.cutoff);
  LayerBasis out;
  out.columns = ns.basis;
  out.singular_values = ns.singular_values;
  out.threshold = ns.threshold;
  for (Index k = 0; k < ns.basis.cols(); ++k) {
    out.weights.push_back(unvec(ns.basis.col(k).head(nw), q, p));
    out.biases.push_back(ns.basis.col(k).tail(q));
  }
  return out;
}

MatrixXd KernelBasis::evaluate(Index k, const VectorXd& x, const VectorXd& y) const {
  if (x.size() != n || y.size() != m) throw DimensionError("kernel arguments have the wrong dimension");
  VectorXd xy(n + m);
  xy << x, y;
  return unvec(evaluate_model(dictionary, basis.columns.col(k), xy), rows, cols);
}

KernelBasis equivariant_kernel_basis(const Representation& rep_rm, const Representation& rep_rn,
                                     const Representation& rep_v, const Representation& rep_w, int degree,
                                     const KernelOptions& options) {
  if (degree < 0 || degree > options.max_degree) {
    throw InvalidArgument("kernel degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(options.max_degree) + "]");
  }
  const Representation values = Representation::kernel_values(rep_w, rep_v, rep_rm);
  const Representation domain = Representation::direct_sum(rep_rn, rep_rm);
  const ActionPair pair(domain, values);
  const int dim_xy = static_cast<int>(domain.space_dim());
  Dictionary dict = Dictionary::polynomial(dim_xy, static_cast<int>(values.dim()), degree);
  const Index points = options.num_points.value_or(default_sample_count(pair, dict));
  const SampledInnerProduct inner =
      build_inner_product(CubeDomain::symmetric(dim_xy), std::max<Index>(points, 1), options.seed);
  const LieOperatorTensor tensor = assemble_lie_tensor(pair, dict, inner);

  KernelBasis out{equivariant_function_basis(tensor, pair, dict, inner, options.enforce), dict, rep_w.dim(),
                  rep_v.dim(), static_cast<int>(rep_rn.space_dim()), static_cast<int>(rep_rm.space_dim())};
  return out;
}

void write_kernel_table(std::ostream& os, const KernelBasis& kb, const MatrixXd& grid) {
  if (grid.rows() != kb.n + kb.m) throw DimensionError("grid points must have n + m coordinates");
  os << "basis";
  for (int i = 0; i < kb.n; ++i) os << ",x" << i + 1;
  for (int i = 0; i < kb.m; ++i) os << ",y" << i + 1;
  for (Index i = 0; i < kb.rows * kb.cols; ++i) os << ",k" << i + 1;
  os << '\n' << std::setprecision(17);
  for (Index k = 0; k < kb.basis.dim(); ++k) {
    for (Index j = 0; j < grid.cols(); ++j) {
      const VectorXd v = evaluate_model(kb.dictionary, kb.basis.columns.col(k), grid.col(j));
      os << k;
      for (Index i = 0; i < grid.rows(); ++i) os << ',' << grid(i, j);
      for (Index i = 0; i < v.size(); ++i) os << ',' << v[i];
      os << '\n';
    }
  }
}

}  // namespace liesym
