#include "liesym/discover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "liesym/error.hpp"

namespace liesym {

std::vector<LieAlgebraElement> SymmetryReport::generators(const MatrixLieGroup& g) const {
  if (g.descriptor() != group) throw DimensionError("report belongs to a different group");
  std::vector<LieAlgebraElement> out;
  for (Index k = 0; k < basis.cols(); ++k) out.push_back(g.element(basis.col(k)));
  return out;
}

namespace {

SymmetryReport report_from_operator(const MatrixXd& op, const GroupDescriptor& group, const RankCutoff& cutoff) {
  SymmetryReport out;
  out.group = group;
  const Nullspace ns = nullspace(op, cutoff);
  out.singular_values = ns.singular_values;
  out.threshold = ns.threshold;
  out.basis = ns.basis;
  for (Index k = 0; k < ns.basis.cols(); ++k) out.residuals.push_back(op.rows() ? (op * ns.basis.col(k)).norm() : 0.0);
  out.operator_matrix = op;
  return out;
}

// Zero out singular values that are negligible against an a-priori bound on
// sigma_max (||T|| ||c||, or the unprojected generators); without it an exactly
// symmetric input has no scale.
RankCutoff with_scale_floor(RankCutoff cutoff, double scale) {
  if (!cutoff.absolute) cutoff.absolute = cutoff.relative * scale;
  return cutoff;
}

}  // namespace

SymmetryReport function_symmetries(const LieOperatorTensor& tensor, const VectorXd& coeffs,
                                   const DiscoverOptions& options) {
  SymmetryReport out = report_from_operator(tensor.operator_matrix(coeffs), tensor.group,
                                            with_scale_floor(options.cutoff, tensor.slices.norm() * coeffs.norm()));
  out.seed = tensor.inner.seed;
  out.num_points = tensor.inner.size();
  out.source = "function";
  return out;
}

SymmetryReport shared_symmetries(const std::vector<LieOperatorTensor>& tensors, const std::vector<VectorXd>& coeffs,
                                 const DiscoverOptions& options) {
  if (tensors.empty()) throw InvalidArgument("shared_symmetries needs at least one tensor");
  if (tensors.size() != coeffs.size()) throw DimensionError("one coefficient vector is needed per tensor");
  Index rows = 0;
  for (const auto& t : tensors) {
    if (t.group != tensors.front().group) throw DimensionError("tensors use different candidate groups");
    rows += t.range_dim;
  }
  const Index dim_g = tensors.front().algebra_dim;
  MatrixXd stacked(rows, dim_g);
  Index row = 0;
  double scale_sq = 0.0;
  for (std::size_t l = 0; l < tensors.size(); ++l) {
    stacked.middleRows(row, tensors[l].range_dim) = tensors[l].operator_matrix(coeffs[l]);
    row += tensors[l].range_dim;
    scale_sq += tensors[l].slices.squaredNorm() * coeffs[l].squaredNorm();
  }
  SymmetryReport out =
      report_from_operator(stacked, tensors.front().group, with_scale_floor(options.cutoff, std::sqrt(scale_sq)));
  out.seed = tensors.front().inner.seed;
  out.num_points = tensors.front().inner.size();
  out.source = "layers";
  return out;
}

int default_neighbor_count(int intrinsic_dim) { return std::max(2 * intrinsic_dim + 2, 10); }

PointCloud estimate_tangent_frames(const PointCloud& cloud, int k_neighbors) {
  const int m = cloud.intrinsic_dim;
  if (m < 1 || m > cloud.ambient_dim()) throw InvalidArgument("intrinsic dimension out of range");
  if (k_neighbors < m) throw InvalidArgument("k_neighbors must be at least the intrinsic dimension");
  const Index count = cloud.size();
  if (count < k_neighbors + 1) {
    throw InvalidArgument("point cloud has " + std::to_string(count) + " points, fewer than k + 1 = " +
                          std::to_string(k_neighbors + 1));
  }
  PointCloud out = cloud;
  out.frames.assign(count, MatrixXd());
  std::vector<std::pair<double, Index>> dist(count);
  MatrixXd local(cloud.ambient_dim(), k_neighbors + 1);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < count; ++j) dist[j] = {(cloud.points.col(j) - cloud.points.col(i)).squaredNorm(), j};
    std::partial_sort(dist.begin(), dist.begin() + k_neighbors + 1, dist.end());
    // The point itself has distance zero and sorts first unless duplicated.
    local.col(0) = cloud.points.col(i);
    Index filled = 1;
    for (Index r = 0; filled <= k_neighbors; ++r) {
      if (dist[r].second == i) continue;
      local.col(filled++) = cloud.points.col(dist[r].second);
    }
    const VectorXd mean = local.rowwise().mean();
    Eigen::JacobiSVD<MatrixXd> svd(local.colwise() - mean, Eigen::ComputeThinU);
    out.frames[i] = svd.matrixU().leftCols(m);
  }
  return out;
}

SymmetryReport pointcloud_symmetries(const PointCloud& cloud, const Representation& action,
                                     const DiscoverOptions& options) {
  if (!cloud.has_frames()) throw InvalidArgument("point cloud has no tangent frames; estimate them first");
  if (static_cast<Index>(cloud.frames.size()) != cloud.size()) throw DimensionError("one frame is needed per point");
  const Index d = cloud.ambient_dim();
  if (action.space_dim() != d) throw DimensionError("action does not act on the point cloud's ambient space");
  const MatrixLieGroup& group = action.group();
  const Index dim_g = group.dim();
  const Index count = cloud.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));

  MatrixXd b(d * count, dim_g);
  double theta_sq = 0.0;
  for (Index i = 0; i < count; ++i) {
    const VectorXd z = cloud.points.col(i);
    const MatrixXd& u = cloud.frames[i];
    if (u.rows() != d) throw DimensionError("frame has the wrong ambient dimension");
    for (Index k = 0; k < dim_g; ++k) {
      const VectorXd theta = -action.apply_algebra(action.basis_matrices()[k], z);
      theta_sq += theta.squaredNorm();
      b.block(i * d, k, d, 1) = scale * (theta - u * (u.transpose() * theta));
    }
  }
  SymmetryReport out =
      report_from_operator(b, group.descriptor(), with_scale_floor(options.cutoff, scale * std::sqrt(theta_sq)));
  out.operator_matrix = b.transpose() * b;
  out.num_points = count;
  out.source = "pointcloud";
  out.notes.push_back("the sample count needed for a stable nullity is not known a priori; compare against a doubled cloud");
  return out;
}

SymmetryReport graph_symmetries(const MatrixXd& inputs, const MatrixXd& outputs, const ActionPair& pair,
                                const GraphFrames& frames, const DiscoverOptions& options) {
  const Index m = inputs.rows();
  const Index n = outputs.rows();
  const Index count = inputs.cols();
  if (outputs.cols() != count) throw DimensionError("inputs and outputs have different sample counts");
  if (pair.input_dim() != m || pair.output_dim() != n) throw DimensionError("pair action does not match the data");
  if (count == 0) throw InvalidArgument("graph_symmetries needs at least one pair");

  std::vector<MatrixXd> tangent(count);
  if (!frames.jacobians.empty()) {
    if (static_cast<Index>(frames.jacobians.size()) != count) throw DimensionError("one Jacobian is needed per pair");
    for (Index j = 0; j < count; ++j) {
      tangent[j].resize(m + n, m);
      tangent[j] << MatrixXd::Identity(m, m), frames.jacobians[j];
    }
  } else {
    PointCloud graph;
    graph.points.resize(m + n, count);
    graph.points << inputs, outputs;
    graph.intrinsic_dim = static_cast<int>(m);
    const int k = frames.k_neighbors > 0 ? frames.k_neighbors : default_neighbor_count(static_cast<int>(m));
    tangent = estimate_tangent_frames(graph, k).frames;
  }

  const MatrixLieGroup& group = pair.group();
  const Index dim_g = group.dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));
  MatrixXd b(count * (m + n), dim_g);
  VectorXd theta(m + n);
  double theta_sq = 0.0;
  for (Index j = 0; j < count; ++j) {
    const MatrixXd& u = tangent[j];
    Eigen::FullPivLU<MatrixXd> eu(u.topRows(m));
    if (!eu.isInvertible() || eu.rcond() < 1e-12) {
      throw NumericalError("tangent frame at pair " + std::to_string(j) + " is not a graph over the input space");
    }
    for (Index k = 0; k < dim_g; ++k) {
      theta.head(m) = -pair.in.apply_algebra(pair.in.basis_matrices()[k], inputs.col(j));
      theta.tail(n) = -pair.out.basis_matrices()[k] * outputs.col(j);
      theta_sq += theta.squaredNorm();
      const VectorXd proj = u * eu.solve(theta.head(m));
      b.block(j * (m + n), k, m + n, 1) = scale * (theta - proj);
    }
  }
  SymmetryReport out =
      report_from_operator(b, group.descriptor(), with_scale_floor(options.cutoff, scale * std::sqrt(theta_sq)));
  out.num_points = count;
  out.source = frames.jacobians.empty() ? "graph-pca" : "graph-jacobian";
  return out;
}

ConservedQuantities conserved_quantities(const Dictionary& field_dict, const VectorXd& field_coeffs,
                                         const Dictionary& candidate_dict, const SampledInnerProduct& inner,
                                         const DiscoverOptions& options) {
  if (candidate_dict.output_dim() != 1) throw DimensionError("candidate functions must be scalar");
  if (field_dict.input_dim() != field_dict.output_dim()) throw DimensionError("the field must map R^n to R^n");
  if (candidate_dict.input_dim() != field_dict.input_dim()) throw DimensionError("candidates live on another space");
  MatrixXd op(inner.size(), candidate_dict.size());
  for (Index j = 0; j < inner.size(); ++j) {
    const VectorXd x = inner.points.col(j);
    op.row(j) = candidate_dict.directional(x, evaluate_model(field_dict, field_coeffs, x));
  }
  op = inner.weigh(op, 1);
  const Nullspace ns = nullspace(op, options.cutoff);
  ConservedQuantities out;
  out.columns = ns.basis;
  out.singular_values = ns.singular_values;
  out.threshold = ns.threshold;
  for (Index k = 0; k < ns.basis.cols(); ++k) out.residuals.push_back((op * ns.basis.col(k)).norm());
  return out;
}

SymmetryReport vectorfield_symmetries(const Dictionary& field_dict, const VectorXd& field_coeffs,
                                      const Representation& action, const SampledInnerProduct& inner,
                                      const DiscoverOptions& options) {
  if (field_coeffs.size() != field_dict.size()) throw DimensionError("field coefficients do not match the dictionary");
  const ActionPair pair(action, Representation::linear_part(action));
  const Index n = field_dict.output_dim();
  const Index dim_g = action.group().dim();
  MatrixXd op(inner.size() * n, dim_g);
  for (Index k = 0; k < dim_g; ++k) {
    const MatrixXd s =
        sample_lie_derivatives(pair, field_dict, inner, action.basis_matrices()[k], pair.out.basis_matrices()[k]);
    op.col(k) = s * field_coeffs;
  }
  SymmetryReport out = report_from_operator(inner.weigh(op, n), action.group().descriptor(), options.cutoff);
  out.seed = inner.seed;
  out.num_points = inner.size();
  out.source = "vectorfield";
  return out;
}

}  // namespace liesym
