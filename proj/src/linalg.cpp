#include "liesym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace liesym {

Nullspace nullspace(const MatrixXd& a, const RankCutoff& cutoff) {
  Nullspace out;
  const Index n = a.cols();
  out.singular_values = VectorXd::Zero(n);
  if (n == 0) {
    out.basis = MatrixXd(0, 0);
    out.right_vectors = MatrixXd(0, 0);
    return out;
  }
  if (a.rows() == 0) {
    out.basis = MatrixXd::Identity(n, n);
    out.right_vectors = out.basis;
    return out;
  }
  Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const VectorXd& s = svd.singularValues();
  out.singular_values.head(s.size()) = s;
  out.right_vectors = svd.matrixV();
  const double smax = s.size() > 0 ? s[0] : 0.0;
  out.threshold = cutoff.threshold(smax);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > out.threshold && s[i] > 0.0) ++rank;
  }
  out.basis = out.right_vectors.rightCols(n - rank);
  return out;
}

MatrixXd orthonormal_span(const MatrixXd& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return MatrixXd(a.rows(), 0);
  Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU);
  const VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s[0] : 0.0;
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * smax && s[i] > 0.0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

VectorXd principal_angles(const MatrixXd& a, const MatrixXd& b) {
  const MatrixXd qa = orthonormal_span(a);
  const MatrixXd qb = orthonormal_span(b);
  const Index k = std::min(qa.cols(), qb.cols());
  if (k == 0) return VectorXd(0);
  const MatrixXd& small = qa.cols() <= qb.cols() ? qa : qb;
  const MatrixXd& large = qa.cols() <= qb.cols() ? qb : qa;

  Eigen::JacobiSVD<MatrixXd> cos_svd(large.transpose() * small);
  VectorXd cosines = cos_svd.singularValues();  // descending => angles ascending

  const MatrixXd residual = small - large * (large.transpose() * small);
  Eigen::JacobiSVD<MatrixXd> sin_svd(residual);
  VectorXd sines = sin_svd.singularValues();  // descending => reverse for ascending
  std::reverse(sines.data(), sines.data() + sines.size());

  VectorXd angles(k);
  for (Index i = 0; i < k; ++i) {
    const double c = std::clamp(cosines[i], -1.0, 1.0);
    const double s = std::clamp(sines[i], 0.0, 1.0);
    angles[i] = (c * c < 0.5) ? std::acos(c) : std::asin(s);
  }
  std::sort(angles.data(), angles.data() + k);
  return angles;
}

double subspace_distance(const MatrixXd& a, const MatrixXd& b) {
  const MatrixXd qa = orthonormal_span(a);
  const MatrixXd qb = orthonormal_span(b);
  if (qa.cols() != qb.cols()) return std::numeric_limits<double>::infinity();
  if (qa.cols() == 0) return 0.0;
  return principal_angles(qa, qb).maxCoeff();
}

bool span_contained(const MatrixXd& a, const MatrixXd& b, double tol) {
  const MatrixXd qa = orthonormal_span(a);
  if (qa.cols() == 0) return true;
  const MatrixXd qb = orthonormal_span(b);
  if (qb.cols() < qa.cols()) return false;
  return principal_angles(qa, qb).maxCoeff() <= tol;
}

GramSchmidtResult modified_gram_schmidt(const MatrixXd& candidates, double drop_tol,
                                        double abs_floor) {
  GramSchmidtResult out;
  const Index rows = candidates.rows();
  const Index cols = candidates.cols();
  MatrixXd q(rows, std::min(rows, cols));
  Index kept = 0;
  VectorXd v(rows);
  for (Index c = 0; c < cols; ++c) {
    v = candidates.col(c);
    const double original = v.norm();
    if (original <= abs_floor || original == 0.0 || kept == rows) {
      ++out.dropped;
      continue;
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < kept; ++j) {
        v.noalias() -= q.col(j).dot(v) * q.col(j);
      }
    }
    const double residual = v.norm();
    if (residual < drop_tol * original) {
      ++out.dropped;
      continue;
    }
    q.col(kept) = v / residual;
    out.kept.push_back(c);
    out.pivots.push_back(residual);
    ++kept;
  }
  out.q = q.leftCols(kept);
  return out;
}

VectorXd vec(const MatrixXd& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

MatrixXd unvec(const VectorXd& v, Index rows, Index cols) {
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace liesym
