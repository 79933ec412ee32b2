#include "liesym/liegroup.hpp"

#include <cmath>
#include <numbers>

#include "liesym/error.hpp"

namespace liesym {

namespace detail {
struct GroupData {
  GroupDescriptor descriptor;
  Index ambient = 0;
  std::vector<MatrixXd> basis;
  std::vector<MatrixXd> components;
  std::vector<MatrixLieGroup> factors;
};
}  // namespace detail

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Trivial: return "trivial";
    case GroupKind::SO: return "SO";
    case GroupKind::O: return "O";
    case GroupKind::SE: return "SE";
    case GroupKind::GL: return "GL";
    case GroupKind::T: return "T";
    case GroupKind::DirectProduct: return "product";
  }
  return "?";
}

GroupKind parse_group_kind(std::string_view name) {
  if (name == "trivial") return GroupKind::Trivial;
  if (name == "SO") return GroupKind::SO;
  if (name == "O") return GroupKind::O;
  if (name == "SE") return GroupKind::SE;
  if (name == "GL") return GroupKind::GL;
  if (name == "T") return GroupKind::T;
  if (name == "product") return GroupKind::DirectProduct;
  throw InvalidArgument("unknown group kind '" + std::string(name) + "'");
}

std::string to_string(const GroupDescriptor& d) {
  if (d.kind == GroupKind::DirectProduct) {
    std::string s;
    for (std::size_t i = 0; i < d.factors.size(); ++i) {
      if (i) s += " x ";
      s += to_string(d.factors[i]);
    }
    return s.empty() ? "product()" : s;
  }
  return to_string(d.kind) + "(" + std::to_string(d.n) + ")";
}

namespace {

void append_so_basis(std::vector<MatrixXd>& basis, int n, Index ambient) {
  const double s = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      MatrixXd e = MatrixXd::Zero(ambient, ambient);
      e(i, j) = s;
      e(j, i) = -s;
      basis.push_back(std::move(e));
    }
  }
}

void append_translation_basis(std::vector<MatrixXd>& basis, int n) {
  for (int i = 0; i < n; ++i) {
    MatrixXd e = MatrixXd::Zero(n + 1, n + 1);
    e(i, n) = 1.0;
    basis.push_back(std::move(e));
  }
}

bool near_orthogonal(const MatrixXd& q, double tol) {
  return (q.transpose() * q - MatrixXd::Identity(q.rows(), q.cols())).norm() <= tol * std::max<double>(1.0, q.rows());
}

}  // namespace

MatrixLieGroup MatrixLieGroup::make(GroupKind kind, int n) {
  if (kind == GroupKind::DirectProduct) {
    throw InvalidArgument("use MatrixLieGroup::direct_product for product groups");
  }
  if (n < 1) throw InvalidArgument("group dimension parameter n must be >= 1");
  auto data = std::make_shared<detail::GroupData>();
  data->descriptor = GroupDescriptor{kind, n, {}};
  switch (kind) {
    case GroupKind::Trivial:
      data->ambient = n;
      break;
    case GroupKind::SO:
      data->ambient = n;
      append_so_basis(data->basis, n, n);
      break;
    case GroupKind::O: {
      data->ambient = n;
      append_so_basis(data->basis, n, n);
      MatrixXd r = MatrixXd::Identity(n, n);
      r(0, 0) = -1.0;
      data->components.push_back(std::move(r));
      break;
    }
    case GroupKind::SE:
      data->ambient = n + 1;
      append_so_basis(data->basis, n, n + 1);
      append_translation_basis(data->basis, n);
      break;
    case GroupKind::T:
      data->ambient = n + 1;
      append_translation_basis(data->basis, n);
      break;
    case GroupKind::GL:
      data->ambient = n;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          MatrixXd e = MatrixXd::Zero(n, n);
          e(i, j) = 1.0;
          data->basis.push_back(std::move(e));
        }
      }
      // GL(n) has two components; the negative-determinant one is represented
      // by the same reflection as O(n).
      {
        MatrixXd r = MatrixXd::Identity(n, n);
        r(0, 0) = -1.0;
        data->components.push_back(std::move(r));
      }
      break;
    case GroupKind::DirectProduct:
      break;
  }
  return MatrixLieGroup(std::move(data));
}

MatrixLieGroup MatrixLieGroup::direct_product(const std::vector<MatrixLieGroup>& factors) {
  if (factors.empty()) throw InvalidArgument("direct product needs at least one factor");
  auto data = std::make_shared<detail::GroupData>();
  data->descriptor.kind = GroupKind::DirectProduct;
  data->factors = factors;
  Index ambient = 0;
  for (const auto& f : factors) {
    data->descriptor.factors.push_back(f.descriptor());
    ambient += f.ambient_dim();
  }
  data->ambient = ambient;
  data->descriptor.n = static_cast<int>(ambient);

  Index offset = 0;
  for (const auto& f : factors) {
    for (const auto& b : f.algebra_basis()) {
      MatrixXd e = MatrixXd::Zero(ambient, ambient);
      e.block(offset, offset, b.rows(), b.cols()) = b;
      data->basis.push_back(std::move(e));
    }
    offset += f.ambient_dim();
  }

  // Non-identity components: every combination of per-factor components
  // (identity or a representative) except the all-identity one.
  std::vector<std::vector<MatrixXd>> choices;
  for (const auto& f : factors) {
    std::vector<MatrixXd> c{MatrixXd::Identity(f.ambient_dim(), f.ambient_dim())};
    for (const auto& r : f.component_reps()) c.push_back(r);
    choices.push_back(std::move(c));
  }
  std::vector<std::size_t> idx(factors.size(), 0);
  while (true) {
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == choices[k].size()) {
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
    MatrixXd g = MatrixXd::Zero(ambient, ambient);
    Index off = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const MatrixXd& blk = choices[f][idx[f]];
      g.block(off, off, blk.rows(), blk.cols()) = blk;
      off += blk.rows();
    }
    data->components.push_back(std::move(g));
  }
  return MatrixLieGroup(std::move(data));
}

MatrixLieGroup MatrixLieGroup::from_descriptor(const GroupDescriptor& d) {
  if (d.kind == GroupKind::DirectProduct) {
    std::vector<MatrixLieGroup> factors;
    for (const auto& f : d.factors) factors.push_back(from_descriptor(f));
    return direct_product(factors);
  }
  return make(d.kind, d.n);
}

GroupKind MatrixLieGroup::kind() const { return data_->descriptor.kind; }
int MatrixLieGroup::n() const { return data_->descriptor.n; }
Index MatrixLieGroup::ambient_dim() const { return data_->ambient; }
Index MatrixLieGroup::dim() const { return static_cast<Index>(data_->basis.size()); }
const std::vector<MatrixXd>& MatrixLieGroup::algebra_basis() const { return data_->basis; }
const std::vector<MatrixXd>& MatrixLieGroup::component_reps() const { return data_->components; }
const std::vector<MatrixLieGroup>& MatrixLieGroup::factors() const { return data_->factors; }
const GroupDescriptor& MatrixLieGroup::descriptor() const { return data_->descriptor; }
std::string MatrixLieGroup::name() const { return to_string(data_->descriptor); }

bool MatrixLieGroup::is_affine() const {
  return kind() == GroupKind::SE || kind() == GroupKind::T;
}

LieAlgebraElement MatrixLieGroup::element(const VectorXd& coeffs) const {
  return LieAlgebraElement(*this, coeffs);
}

LieAlgebraElement MatrixLieGroup::basis_element(Index k) const {
  if (k < 0 || k >= dim()) throw DimensionError("algebra basis index out of range");
  return element(VectorXd::Unit(dim(), k));
}

LieAlgebraElement MatrixLieGroup::zero() const { return element(VectorXd::Zero(dim())); }

VectorXd MatrixLieGroup::coordinates(const MatrixXd& ambient) const {
  if (ambient.rows() != ambient_dim() || ambient.cols() != ambient_dim()) {
    throw DimensionError("ambient matrix has the wrong shape for " + name());
  }
  VectorXd c(dim());
  for (Index k = 0; k < dim(); ++k) c[k] = (data_->basis[k].array() * ambient.array()).sum();
  return c;
}

bool MatrixLieGroup::in_algebra(const MatrixXd& ambient, double tol) const {
  const LieAlgebraElement p = algebra_projection(*this, ambient);
  return (p.matrix() - ambient).norm() <= tol * std::max(1.0, ambient.norm());
}

bool MatrixLieGroup::in_group(const MatrixXd& g, double tol) const {
  const Index a = ambient_dim();
  if (g.rows() != a || g.cols() != a) return false;
  if (!g.allFinite()) return false;
  switch (kind()) {
    case GroupKind::Trivial:
      return (g - MatrixXd::Identity(a, a)).norm() <= tol;
    case GroupKind::SO:
      return near_orthogonal(g, tol) && std::abs(g.determinant() - 1.0) <= tol * a;
    case GroupKind::O:
      return near_orthogonal(g, tol);
    case GroupKind::GL:
      return std::abs(g.determinant()) > tol;
    case GroupKind::SE: {
      const int n = this->n();
      const MatrixXd q = g.topLeftCorner(n, n);
      return near_orthogonal(q, tol) && std::abs(q.determinant() - 1.0) <= tol * n &&
             g.row(n).head(n).norm() <= tol && std::abs(g(n, n) - 1.0) <= tol;
    }
    case GroupKind::T: {
      const int n = this->n();
      return (g.topLeftCorner(n, n) - MatrixXd::Identity(n, n)).norm() <= tol &&
             g.row(n).head(n).norm() <= tol && std::abs(g(n, n) - 1.0) <= tol;
    }
    case GroupKind::DirectProduct: {
      Index off = 0;
      for (const auto& f : factors()) {
        const Index d = f.ambient_dim();
        if (!f.in_group(g.block(off, off, d, d), tol)) return false;
        MatrixXd rest = g.block(off, 0, d, a);
        rest.block(0, off, d, d).setZero();
        if (rest.norm() > tol) return false;
        off += d;
      }
      return true;
    }
  }
  return false;
}

bool operator==(const MatrixLieGroup& a, const MatrixLieGroup& b) {
  return a.data_ == b.data_ || a.descriptor() == b.descriptor();
}

LieAlgebraElement::LieAlgebraElement(MatrixLieGroup group, VectorXd coeffs)
    : group_(std::move(group)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != group_.dim()) {
    throw DimensionError("coefficient vector length does not match dim " + group_.name());
  }
  const Index a = group_.ambient_dim();
  matrix_ = MatrixXd::Zero(a, a);
  const auto& basis = group_.algebra_basis();
  for (Index k = 0; k < coeffs_.size(); ++k) matrix_ += coeffs_[k] * basis[k];
}

LieAlgebraElement LieAlgebraElement::operator+(const LieAlgebraElement& other) const {
  if (!(group_ == other.group_)) throw DimensionError("adding elements of different algebras");
  return LieAlgebraElement(group_, coeffs_ + other.coeffs_);
}

LieAlgebraElement LieAlgebraElement::operator*(double s) const {
  return LieAlgebraElement(group_, s * coeffs_);
}

MatrixXd expm(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm requires a square matrix");
  if (!a.allFinite()) throw InvalidArgument("expm: non-finite matrix entries");
  const Index n = a.rows();
  if (n == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const MatrixXd scaled = a / std::ldexp(1.0, squarings);

  // Horner evaluation of sum_{k=0}^{13} A^k / k!.
  const MatrixXd id = MatrixXd::Identity(n, n);
  MatrixXd result = id;
  for (int k = 13; k >= 1; --k) {
    result = id + (scaled * result) / static_cast<double>(k);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

MatrixXd exp_map(const LieAlgebraElement& xi, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("exp_map: non-finite time");
  return expm(t * xi.matrix());
}

LieAlgebraElement bracket(const LieAlgebraElement& xi, const LieAlgebraElement& eta) {
  if (!(xi.group() == eta.group())) throw DimensionError("bracket of elements from different groups");
  const MatrixXd c = xi.matrix() * eta.matrix() - eta.matrix() * xi.matrix();
  LieAlgebraElement out = algebra_projection(xi.group(), c);
  const double residual = (out.matrix() - c).norm();
  if (residual > 1e-10 * std::max(1.0, c.norm())) {
    throw NumericalError("bracket left the algebra of " + xi.group().name() +
                         " (residual " + std::to_string(residual) + ")");
  }
  return out;
}

LieAlgebraElement algebra_projection(const MatrixLieGroup& group, const MatrixXd& ambient) {
  return group.element(group.coordinates(ambient));
}

}  // namespace liesym
