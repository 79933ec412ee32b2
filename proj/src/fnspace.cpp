#include "liesym/fnspace.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "liesym/error.hpp"

namespace liesym {

namespace detail {

class DictionaryImpl {
 public:
  explicit DictionaryImpl(DictionaryDescriptor d) : desc(std::move(d)) {}
  virtual ~DictionaryImpl() = default;

  virtual Index size() const = 0;
  virtual MatrixXd values(const VectorXd& x) const = 0;
  virtual MatrixXd directional(const VectorXd& x, const VectorXd& w) const = 0;
  virtual MatrixXd jacobian(Index i, const VectorXd& x) const = 0;

  DictionaryDescriptor desc;
  std::vector<MultiIndex> monomials;
};

namespace {

class PolynomialImpl final : public DictionaryImpl {
 public:
  PolynomialImpl(int m, int n, int d) : DictionaryImpl({"poly", m, n, d, ""}) {
    monomials = graded_lex_indices(m, d);
    const auto count = static_cast<Index>(monomials.size());
    parent_.assign(count, -1);
    var_.assign(count, -1);
    std::map<MultiIndex, Index> index;
    for (Index i = 0; i < count; ++i) index.emplace(monomials[i], i);
    // Each monomial of positive degree is its parent times one variable; the
    // parent always precedes it in graded order.
    for (Index i = 1; i < count; ++i) {
      MultiIndex a = monomials[i];
      int k = 0;
      while (a[k] == 0) ++k;
      --a[k];
      parent_[i] = index.at(a);
      var_[i] = k;
    }
  }

  Index num_monomials() const { return static_cast<Index>(monomials.size()); }
  Index size() const override { return num_monomials() * desc.n; }

  VectorXd scalar_values(const VectorXd& x) const {
    VectorXd v(num_monomials());
    v[0] = 1.0;
    for (Index i = 1; i < v.size(); ++i) v[i] = v[parent_[i]] * x[var_[i]];
    return v;
  }

  VectorXd scalar_directional(const VectorXd& x, const VectorXd& w) const {
    const Index k = num_monomials();
    VectorXd v(k), dv(k);
    v[0] = 1.0;
    dv[0] = 0.0;
    for (Index i = 1; i < k; ++i) {
      v[i] = v[parent_[i]] * x[var_[i]];
      dv[i] = dv[parent_[i]] * x[var_[i]] + v[parent_[i]] * w[var_[i]];
    }
    return dv;
  }

  /// num_monomials x m matrix of monomial gradients.
  MatrixXd scalar_gradients(const VectorXd& x) const {
    const Index k = num_monomials();
    const int m = desc.m;
    VectorXd v(k);
    MatrixXd g = MatrixXd::Zero(k, m);
    v[0] = 1.0;
    for (Index i = 1; i < k; ++i) {
      const Index p = parent_[i];
      const int j = var_[i];
      v[i] = v[p] * x[j];
      g.row(i) = g.row(p) * x[j];
      g(i, j) += v[p];
    }
    return g;
  }

  MatrixXd spread(const VectorXd& scalar) const {
    const Index k = scalar.size();
    MatrixXd out = MatrixXd::Zero(desc.n, k * desc.n);
    for (int a = 0; a < desc.n; ++a) out.row(a).segment(a * k, k) = scalar.transpose();
    return out;
  }

  MatrixXd values(const VectorXd& x) const override { return spread(scalar_values(x)); }

  MatrixXd directional(const VectorXd& x, const VectorXd& w) const override {
    return spread(scalar_directional(x, w));
  }

  MatrixXd jacobian(Index i, const VectorXd& x) const override {
    const Index k = num_monomials();
    MatrixXd out = MatrixXd::Zero(desc.n, desc.m);
    out.row(i / k) = scalar_gradients(x).row(i % k);
    return out;
  }

 private:
  std::vector<Index> parent_;
  std::vector<int> var_;
};

class CustomImpl final : public DictionaryImpl {
 public:
  CustomImpl(std::string id, int m, int n, std::vector<Dictionary::Entry> entries)
      : DictionaryImpl({"named", m, n, -1, std::move(id)}), entries_(std::move(entries)) {}

  Index size() const override { return static_cast<Index>(entries_.size()); }

  MatrixXd values(const VectorXd& x) const override {
    MatrixXd out(desc.n, size());
    for (Index i = 0; i < size(); ++i) {
      VectorXd v = entries_[i].eval(x);
      if (v.size() != desc.n) throw DimensionError("dictionary entry returned the wrong output size");
      out.col(i) = v;
    }
    return out;
  }

  MatrixXd directional(const VectorXd& x, const VectorXd& w) const override {
    MatrixXd out(desc.n, size());
    for (Index i = 0; i < size(); ++i) out.col(i) = jacobian(i, x) * w;
    return out;
  }

  MatrixXd jacobian(Index i, const VectorXd& x) const override {
    MatrixXd j = entries_[i].jacobian(x);
    if (j.rows() != desc.n || j.cols() != desc.m) throw DimensionError("dictionary Jacobian has the wrong shape");
    return j;
  }

 private:
  std::vector<Dictionary::Entry> entries_;
};

const PolynomialImpl* as_polynomial(const DictionaryImpl* impl) { return dynamic_cast<const PolynomialImpl*>(impl); }

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::function<Dictionary()>> factories;
};

Dictionary fourier1() {
  std::vector<Dictionary::Entry> entries;
  entries.push_back({[](const VectorXd&) { return VectorXd::Constant(1, 1.0); },
                     [](const VectorXd&) { return MatrixXd::Zero(1, 1); }});
  for (int k = 1; k <= 2; ++k) {
    entries.push_back({[k](const VectorXd& x) { return VectorXd::Constant(1, std::cos(k * x[0])); },
                       [k](const VectorXd& x) { return MatrixXd::Constant(1, 1, -k * std::sin(k * x[0])); }});
    entries.push_back({[k](const VectorXd& x) { return VectorXd::Constant(1, std::sin(k * x[0])); },
                       [k](const VectorXd& x) { return MatrixXd::Constant(1, 1, k * std::cos(k * x[0])); }});
  }
  return Dictionary::custom("fourier1", 1, 1, std::move(entries));
}

Registry& registry() {
  static Registry r;
  static std::once_flag builtins;
  std::call_once(builtins, [] { r.factories.emplace("fourier1", fourier1); });
  return r;
}

}  // namespace
}  // namespace detail

Dictionary Dictionary::polynomial(int m, int n, int d, std::uint64_t size_cap) {
  if (m < 1 || n < 1 || d < 0) throw InvalidArgument("polynomial dictionary requires m >= 1, n >= 1, d >= 0");
  const std::uint64_t monos = binomial(static_cast<std::uint64_t>(m + d), static_cast<std::uint64_t>(d));
  if (monos > size_cap || monos * static_cast<std::uint64_t>(n) > size_cap) {
    throw InvalidArgument("polynomial dictionary of size " + std::to_string(monos) + " x " + std::to_string(n) +
                          " exceeds the cap of " + std::to_string(size_cap));
  }
  return Dictionary(std::make_shared<detail::PolynomialImpl>(m, n, d));
}

Dictionary Dictionary::custom(std::string id, int m, int n, std::vector<Entry> entries) {
  if (m < 1 || n < 1) throw InvalidArgument("custom dictionary requires m >= 1 and n >= 1");
  if (entries.empty()) throw InvalidArgument("custom dictionary '" + id + "' has no entries");
  for (const auto& e : entries) {
    if (!e.eval || !e.jacobian) throw InvalidArgument("custom dictionary '" + id + "' is missing a Jacobian");
  }
  return Dictionary(std::make_shared<detail::CustomImpl>(std::move(id), m, n, std::move(entries)));
}

Dictionary Dictionary::named(const std::string& id) {
  auto& reg = detail::registry();
  std::function<Dictionary()> factory;
  {
    std::lock_guard lock(reg.mutex);
    auto it = reg.factories.find(id);
    if (it == reg.factories.end()) throw InvalidArgument("no dictionary registered as '" + id + "'");
    factory = it->second;
  }
  return factory();
}

Dictionary Dictionary::from_descriptor(const DictionaryDescriptor& descriptor, std::uint64_t size_cap) {
  if (descriptor.type == "poly") return polynomial(descriptor.m, descriptor.n, descriptor.d, size_cap);
  if (descriptor.type == "named") return named(descriptor.id);
  throw InvalidArgument("unknown dictionary type '" + descriptor.type + "'");
}

void register_dictionary(const std::string& id, std::function<Dictionary()> factory) {
  auto& reg = detail::registry();
  std::lock_guard lock(reg.mutex);
  reg.factories[id] = std::move(factory);
}

std::vector<std::string> registered_dictionaries() {
  auto& reg = detail::registry();
  std::lock_guard lock(reg.mutex);
  std::vector<std::string> out;
  for (const auto& [k, v] : reg.factories) out.push_back(k);
  return out;
}

int Dictionary::input_dim() const { return impl_->desc.m; }
int Dictionary::output_dim() const { return impl_->desc.n; }
Index Dictionary::size() const { return impl_->size(); }
const DictionaryDescriptor& Dictionary::descriptor() const { return impl_->desc; }
int Dictionary::degree() const { return is_polynomial() ? impl_->desc.d : -1; }
const std::vector<MultiIndex>& Dictionary::monomials() const { return impl_->monomials; }

MatrixXd Dictionary::values(const VectorXd& x) const {
  if (x.size() != input_dim()) throw DimensionError("point has the wrong dimension for the dictionary");
  return impl_->values(x);
}

MatrixXd Dictionary::directional(const VectorXd& x, const VectorXd& w) const {
  if (x.size() != input_dim() || w.size() != input_dim()) {
    throw DimensionError("point or direction has the wrong dimension for the dictionary");
  }
  return impl_->directional(x, w);
}

MatrixXd Dictionary::jacobian(Index i, const VectorXd& x) const {
  if (i < 0 || i >= size()) throw DimensionError("dictionary entry index out of range");
  if (x.size() != input_dim()) throw DimensionError("point has the wrong dimension for the dictionary");
  return impl_->jacobian(i, x);
}

namespace {
const detail::PolynomialImpl& require_polynomial(const detail::DictionaryImpl* impl) {
  const auto* poly = detail::as_polynomial(impl);
  if (!poly) throw InvalidArgument("monomial evaluation requires a polynomial dictionary");
  return *poly;
}
}  // namespace

VectorXd Dictionary::monomial_values(const VectorXd& x) const {
  if (x.size() != input_dim()) throw DimensionError("point has the wrong dimension for the dictionary");
  return require_polynomial(impl_.get()).scalar_values(x);
}

MatrixXd Dictionary::monomial_gradients(const VectorXd& x) const {
  if (x.size() != input_dim()) throw DimensionError("point has the wrong dimension for the dictionary");
  return require_polynomial(impl_.get()).scalar_gradients(x);
}

namespace {
void check_coeffs(const Dictionary& dict, const ModelCoefficients& coeffs) {
  if (coeffs.size() != dict.size()) {
    throw DimensionError("coefficient vector of length " + std::to_string(coeffs.size()) +
                         " does not match dictionary size " + std::to_string(dict.size()));
  }
}
}  // namespace

VectorXd evaluate_model(const Dictionary& dict, const ModelCoefficients& coeffs, const VectorXd& x) {
  check_coeffs(dict, coeffs);
  return dict.values(x) * coeffs;
}

MatrixXd jacobian_model(const Dictionary& dict, const ModelCoefficients& coeffs, const VectorXd& x) {
  check_coeffs(dict, coeffs);
  if (x.size() != dict.input_dim()) throw DimensionError("point has the wrong dimension for the dictionary");
  if (dict.is_polynomial()) return coefficients_to_matrix(dict, coeffs) * dict.monomial_gradients(x);
  MatrixXd out = MatrixXd::Zero(dict.output_dim(), dict.input_dim());
  for (Index i = 0; i < dict.size(); ++i) {
    if (coeffs[i] != 0.0) out += coeffs[i] * dict.jacobian(i, x);
  }
  return out;
}

MatrixXd evaluation_matrix(const Dictionary& dict, const MatrixXd& points) {
  const Index n = dict.output_dim();
  MatrixXd out(points.cols() * n, dict.size());
  for (Index j = 0; j < points.cols(); ++j) out.middleRows(j * n, n) = dict.values(points.col(j));
  return out;
}

MatrixXd coefficients_to_matrix(const Dictionary& dict, const ModelCoefficients& coeffs) {
  check_coeffs(dict, coeffs);
  if (!dict.is_polynomial()) throw InvalidArgument("coefficient matrix form requires a polynomial dictionary");
  const Index n = dict.output_dim();
  const Index k = dict.size() / n;
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(coeffs.data(), n, k);
}

ModelCoefficients matrix_to_coefficients(const Dictionary& dict, const MatrixXd& w) {
  if (!dict.is_polynomial()) throw InvalidArgument("coefficient matrix form requires a polynomial dictionary");
  const Index n = dict.output_dim();
  const Index k = dict.size() / n;
  if (w.rows() != n || w.cols() != k) throw DimensionError("coefficient matrix has the wrong shape");
  ModelCoefficients c(n * k);
  for (Index a = 0; a < n; ++a) c.segment(a * k, k) = w.row(a).transpose();
  return c;
}

}  // namespace liesym
