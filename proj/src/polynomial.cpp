#include "liesym/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "liesym/error.hpp"

namespace liesym {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

void fill_degree(int m, int remaining, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == m - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    fill_degree(m, remaining - e, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> graded_lex_indices(int m, int d) {
  if (m < 1 || d < 0) throw InvalidArgument("graded_lex_indices requires m >= 1 and d >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(m, 0);
  for (int deg = 0; deg <= d; ++deg) fill_degree(m, deg, 0, cur, out);
  return out;
}

Polynomial Polynomial::constant(int num_vars, double value) {
  Polynomial p(num_vars);
  p.add_term(MultiIndex(num_vars, 0), value);
  return p;
}

Polynomial Polynomial::variable(int num_vars, int k) {
  Polynomial p(num_vars);
  MultiIndex a(num_vars, 0);
  a[k] = 1;
  p.add_term(a, 1.0);
  return p;
}

Polynomial Polynomial::affine(const VectorXd& w, double b) {
  const int m = static_cast<int>(w.size());
  Polynomial p = constant(m, b);
  for (int k = 0; k < m; ++k) p.add_term([&] { MultiIndex a(m, 0); a[k] = 1; return a; }(), w[k]);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, std::accumulate(a.begin(), a.end(), 0));
  return d;
}

void Polynomial::add_term(const MultiIndex& alpha, double coeff) {
  if (static_cast<int>(alpha.size()) != m_) throw DimensionError("multi-index has the wrong length");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(alpha, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.m_ != m_) throw DimensionError("polynomials in different numbers of variables");
  Polynomial out = *this;
  for (const auto& [a, c] : other.terms_) out.add_term(a, c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.m_ != m_) throw DimensionError("polynomials in different numbers of variables");
  Polynomial out(m_);
  MultiIndex sum(m_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      for (int k = 0; k < m_; ++k) sum[k] = a[k] + b[k];
      out.add_term(sum, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out(m_);
  for (const auto& [a, c] : terms_) out.add_term(a, c * s);
  return out;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw InvalidArgument("negative polynomial power");
  Polynomial out = constant(m_, 1.0);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

double Polynomial::operator()(const VectorXd& x) const {
  double s = 0.0;
  for (const auto& [a, c] : terms_) {
    double t = c;
    for (int k = 0; k < m_; ++k) t *= std::pow(x[k], a[k]);
    s += t;
  }
  return s;
}

VectorXd Polynomial::gradient(const VectorXd& x) const {
  VectorXd g = VectorXd::Zero(m_);
  for (const auto& [a, c] : terms_) {
    for (int j = 0; j < m_; ++j) {
      if (a[j] == 0) continue;
      double t = c * a[j];
      for (int k = 0; k < m_; ++k) t *= std::pow(x[k], k == j ? a[k] - 1 : a[k]);
      g[j] += t;
    }
  }
  return g;
}

VectorXd Polynomial::coefficients(int d) const {
  if (degree() > d) throw InvalidArgument("polynomial degree exceeds the requested basis degree");
  const auto basis = graded_lex_indices(m_, d);
  VectorXd out = VectorXd::Zero(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = terms_.find(basis[i]);
    if (it != terms_.end()) out[static_cast<Index>(i)] = it->second;
  }
  return out;
}

}  // namespace liesym
