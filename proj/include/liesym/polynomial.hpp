#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace liesym {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using MultiIndex = std::vector<int>;

/// Binomial coefficient C(n, k) with overflow saturation at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// All multi-indices in m variables with |alpha| <= d in graded lexicographic
/// order: by total degree, then lexicographically descending (x1^2 before x1 x2).
std::vector<MultiIndex> graded_lex_indices(int m, int d);

/// Sparse real polynomial in m variables.
class Polynomial {
 public:
  explicit Polynomial(int num_vars) : m_(num_vars) {}

  static Polynomial constant(int num_vars, double value);
  /// The coordinate function x_k.
  static Polynomial variable(int num_vars, int k);
  /// An affine form w^T x + b.
  static Polynomial affine(const VectorXd& w, double b);

  int num_vars() const { return m_; }
  int degree() const;
  const std::map<MultiIndex, double>& terms() const { return terms_; }

  void add_term(const MultiIndex& alpha, double coeff);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;
  Polynomial pow(int k) const;

  double operator()(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;

  /// Coefficients against graded_lex_indices(m, d); throws if degree exceeds d.
  VectorXd coefficients(int d) const;

 private:
  int m_;
  std::map<MultiIndex, double> terms_;
};

}  // namespace liesym
