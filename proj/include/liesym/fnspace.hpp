#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liesym/polynomial.hpp"

namespace liesym {

/// Serializable dictionary description: {type:"poly", m, n, d} or {type:"named", id}.
struct DictionaryDescriptor {
  std::string type = "poly";
  int m = 1;
  int n = 1;
  int d = 0;
  std::string id;

  friend bool operator==(const DictionaryDescriptor&, const DictionaryDescriptor&) = default;
};

inline constexpr std::uint64_t kDefaultDictionaryCap = 250000;

namespace detail {
class DictionaryImpl;
}

/// An ordered list of C^1 functions F_i : R^m -> R^n with analytic Jacobians.
///
/// Polynomial dictionaries list monomials x^alpha (graded lexicographic) times
/// output unit vectors, output-major: entry a * num_monomials + p is e_a x^alpha_p.
/// Coefficient vectors over such a dictionary are the rows of W in F = W D(x)
/// laid end to end.
class Dictionary {
 public:
  struct Entry {
    std::function<VectorXd(const VectorXd&)> eval;
    std::function<MatrixXd(const VectorXd&)> jacobian;
  };

  static Dictionary polynomial(int m, int n, int d, std::uint64_t size_cap = kDefaultDictionaryCap);
  /// A user dictionary; every entry must supply its Jacobian.
  static Dictionary custom(std::string id, int m, int n, std::vector<Entry> entries);
  /// Looks up a dictionary registered under this id.
  static Dictionary named(const std::string& id);
  static Dictionary from_descriptor(const DictionaryDescriptor& descriptor,
                                    std::uint64_t size_cap = kDefaultDictionaryCap);

  int input_dim() const;
  int output_dim() const;
  Index size() const;
  const DictionaryDescriptor& descriptor() const;

  bool is_polynomial() const { return descriptor().type == "poly"; }
  /// Polynomial degree bound; -1 for named dictionaries.
  int degree() const;
  /// Scalar monomials of a polynomial dictionary (empty otherwise).
  const std::vector<MultiIndex>& monomials() const;

  /// n x N matrix whose column i is F_i(x).
  MatrixXd values(const VectorXd& x) const;
  /// n x N matrix whose column i is DF_i(x) w.
  MatrixXd directional(const VectorXd& x, const VectorXd& w) const;
  /// n x m Jacobian of entry i.
  MatrixXd jacobian(Index i, const VectorXd& x) const;

  /// Polynomial dictionaries only: monomial values and their gradients
  /// (num_monomials x m).
  VectorXd monomial_values(const VectorXd& x) const;
  MatrixXd monomial_gradients(const VectorXd& x) const;

 private:
  explicit Dictionary(std::shared_ptr<const detail::DictionaryImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::DictionaryImpl> impl_;
};

/// Registers a dictionary factory under an id. Re-registering replaces it.
void register_dictionary(const std::string& id, std::function<Dictionary()> factory);
std::vector<std::string> registered_dictionaries();

/// Coefficients c of F = sum_i c_i F_i.
using ModelCoefficients = VectorXd;

VectorXd evaluate_model(const Dictionary& dict, const ModelCoefficients& coeffs, const VectorXd& x);
MatrixXd jacobian_model(const Dictionary& dict, const ModelCoefficients& coeffs, const VectorXd& x);

/// (M n) x N matrix stacking values(x_j) for the columns x_j of points.
MatrixXd evaluation_matrix(const Dictionary& dict, const MatrixXd& points);

/// W (n x num_monomials) for a polynomial dictionary, and back.
MatrixXd coefficients_to_matrix(const Dictionary& dict, const ModelCoefficients& coeffs);
ModelCoefficients matrix_to_coefficients(const Dictionary& dict, const MatrixXd& w);

}  // namespace liesym
