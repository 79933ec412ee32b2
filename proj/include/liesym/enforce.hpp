#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "liesym/linalg.hpp"
#include "liesym/operators.hpp"

namespace liesym {

/// Orthonormal coefficient vectors spanning the exactly equivariant models.
struct EquivariantBasis {
  MatrixXd columns;          ///< N x k
  VectorXd singular_values;  ///< full spectrum of the stacked constraint matrix
  double threshold = 0.0;
  std::vector<double> residuals;  ///< constraint residual of each column
  Index constraint_rows = 0;
  GroupDescriptor group;
  DictionaryDescriptor dictionary;
  std::uint64_t seed = 0;
  Index num_points = 0;

  Index dim() const { return columns.cols(); }
};

struct EnforceOptions {
  RankCutoff cutoff;
};

/// Joint nullspace of the Lie-derivative slices and the sampled K_g - I blocks
/// at the group's component representatives.
EquivariantBasis equivariant_function_basis(const LieOperatorTensor& tensor, const ActionPair& pair,
                                            const Dictionary& dict, const SampledInnerProduct& inner,
                                            const EnforceOptions& options = {});

/// Solutions (W, b) of phi_l W = W phi_{l-1}, Phi_l W = W Phi_{l-1}, phi_l b = 0, Phi_l b = b.
struct LayerBasis {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
  /// Columns (vec(W), b) with vec column-major; orthonormal.
  MatrixXd columns;
  VectorXd singular_values;
  double threshold = 0.0;

  Index dim() const { return columns.cols(); }
};

LayerBasis equivariant_layer_basis(const Representation& rep_prev, const Representation& rep_next,
                                   const EnforceOptions& options = {});

/// Polynomial kernels K(x, y) : R^n x R^m -> W (x) V* with K(x, y) stored as the
/// column-major vec of a dim W x dim V matrix.
struct KernelBasis {
  EquivariantBasis basis;
  Dictionary dictionary;
  Index rows = 0;  ///< dim W
  Index cols = 0;  ///< dim V
  int n = 0;       ///< dimension of x
  int m = 0;       ///< dimension of y

  /// K(x, y) for basis column k.
  MatrixXd evaluate(Index k, const VectorXd& x, const VectorXd& y) const;
};

struct KernelOptions {
  EnforceOptions enforce;
  std::uint64_t seed = 0;
  std::optional<Index> num_points;
  int max_degree = 6;
};

KernelBasis equivariant_kernel_basis(const Representation& rep_rm, const Representation& rep_rn,
                                     const Representation& rep_v, const Representation& rep_w, int degree,
                                     const KernelOptions& options = {});

/// CSV table: basis, x_1..x_n, y_1..y_m, k_1..k_{WV} for every basis column at
/// every grid point. grid holds (x, y) stacked as columns of length n + m.
void write_kernel_table(std::ostream& os, const KernelBasis& kb, const MatrixXd& grid);

}  // namespace liesym
