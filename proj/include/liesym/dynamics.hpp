#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "liesym/fnspace.hpp"
#include "liesym/representation.hpp"

namespace liesym {

/// n_p unit masses in R^3 joined by springs, falling under g = (0, 0, -1).
/// State x = (q^1, p^1, ..., q^{n_p}, p^{n_p}, 1); dx/dt = A x.
struct SpringMassSystem {
  int num_particles = 0;
  std::uint64_t seed = 0;
  VectorXd masses;
  MatrixXd stiffness;  ///< K, symmetric with zero diagonal
  Eigen::Vector3d gravity{0.0, 0.0, -1.0};
  MatrixXd a;  ///< (6 n_p + 1) square; last row zero

  Index state_dim() const { return 6 * num_particles; }
  /// The homogeneous state dimension 6 n_p + 1.
  Index homogeneous_dim() const { return state_dim() + 1; }
};

/// K_ij = sum_k (1 - delta_ij) B_ik B_jk with B_ij ~ U[0.1, 1].
SpringMassSystem make_spring_mass(int num_particles, std::uint64_t seed);

/// Rotations act on every q and p block, translations on q blocks only.
Representation spring_mass_representation(const MatrixLieGroup& se3, int num_particles);

/// Right-hand side on the non-homogeneous state R^{6 n_p}.
using VectorField = std::function<VectorXd(const VectorXd&)>;

VectorField linear_field(const MatrixXd& a_homogeneous);
VectorField model_field(const Dictionary& dict, const VectorXd& coeffs);

struct TrajectoryData {
  std::vector<double> times;
  MatrixXd states;       ///< d x T
  MatrixXd derivatives;  ///< d x T, exact F(x) at each state
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool diverged = false;
};

/// Fixed-step RK4 from x0 for `steps` steps (steps + 1 samples). Stops early
/// and flags divergence when the state stops being finite or exceeds 1e150.
TrajectoryData simulate(const VectorField& field, const VectorXd& x0, double dt, int steps);

/// Centres q0 ~ N(0, diag(1,0,1)), p0 ~ N(0, diag(.01,0,.01)); particles drawn
/// around them with the same covariances. y components are exactly zero.
VectorXd planar_initial_conditions(int num_particles, std::uint64_t seed);
/// q0 ~ N(0, I), p0 ~ N(0, 0.1 I); particles drawn around them likewise.
VectorXd general_initial_conditions(int num_particles, std::uint64_t seed);

void write_trajectory_csv(std::ostream& os, const TrajectoryData& data);
void write_pairs_csv(std::ostream& os, const TrajectoryData& data);

}  // namespace liesym
