#include "liesym/dynamics.hpp"

#include <cmath>
#include <iomanip>

#include "liesym/error.hpp"
#include "liesym/rng.hpp"

namespace liesym {

SpringMassSystem make_spring_mass(int num_particles, std::uint64_t seed) {
  if (num_particles < 2) throw InvalidArgument("spring-mass system needs at least two particles");
  const int np = num_particles;
  SpringMassSystem sys;
  sys.num_particles = np;
  sys.seed = seed;
  sys.masses = VectorXd::Ones(np);

  Rng rng = Rng(seed).split("spring-mass");
  MatrixXd b(np, np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) b(i, j) = rng.uniform(0.1, 1.0);
  sys.stiffness = b * b.transpose();
  sys.stiffness.diagonal().setZero();

  const Index d = sys.homogeneous_dim();
  sys.a = MatrixXd::Zero(d, d);
  const MatrixXd i3 = MatrixXd::Identity(3, 3);
  for (int i = 0; i < np; ++i) {
    const double row_sum = sys.stiffness.row(i).sum();
    for (int j = 0; j < np; ++j) {
      const double coupling = sys.stiffness(i, j) - (i == j ? row_sum : 0.0);
      if (i == j) sys.a.block(6 * i, 6 * j + 3, 3, 3) = i3 / sys.masses[i];
      sys.a.block(6 * i + 3, 6 * j, 3, 3) = coupling * i3;
    }
    sys.a.block(6 * i + 3, d - 1, 3, 1) = sys.gravity;
  }
  return sys;
}

Representation spring_mass_representation(const MatrixLieGroup& se3, int num_particles) {
  if (se3.kind() != GroupKind::SE || se3.n() != 3) throw InvalidArgument("spring-mass action needs SE(3)");
  std::vector<Representation::Block> blocks;
  for (int i = 0; i < num_particles; ++i) {
    blocks.push_back(Representation::Block::Position);
    blocks.push_back(Representation::Block::Vector);
  }
  return Representation::particles(se3, blocks);
}

VectorField linear_field(const MatrixXd& a_homogeneous) {
  const Index d = a_homogeneous.rows() - 1;
  if (a_homogeneous.cols() != d + 1) throw DimensionError("homogeneous system matrix must be square");
  MatrixXd lin = a_homogeneous.topLeftCorner(d, d);
  VectorXd offset = a_homogeneous.block(0, d, d, 1);
  return [lin, offset](const VectorXd& x) -> VectorXd { return lin * x + offset; };
}

VectorField model_field(const Dictionary& dict, const VectorXd& coeffs) {
  if (dict.input_dim() != dict.output_dim()) throw DimensionError("a vector field must map R^n to R^n");
  if (coeffs.size() != dict.size()) throw DimensionError("coefficients do not match the dictionary");
  return [dict, coeffs](const VectorXd& x) -> VectorXd { return evaluate_model(dict, coeffs, x); };
}

TrajectoryData simulate(const VectorField& field, const VectorXd& x0, double dt, int steps) {
  if (!x0.allFinite()) throw InvalidArgument("initial condition is not finite");
  if (!(dt > 0.0) || steps < 0) throw InvalidArgument("simulate needs dt > 0 and steps >= 0");
  TrajectoryData out;
  out.dt = dt;
  out.states.resize(x0.size(), steps + 1);
  out.derivatives.resize(x0.size(), steps + 1);
  VectorXd x = x0;
  Index filled = 0;
  for (int s = 0; s <= steps; ++s) {
    const VectorXd k1 = field(x);
    out.times.push_back(s * dt);
    out.states.col(filled) = x;
    out.derivatives.col(filled) = k1;
    ++filled;
    if (s == steps) break;
    const VectorXd k2 = field(x + 0.5 * dt * k1);
    const VectorXd k3 = field(x + 0.5 * dt * k2);
    const VectorXd k4 = field(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > 1e150) {
      out.diverged = true;
      break;
    }
  }
  out.states.conservativeResize(Eigen::NoChange, filled);
  out.derivatives.conservativeResize(Eigen::NoChange, filled);
  return out;
}

namespace {

VectorXd draw_initial(int np, std::uint64_t seed, const Eigen::Vector3d& q_var, const Eigen::Vector3d& p_var,
                      const char* label) {
  Rng rng = Rng(seed).split(label);
  const Eigen::Vector3d qs = q_var.cwiseSqrt();
  const Eigen::Vector3d ps = p_var.cwiseSqrt();
  Eigen::Vector3d q0, p0;
  for (int k = 0; k < 3; ++k) q0[k] = qs[k] * rng.normal();
  for (int k = 0; k < 3; ++k) p0[k] = ps[k] * rng.normal();
  VectorXd x(6 * np);
  for (int i = 0; i < np; ++i) {
    for (int k = 0; k < 3; ++k) x[6 * i + k] = q0[k] + qs[k] * rng.normal();
    for (int k = 0; k < 3; ++k) x[6 * i + 3 + k] = p0[k] + ps[k] * rng.normal();
  }
  return x;
}

}  // namespace

VectorXd planar_initial_conditions(int num_particles, std::uint64_t seed) {
  return draw_initial(num_particles, seed, {1.0, 0.0, 1.0}, {0.01, 0.0, 0.01}, "planar-ic");
}

VectorXd general_initial_conditions(int num_particles, std::uint64_t seed) {
  return draw_initial(num_particles, seed, {1.0, 1.0, 1.0}, {0.1, 0.1, 0.1}, "general-ic");
}

void write_trajectory_csv(std::ostream& os, const TrajectoryData& data) {
  os << "t";
  for (Index i = 0; i < data.states.rows(); ++i) os << ",x" << i;
  os << '\n' << std::setprecision(17);
  for (Index j = 0; j < data.states.cols(); ++j) {
    os << data.times[j];
    for (Index i = 0; i < data.states.rows(); ++i) os << ',' << data.states(i, j);
    os << '\n';
  }
}

void write_pairs_csv(std::ostream& os, const TrajectoryData& data) {
  const Index d = data.states.rows();
  for (Index i = 0; i < d; ++i) os << (i ? "," : "") << "x" << i;
  for (Index i = 0; i < d; ++i) os << ",dx" << i;
  os << '\n' << std::setprecision(17);
  for (Index j = 0; j < data.states.cols(); ++j) {
    for (Index i = 0; i < d; ++i) os << (i ? "," : "") << data.states(i, j);
    for (Index i = 0; i < d; ++i) os << ',' << data.derivatives(i, j);
    os << '\n';
  }
}

}  // namespace liesym
