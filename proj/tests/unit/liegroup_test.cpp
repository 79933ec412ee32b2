#include <numbers>

#include "liesym/error.hpp"
#include "liesym/liegroup.hpp"
#include "support.hpp"

using namespace liesym;
using namespace liesym::test;

TEST_CASE("algebra bases are Frobenius-orthonormal and satisfy the defining condition") {
  for (const auto& g : sample_groups()) {
    CAPTURE(g.name());
    const auto& basis = g.algebra_basis();
    REQUIRE(static_cast<Index>(basis.size()) == g.dim());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(basis[i].rows() == g.ambient_dim());
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double ip = (basis[i].transpose() * basis[j]).trace();
        CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
      CHECK(g.in_algebra(basis[i]));
    }
  }
}

TEST_CASE("algebra dimensions match the closed forms") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    CHECK(MatrixLieGroup::make(GroupKind::SO, n).dim() == n * (n - 1) / 2);
    CHECK(MatrixLieGroup::make(GroupKind::SE, n).dim() == n * (n + 1) / 2);
    CHECK(MatrixLieGroup::make(GroupKind::T, n).dim() == n);
    CHECK(MatrixLieGroup::make(GroupKind::GL, n).dim() == n * n);
  }
}

TEST_CASE("so(3) basis is skew and se(3) has dimension 6") {
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  CHECK(so3.dim() == 3);
  for (const auto& b : so3.algebra_basis()) CHECK((b + b.transpose()).norm() < 1e-15);
  const auto se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  CHECK(se3.dim() == 6);
  CHECK(se3.ambient_dim() == 4);
  for (const auto& b : se3.algebra_basis()) {
    CHECK(b.row(3).norm() == 0.0);
    const MatrixXd s = b.topLeftCorner(3, 3);
    CHECK((s + s.transpose()).norm() < 1e-15);
  }
}

TEST_CASE("O(2) has one reflection representative") {
  const auto o2 = MatrixLieGroup::make(GroupKind::O, 2);
  CHECK(o2.dim() == 1);
  REQUIRE(o2.component_reps().size() == 1);
  const MatrixXd& q = o2.component_reps()[0];
  CHECK(q.determinant() == doctest::Approx(-1.0));
  CHECK((q.transpose() * q - MatrixXd::Identity(2, 2)).norm() < 1e-15);
  CHECK(o2.in_group(q));
  CHECK(MatrixLieGroup::make(GroupKind::SO, 3).component_reps().empty());
}

TEST_CASE("direct products embed factors block-diagonally") {
  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  const auto prod = MatrixLieGroup::direct_product({se2, so3});
  CHECK(prod.dim() == se2.dim() + so3.dim());
  CHECK(prod.ambient_dim() == se2.ambient_dim() + so3.ambient_dim());
  for (const auto& b : prod.algebra_basis()) {
    CHECK(b.topRightCorner(3, 3).norm() == 0.0);
    CHECK(b.bottomLeftCorner(3, 3).norm() == 0.0);
  }
  CHECK(MatrixLieGroup::from_descriptor(prod.descriptor()) == prod);
}

TEST_CASE("unsupported kinds and dimensions are rejected") {
  CHECK_THROWS_AS(MatrixLieGroup::make(GroupKind::SO, 0), InvalidArgument);
  CHECK_THROWS_AS(parse_group_kind("Sp"), InvalidArgument);
}

TEST_CASE("exp of zero is the identity") {
  for (const auto& g : sample_groups()) {
    const MatrixXd e = exp_map(g.zero(), 3.0);
    CHECK((e - MatrixXd::Identity(g.ambient_dim(), g.ambient_dim())).norm() == 0.0);
  }
}

TEST_CASE("so(2) generator at a quarter turn is a 90 degree rotation") {
  const auto so2 = MatrixLieGroup::make(GroupKind::SO, 2);
  // The unit-angular-speed generator is sqrt(2) times the normalized basis element.
  const MatrixXd j = std::sqrt(2.0) * so2.algebra_basis()[0];
  const MatrixXd r = exp_map(so2.element(VectorXd::Constant(1, std::sqrt(2.0))), std::numbers::pi / 2);
  // cos(pi/2) I + sin(pi/2) J
  CHECK((r - j).norm() < 1e-14);
  CHECK(r.determinant() == doctest::Approx(1.0));
}

TEST_CASE("se(2) translation generator gives a unit translation") {
  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  for (Index k = 0; k < se2.dim(); ++k) {
    const MatrixXd& b = se2.algebra_basis()[k];
    if (b.topLeftCorner(2, 2).norm() != 0.0) continue;
    const MatrixXd g = exp_map(se2.basis_element(k), 1.0);
    CHECK((g - (MatrixXd::Identity(3, 3) + b)).norm() < 1e-15);
    CHECK(g.col(2).head(2).norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("expm agrees with a closed form on a diagonalizable matrix") {
  Eigen::Matrix2d a;
  a << 1.0, 2.0, 0.0, -3.0;
  // Upper-triangular: off-diagonal entry 2 (e^1 - e^-3) / (1 - (-3)).
  Eigen::Matrix2d expected;
  expected << std::exp(1.0), 2.0 * (std::exp(1.0) - std::exp(-3.0)) / 4.0, 0.0, std::exp(-3.0);
  CHECK((expm(a) - expected).norm() < 1e-13);
}

TEST_CASE("exp_map rejects non-finite input") {
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  VectorXd c = VectorXd::Zero(3);
  c[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(exp_map(so3.element(c), 1.0));
}

TEST_CASE("property: exp(t xi) exp(-t xi) = I and exp((s+t) xi) = exp(s xi) exp(t xi)") {
  for (const auto& g : sample_groups()) {
    CAPTURE(g.name());
    for_cases(11, [&](Rng& rng, int) {
      const LieAlgebraElement xi = random_element(g, rng);
      const double s = rng.uniform(-2.0, 2.0);
      const double t = rng.uniform(-2.0, 2.0);
      const MatrixXd id = MatrixXd::Identity(g.ambient_dim(), g.ambient_dim());
      CHECK((exp_map(xi, t) * exp_map(xi, -t) - id).norm() < 1e-10);
      const MatrixXd lhs = exp_map(xi, s + t);
      CHECK((lhs - exp_map(xi, s) * exp_map(xi, t)).norm() < 1e-10 * std::max(1.0, lhs.norm()));
      if (g.kind() != GroupKind::GL) CHECK(g.in_group(exp_map(xi, t), 1e-9));
    });
  }
}

TEST_CASE("bracket: antisymmetry, so(3) structure and abelian translations") {
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  const auto e0 = so3.basis_element(0);
  CHECK(bracket(e0, e0).coeffs().norm() == 0.0);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      if (i == j) continue;
      const VectorXd c = bracket(so3.basis_element(i), so3.basis_element(j)).coeffs();
      // Normalized so(3) generators satisfy [e_i, e_j] = +-e_k / sqrt(2).
      const Index k = 3 - i - j;
      CHECK(std::abs(c[k]) == doctest::Approx(1.0 / std::sqrt(2.0)));
      CHECK(c[i] == 0.0);
      CHECK(c[j] == 0.0);
      const MatrixXd direct = so3.algebra_basis()[i] * so3.algebra_basis()[j] -
                              so3.algebra_basis()[j] * so3.algebra_basis()[i];
      CHECK((so3.element(c).matrix() - direct).norm() < 1e-14);
    }
  }
  const auto t3 = MatrixLieGroup::make(GroupKind::T, 3);
  Rng rng(3);
  CHECK(bracket(random_element(t3, rng), random_element(t3, rng)).coeffs().norm() == 0.0);
}

TEST_CASE("bracket rejects elements of different groups") {
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  CHECK_THROWS_AS(bracket(so3.basis_element(0), se2.basis_element(0)), DimensionError);
}

TEST_CASE("property: brackets close and satisfy the Jacobi identity") {
  for (const auto& g : sample_groups()) {
    CAPTURE(g.name());
    for (Index i = 0; i < g.dim(); ++i) {
      for (Index j = 0; j < g.dim(); ++j) {
        const MatrixXd c = g.algebra_basis()[i] * g.algebra_basis()[j] - g.algebra_basis()[j] * g.algebra_basis()[i];
        CHECK((g.element(g.coordinates(c)).matrix() - c).norm() <= 1e-10);
      }
    }
    for_cases(12, [&](Rng& rng, int) {
      const auto x = random_element(g, rng);
      const auto y = random_element(g, rng);
      const auto z = random_element(g, rng);
      const VectorXd jacobi =
          (bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))).coeffs();
      CHECK(jacobi.norm() <= 1e-10);
      CHECK((bracket(x, y) + bracket(y, x)).coeffs().norm() <= 1e-12);
    });
  }
}

TEST_CASE("algebra_projection examples") {
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  Rng rng(5);
  const MatrixXd a = rng.normal_matrix(3, 3);
  CHECK(algebra_projection(so3, a + a.transpose()).matrix().norm() < 1e-14);

  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  const MatrixXd m = rng.normal_matrix(3, 3);
  MatrixXd expected = MatrixXd::Zero(3, 3);
  expected.topLeftCorner(2, 2) = 0.5 * (m.topLeftCorner(2, 2) - m.topLeftCorner(2, 2).transpose());
  expected.block(0, 2, 2, 1) = m.block(0, 2, 2, 1);
  CHECK((algebra_projection(se2, m).matrix() - expected).norm() < 1e-14);

  CHECK_THROWS_AS(algebra_projection(so3, MatrixXd::Zero(2, 2)), DimensionError);
}

TEST_CASE("property: algebra_projection is idempotent and self-adjoint") {
  for (const auto& g : sample_groups()) {
    CAPTURE(g.name());
    const Index d = g.ambient_dim();
    for_cases(13, [&](Rng& rng, int) {
      const MatrixXd a = rng.normal_matrix(d, d);
      const MatrixXd b = rng.normal_matrix(d, d);
      const MatrixXd pa = algebra_projection(g, a).matrix();
      const MatrixXd pb = algebra_projection(g, b).matrix();
      CHECK((algebra_projection(g, pa).matrix() - pa).norm() <= 1e-10);
      CHECK(std::abs((pa.transpose() * b).trace() - (a.transpose() * pb).trace()) <= 1e-10);
      const auto xi = random_element(g, rng);
      CHECK((algebra_projection(g, xi.matrix()).coeffs() - xi.coeffs()).norm() <= 1e-10);
    });
  }
}

TEST_CASE("LieAlgebraElement matrix is the basis combination") {
  const auto se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  Rng rng(8);
  const VectorXd c = rng.normal_vector(se3.dim());
  MatrixXd sum = MatrixXd::Zero(4, 4);
  for (Index k = 0; k < se3.dim(); ++k) sum += c[k] * se3.algebra_basis()[k];
  CHECK((se3.element(c).matrix() - sum).norm() < 1e-14);
  CHECK((se3.coordinates(sum) - c).norm() < 1e-14);
}
