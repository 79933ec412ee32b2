#include <numbers>

#include "liesym/discover.hpp"
#include "liesym/error.hpp"
#include "liesym/experiments.hpp"
#include "liesym/linalg.hpp"
#include "liesym/operators.hpp"
#include "liesym/polynomial.hpp"
#include "support.hpp"

using namespace liesym;
using namespace liesym::test;

namespace {

LieOperatorTensor scalar_tensor(const MatrixLieGroup& g, int degree, std::uint64_t seed) {
  const ActionPair pair(Representation::identity(g), Representation::trivial(g, 1));
  const Dictionary dict = Dictionary::polynomial(static_cast<int>(pair.input_dim()), 1, degree);
  return assemble_lie_tensor(
      pair, dict, build_inner_product(CubeDomain::symmetric(dict.input_dim()), default_sample_count(pair, dict), seed));
}

Polynomial sum_of_squares(int n, int first, int last) {
  Polynomial p(n);
  for (int k = first; k < last; ++k) p = p + Polynomial::variable(n, k).pow(2);
  return p;
}

// Coordinates of the rotation generators in the SE(n) basis (they come first).
MatrixXd rotation_block(const MatrixLieGroup& se) {
  const Index r = se.n() * (se.n() - 1) / 2;
  return MatrixXd::Identity(se.dim(), r);
}

// Dimension of span(a) intersected with span(b), by rank counting.
Index intersection_dim(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return a.cols() + b.cols() - orthonormal_span(ab, 1e-8).cols();
}

// Equally spaced unless an rng supplies random angles.
PointCloud circle(Index count, const VectorXd& centre, double radius, bool frames, Rng* rng = nullptr) {
  PointCloud c;
  c.points.resize(2, count);
  for (Index i = 0; i < count; ++i) {
    const double t = rng ? rng->uniform(0.0, 2 * std::numbers::pi)
                         : 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    c.points.col(i) = centre + radius * Eigen::Vector2d(std::cos(t), std::sin(t));
    if (frames) c.frames.push_back(Eigen::Vector2d(-std::sin(t), std::cos(t)));
  }
  return c;
}

PointCloud sphere(Index count, Rng& rng) {
  PointCloud c;
  c.intrinsic_dim = 2;
  c.points.resize(3, count);
  for (Index i = 0; i < count; ++i) {
    const VectorXd z = rng.normal_vector(3).normalized();
    c.points.col(i) = z;
    Eigen::JacobiSVD<MatrixXd> svd(z.transpose(), Eigen::ComputeFullV);
    c.frames.push_back(svd.matrixV().rightCols(2));
  }
  return c;
}

}  // namespace

TEST_CASE("F = |x|^2 under SE(3) has the rotations about the origin") {
  const auto se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  const auto t = scalar_tensor(se3, 2, 1);
  const auto rep = function_symmetries(t, sum_of_squares(3, 0, 3).coefficients(2));
  REQUIRE(rep.nullity() == 3);
  CHECK(subspace_distance(rep.basis, rotation_block(se3)) < 1e-8);
  for (double r : rep.residuals) CHECK(r <= rep.threshold);
  CHECK(rep.singular_values.size() == se3.dim());
  for (Index i = 1; i < rep.singular_values.size(); ++i) CHECK(rep.singular_values[i] <= rep.singular_values[i - 1]);
}

TEST_CASE("F = 0 is symmetric under everything") {
  const auto se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  const auto t = scalar_tensor(se3, 2, 1);
  CHECK(function_symmetries(t, VectorXd::Zero(t.num_functions)).nullity() == se3.dim());
}

TEST_CASE("property: random F_rad has an (n-r)(n-r+1)/2 dimensional symmetry algebra closed under brackets") {
  for (auto [n, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}}) {
    const auto se = MatrixLieGroup::make(GroupKind::SE, n);
    const auto t = scalar_tensor(se, 4, 100 + n);
    for (int trial = 0; trial < 4; ++trial) {
      CAPTURE(n);
      CAPTURE(r);
      Rng rng = Rng(9).split(static_cast<std::uint64_t>(10 * n + r)).split(static_cast<std::uint64_t>(trial));
      const auto f = random_f_rad(n, r, 2, rng);
      const VectorXd c = f.poly.coefficients(4);
      const auto rep = function_symmetries(t, c);
      CHECK(rep.nullity() == (n - r) * (n - r + 1) / 2);
      const MatrixXd lf = t.operator_matrix(c);
      const auto gens = rep.generators(se);
      for (const auto& xi : gens)
        for (const auto& eta : gens)
          CHECK((lf * bracket(xi, eta).coeffs()).norm() <= 10 * rep.threshold + 1e-12);
    }
  }
}

TEST_CASE("shared symmetries intersect the per-layer algebras") {
  const auto se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  const auto t = scalar_tensor(se3, 2, 2);
  const VectorXd f1 = sum_of_squares(3, 0, 2).coefficients(2);
  const VectorXd f2 = Polynomial::variable(3, 2).coefficients(2);
  const auto r1 = function_symmetries(t, f1);
  const auto r2 = function_symmetries(t, f2);
  CHECK(r1.nullity() == 2);  // z rotation, z translation
  CHECK(r2.nullity() == 3);  // z rotation, x and y translations
  const auto shared = shared_symmetries({t, t}, {f1, f2});
  CHECK(shared.nullity() == intersection_dim(r1.basis, r2.basis));
  CHECK(shared.nullity() == 1);
  CHECK(span_contained(shared.basis, r1.basis, 1e-8));
  CHECK(span_contained(shared.basis, r2.basis, 1e-8));

  const auto single = shared_symmetries({t}, {f1});
  CHECK(subspace_distance(single.basis, r1.basis) < 1e-10);
  CHECK(shared_symmetries({t, t}, {f1, f1}).nullity() == r1.nullity());
  CHECK_THROWS_AS(shared_symmetries({t, scalar_tensor(MatrixLieGroup::make(GroupKind::SO, 3), 2, 2)}, {f1, f1}),
                  DimensionError);
}

TEST_CASE("local PCA frames") {
  PointCloud line;
  line.points.resize(3, 30);
  const Eigen::Vector3d dir = Eigen::Vector3d(1, 2, -2).normalized();
  for (Index i = 0; i < 30; ++i) line.points.col(i) = Eigen::Vector3d(0.1, 0, 0) + 0.05 * static_cast<double>(i) * dir;
  for (const auto& u : estimate_tangent_frames(line, 4).frames) CHECK(std::abs(u.col(0).dot(dir)) > 1 - 1e-12);

  PointCloud plane;
  plane.intrinsic_dim = 2;
  plane.points.resize(3, 49);
  const Eigen::Vector3d a(1, 0, 1), b(0, 1, 0);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) plane.points.col(7 * i + j) = 0.1 * i * a + 0.1 * j * b;
  MatrixXd span(3, 2);
  span << a, b;
  for (const auto& u : estimate_tangent_frames(plane, 8).frames) CHECK(subspace_distance(u, span) < 1e-10);

  // Tangent error on a circle shrinks with density.
  double previous = 1.0;
  for (Index count : {50, 200, 800}) {
    Rng rng(static_cast<std::uint64_t>(count));
    const auto exact = circle(count, Eigen::Vector2d(0, 0), 1.0, true, &rng);
    PointCloud bare = exact;
    bare.frames.clear();
    const auto est = estimate_tangent_frames(bare, 6);
    double mean = 0.0;
    for (Index i = 0; i < count; ++i) mean += subspace_distance(est.frames[i], exact.frames[i]) / count;
    CHECK(mean < previous);
    previous = mean;
  }
  CHECK(previous < 1e-2);
  CHECK_THROWS_AS(estimate_tangent_frames(line, 40), InvalidArgument);
  CHECK(default_neighbor_count(1) == 10);
  CHECK(default_neighbor_count(6) == 14);
}

TEST_CASE("circle about c has the rotation about c") {
  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  const auto action = Representation::identity(se2);
  const Eigen::Vector2d c(0.3, -0.4);
  for (Index count : {200, 400}) {
    const auto rep = pointcloud_symmetries(circle(count, c, 0.7, true), action);
    REQUIRE(rep.nullity() == 1);
    const MatrixXd xi = se2.element(rep.basis.col(0)).matrix();
    CHECK((xi.topLeftCorner(2, 2) * c + xi.block(0, 2, 2, 1)).norm() < 1e-10);
    const MatrixXd s = rep.operator_matrix;
    CHECK((s - s.transpose()).norm() <= 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(s).eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("a full-dimensional cloud is symmetric under the whole group") {
  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  PointCloud cube;
  cube.intrinsic_dim = 2;
  Rng rng(3);
  cube.points = MatrixXd(2, 50);
  for (Index i = 0; i < 50; ++i) {
    cube.points.col(i) = rng.uniform_vector(2, -1, 1);
    cube.frames.push_back(MatrixXd::Identity(2, 2));
  }
  CHECK(pointcloud_symmetries(cube, Representation::identity(se2)).nullity() == se2.dim());
  cube.frames.clear();
  CHECK_THROWS_AS(pointcloud_symmetries(cube, Representation::identity(se2)), InvalidArgument);
}

TEST_CASE("sphere has so(3) and the nullity is stable under doubling") {
  const auto se3 = MatrixLieGroup::make(GroupKind::SE, 3);
  Rng rng(4);
  const auto small = pointcloud_symmetries(sphere(500, rng), Representation::identity(se3));
  const auto large = pointcloud_symmetries(sphere(1000, rng), Representation::identity(se3));
  CHECK(small.nullity() == 3);
  CHECK(large.nullity() == small.nullity());
  CHECK(subspace_distance(small.basis, rotation_block(se3)) < 1e-8);
}

TEST_CASE("graph symmetries") {
  const auto se2 = MatrixLieGroup::make(GroupKind::SE, 2);
  const ActionPair pair(Representation::identity(se2), Representation::trivial(se2, 1));
  const auto dict = Dictionary::polynomial(2, 1, 2);
  const VectorXd c = sum_of_squares(2, 0, 2).coefficients(2);
  const auto inner = build_inner_product(CubeDomain::symmetric(2), 40, 5);
  MatrixXd ys(1, inner.size());
  GraphFrames frames;
  for (Index j = 0; j < inner.size(); ++j) {
    ys.col(j) = evaluate_model(dict, c, inner.points.col(j));
    frames.jacobians.push_back(jacobian_model(dict, c, inner.points.col(j)));
  }
  const auto graph = graph_symmetries(inner.points, ys, pair, frames);
  REQUIRE(graph.nullity() == 1);
  const auto tensor = assemble_lie_tensor(pair, dict, inner);
  const auto fn = function_symmetries(tensor, c);
  CHECK(subspace_distance(graph.basis, fn.basis) <= 1e-6);

  // Identity map under simultaneous rotations.
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  const ActionPair rot(Representation::identity(so3), Representation::identity(so3));
  Rng rng(6);
  const MatrixXd xs = rng.normal_matrix(3, 60);
  GraphFrames id_frames;
  id_frames.jacobians.assign(60, MatrixXd::Identity(3, 3));
  CHECK(graph_symmetries(xs, xs, rot, id_frames).nullity() == 3);

  // Constant map under input translations, with estimated frames.
  const auto t2 = MatrixLieGroup::make(GroupKind::T, 2);
  const ActionPair tr(Representation::identity(t2), Representation::trivial(t2, 1));
  const MatrixXd grid = rng.normal_matrix(2, 80);
  CHECK(graph_symmetries(grid, MatrixXd::Constant(1, 80, 2.5), tr, GraphFrames{}).nullity() == 2);

  // Vertical graph: every x equal, so frames cannot be graphs over the inputs.
  const MatrixXd same = MatrixXd::Zero(2, 30);
  const MatrixXd heights = rng.normal_matrix(1, 30);
  GraphFrames pca;
  pca.k_neighbors = 5;
  CHECK_THROWS_AS(graph_symmetries(same, heights, tr, pca), NumericalError);
}

TEST_CASE("conserved quantities") {
  const auto field = Dictionary::polynomial(2, 2, 1);
  const auto cand = Dictionary::polynomial(2, 1, 2);
  const auto inner = build_inner_product(CubeDomain::symmetric(2), 24, 7);
  CHECK(conserved_quantities(field, VectorXd::Zero(field.size()), cand, inner).nullity() == cand.size());

  MatrixXd w = MatrixXd::Zero(2, 3);
  w(0, 2) = 1.0;   // x1' = x2
  w(1, 1) = -1.0;  // x2' = -x1
  const auto osc = conserved_quantities(field, matrix_to_coefficients(field, w), cand, inner);
  REQUIRE(osc.nullity() == 2);
  MatrixXd expected = MatrixXd::Zero(6, 2);
  expected(0, 0) = 1.0;
  expected(3, 1) = expected(5, 1) = 1.0;
  CHECK(subspace_distance(osc.columns, expected) < 1e-8);

  MatrixXd radial = MatrixXd::Zero(2, 3);
  radial.rightCols(2) = MatrixXd::Identity(2, 2);
  const auto rad = conserved_quantities(field, matrix_to_coefficients(field, radial), cand, inner);
  REQUIRE(rad.nullity() == 1);
  CHECK(std::abs(rad.columns(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("vector field symmetries of linear systems") {
  for (int n : {2, 3}) {
    const auto gl = MatrixLieGroup::make(GroupKind::GL, n);
    const auto dict = Dictionary::polynomial(n, n, 1);
    const auto inner = build_inner_product(CubeDomain::symmetric(n), 3 * (n + 1), 8);
    MatrixXd w = MatrixXd::Zero(n, n + 1);
    w.rightCols(n) = MatrixXd::Identity(n, n);
    CHECK(vectorfield_symmetries(dict, matrix_to_coefficients(dict, w), Representation::identity(gl), inner).nullity() ==
          n * n);
  }
  const auto gl2 = MatrixLieGroup::make(GroupKind::GL, 2);
  const auto dict = Dictionary::polynomial(2, 2, 1);
  MatrixXd w = MatrixXd::Zero(2, 3);
  w(0, 1) = 1.0;
  w(1, 2) = 2.0;
  const auto rep = vectorfield_symmetries(dict, matrix_to_coefficients(dict, w), Representation::identity(gl2),
                                          build_inner_product(CubeDomain::symmetric(2), 12, 9));
  REQUIRE(rep.nullity() == 2);
  // Commutant of diag(1, 2): the diagonal matrices E_00 and E_11 (row-major basis).
  MatrixXd diag = MatrixXd::Zero(4, 2);
  diag(0, 0) = diag(3, 1) = 1.0;
  CHECK(subspace_distance(rep.basis, diag) < 1e-8);
}
