#include <algorithm>
#include <sstream>

#include "liesym/enforce.hpp"
#include "liesym/error.hpp"
#include "liesym/linalg.hpp"
#include "liesym/operators.hpp"
#include "support.hpp"

using namespace liesym;
using namespace liesym::test;

namespace {

struct Setup {
  ActionPair pair;
  Dictionary dict;
  SampledInnerProduct inner;
  LieOperatorTensor tensor;
};

Setup scalar_setup(const MatrixLieGroup& g, int degree, std::uint64_t seed) {
  ActionPair pair(Representation::identity(g), Representation::trivial(g, 1));
  const Dictionary dict = Dictionary::polynomial(static_cast<int>(pair.input_dim()), 1, degree);
  const auto inner = build_inner_product(CubeDomain::symmetric(dict.input_dim()), default_sample_count(pair, dict), seed);
  auto tensor = assemble_lie_tensor(pair, dict, inner);
  return {pair, dict, inner, tensor};
}

// Maximum of |K_g F - F| over the sample points for every column and every g.
double worst_transform_residual(const Setup& s, const MatrixXd& columns, const std::vector<MatrixXd>& elements) {
  double worst = 0.0;
  for (Index k = 0; k < columns.cols(); ++k) {
    const VectorXd c = columns.col(k);
    for (const auto& g : elements) {
      for (Index j = 0; j < s.inner.size(); ++j) {
        const VectorXd x = s.inner.points.col(j);
        worst = std::max(worst, (finite_transform_eval(s.pair, s.dict, c, g, x) - evaluate_model(s.dict, c, x)).norm());
      }
    }
  }
  return worst;
}

std::vector<MatrixXd> random_elements(const MatrixLieGroup& g, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MatrixXd> out;
  for (int i = 0; i < count; ++i) out.push_back(exp_map(random_element(g, rng)));
  for (const auto& r : g.component_reps()) {
    out.push_back(r);
    out.push_back(r * exp_map(random_element(g, rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("SO(2)-invariant quadratics are spanned by 1 and |x|^2") {
  const auto s = scalar_setup(MatrixLieGroup::make(GroupKind::SO, 2), 2, 3);
  const auto basis = equivariant_function_basis(s.tensor, s.pair, s.dict, s.inner);
  REQUIRE(basis.dim() == 2);
  // Monomials: 1, x1, x2, x1^2, x1 x2, x2^2.
  MatrixXd expected = MatrixXd::Zero(6, 2);
  expected(0, 0) = 1.0;
  expected(3, 1) = expected(5, 1) = 1.0;
  CHECK(subspace_distance(basis.columns, expected) < 1e-8);
  CHECK((basis.columns.transpose() * basis.columns - MatrixXd::Identity(2, 2)).norm() < 1e-12);
  for (double r : basis.residuals) CHECK(r <= 1e-8);
}

TEST_CASE("the trivial group admits the whole dictionary") {
  const auto g = MatrixLieGroup::make(GroupKind::Trivial, 2);
  const auto s = scalar_setup(g, 3, 4);
  const auto basis = equivariant_function_basis(s.tensor, s.pair, s.dict, s.inner);
  CHECK(basis.dim() == s.dict.size());
}

TEST_CASE("O(2) keeps the SO(2) invariants and its basis lies inside them") {
  const auto so = scalar_setup(MatrixLieGroup::make(GroupKind::SO, 2), 3, 5);
  const auto o = scalar_setup(MatrixLieGroup::make(GroupKind::O, 2), 3, 5);
  const auto bso = equivariant_function_basis(so.tensor, so.pair, so.dict, so.inner);
  const auto bo = equivariant_function_basis(o.tensor, o.pair, o.dict, o.inner);
  CHECK(bso.dim() == 2);
  CHECK(bo.dim() == 2);
  CHECK(span_contained(bo.columns, bso.columns, 1e-8));
}

TEST_CASE("property: enforced bases are invariant under random group elements") {
  for (auto [kind, n, deg] : std::vector<std::tuple<GroupKind, int, int>>{
           {GroupKind::SO, 2, 4}, {GroupKind::O, 3, 2}, {GroupKind::SE, 2, 3}, {GroupKind::SO, 3, 3}}) {
    const auto g = MatrixLieGroup::make(kind, n);
    CAPTURE(g.name());
    const auto s = scalar_setup(g, deg, 6);
    const auto basis = equivariant_function_basis(s.tensor, s.pair, s.dict, s.inner);
    CHECK(basis.dim() >= 1);
    CHECK(worst_transform_residual(s, basis.columns, random_elements(g, 20, 7)) <= 1e-7);
  }
}

TEST_CASE("enforce rejects mismatched inputs") {
  const auto s = scalar_setup(MatrixLieGroup::make(GroupKind::SO, 2), 2, 3);
  const auto other = Dictionary::polynomial(2, 1, 3);
  CHECK_THROWS_AS(equivariant_function_basis(s.tensor, s.pair, other, s.inner), DimensionError);
}

TEST_CASE("layer bases") {
  const auto so3 = MatrixLieGroup::make(GroupKind::SO, 3);
  const auto id3 = Representation::identity(so3);
  const auto l = equivariant_layer_basis(id3, id3);
  REQUIRE(l.dim() == 1);
  CHECK(subspace_distance(l.weights[0].reshaped(9, 1), MatrixXd::Identity(3, 3).reshaped(9, 1)) < 1e-10);
  CHECK(l.biases[0].norm() < 1e-12);

  const auto t2 = Representation::trivial(so3, 2);
  const auto t4 = Representation::trivial(so3, 4);
  CHECK(equivariant_layer_basis(t2, t4).dim() == 4 * 2 + 4);

  const auto so2 = MatrixLieGroup::make(GroupKind::SO, 2);
  const auto l2 = equivariant_layer_basis(Representation::identity(so2), Representation::trivial(so2, 1));
  REQUIRE(l2.dim() == 1);
  CHECK(l2.weights[0].norm() < 1e-12);
  CHECK(std::abs(l2.biases[0][0]) == doctest::Approx(1.0));

  CHECK_THROWS_AS(equivariant_layer_basis(Representation::identity(MatrixLieGroup::make(GroupKind::SE, 2)), t2),
                  DimensionError);
}

TEST_CASE("property: layer solutions commute with the representations") {
  const auto o3 = MatrixLieGroup::make(GroupKind::O, 3);
  const auto prev = Representation::direct_sum(Representation::identity(o3), Representation::trivial(o3, 1));
  const auto next = Representation::direct_sum(Representation::identity(o3), Representation::identity(o3));
  const auto basis = equivariant_layer_basis(prev, next);
  CHECK(basis.dim() == 2);
  for_cases(51, [&](Rng& rng, int c) {
    const Index k = c % basis.dim();
    const MatrixXd g = (c % 2 ? o3.component_reps()[0] : MatrixXd::Identity(3, 3)) * exp_map(random_element(o3, rng));
    const MatrixXd& w = basis.weights[k];
    CHECK((next.group_matrix(g) * w - w * prev.group_matrix(g)).norm() <= 1e-10);
    CHECK((next.group_matrix(g) * basis.biases[k] - basis.biases[k]).norm() <= 1e-10);
  });
}

TEST_CASE("translation-invariant kernels depend on x - y") {
  const auto t2 = MatrixLieGroup::make(GroupKind::T, 2);
  const auto id = Representation::identity(t2);
  const auto one = Representation::trivial(t2, 1);
  const auto kb = equivariant_kernel_basis(id, id, one, one, 2);
  // Polynomials of degree <= 2 in the two variables x - y: 1 + 2 + 3.
  CHECK(kb.basis.dim() == 6);
  Rng rng(61);
  for (Index k = 0; k < kb.basis.dim(); ++k) {
    for (int i = 0; i < 10; ++i) {
      const VectorXd x = rng.normal_vector(2), y = rng.normal_vector(2), t = rng.normal_vector(2);
      CHECK((kb.evaluate(k, x + t, y + t) - kb.evaluate(k, x, y)).norm() <= 1e-8);
    }
  }
}

TEST_CASE("trivial-group kernels fill the kernel dictionary") {
  const auto g = MatrixLieGroup::make(GroupKind::Trivial, 1);
  const auto id = Representation::identity(g);
  const auto kb = equivariant_kernel_basis(id, id, id, id, 2);
  CHECK(kb.basis.dim() == kb.dictionary.size());
}

TEST_CASE("SO(2) scalar kernels are rotation invariant") {
  const auto so2 = MatrixLieGroup::make(GroupKind::SO, 2);
  const auto id = Representation::identity(so2);
  const auto one = Representation::trivial(so2, 1);
  const auto kb = equivariant_kernel_basis(id, id, one, one, 2);
  CHECK(kb.basis.dim() >= 1);
  Rng rng(62);
  double worst = 0.0;
  for (Index k = 0; k < kb.basis.dim(); ++k) {
    for (int i = 0; i < 20; ++i) {
      const MatrixXd r = exp_map(random_element(so2, rng, 3.0));
      const VectorXd x = rng.normal_vector(2), y = rng.normal_vector(2);
      worst = std::max(worst, (kb.evaluate(k, r * x, r * y) - kb.evaluate(k, x, y)).norm());
    }
  }
  CHECK(worst <= 1e-8);
  CHECK_THROWS_AS(equivariant_kernel_basis(id, id, one, one, 50), InvalidArgument);
}

TEST_CASE("kernel table has one row per basis column and grid point") {
  const auto t1 = MatrixLieGroup::make(GroupKind::T, 1);
  const auto id = Representation::identity(t1);
  const auto one = Representation::trivial(t1, 1);
  const auto kb = equivariant_kernel_basis(id, id, one, one, 1);
  MatrixXd grid(2, 3);
  grid << 0, 1, 2, 0, 0, 1;
  std::ostringstream os;
  write_kernel_table(os, kb, grid);
  const std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + kb.basis.dim() * 3);
}
