#include <filesystem>
#include <fstream>

#include "liesym/config.hpp"
#include "liesym/error.hpp"
#include "liesym/serialize.hpp"
#include "support.hpp"

using namespace liesym;
using namespace liesym::test;
namespace fs = std::filesystem;

namespace {

Json enforce_doc() {
  return Json::parse(R"({"command": "enforce", "seed": 3,
                         "group": {"kind": "SO", "n": 2},
                         "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2}})");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "liesym-unit-config";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("a minimal enforce config parses with defaults") {
  const RunConfig cfg = parse_config(enforce_doc());
  CHECK(cfg.command == "enforce");
  CHECK(cfg.seed == 3);
  CHECK(cfg.group->kind == GroupKind::SO);
  CHECK(cfg.dictionary->d == 2);
  CHECK(cfg.cutoff.relative == 1e-8);
  CHECK_FALSE(cfg.cutoff.absolute.has_value());
  CHECK(cfg.sampling.lower == -1.0);
  CHECK(cfg.sampling.upper == 1.0);
  CHECK(cfg.hash.size() == 16);
}

TEST_CASE("config errors name the offending key") {
  Json doc = enforce_doc();
  doc["colour"] = 1;
  CHECK_THROWS_WITH_AS(parse_config(doc), "unknown key 'colour'", ConfigError);
  doc = enforce_doc();
  doc["solver"] = Json{{"rho", 1.0}, {"tol", 1e-3}};
  CHECK_THROWS_WITH_AS(parse_config(doc), "unknown key 'solver.tol'", ConfigError);
  doc = enforce_doc();
  doc["seed"] = "three";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = enforce_doc();
  doc.erase("group");
  CHECK_THROWS_WITH_AS(parse_config(doc), "missing key 'group'", ConfigError);
  doc = enforce_doc();
  doc["command"] = "dance";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = enforce_doc();
  doc["sampling"] = Json{{"lower", 1.0}, {"upper", -1.0}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = enforce_doc();
  doc["group"] = Json{{"kind", "Sp"}, {"n", 2}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  // Keys of other commands are rejected.
  doc = enforce_doc();
  doc["gamma_grid"] = Json::array({0.1});
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("config hashes depend on content only") {
  const Json a = enforce_doc();
  Json b = enforce_doc();
  CHECK(config_hash(a) == config_hash(b));
  b["seed"] = 4;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("fit and experiment configs") {
  const fs::path data = scratch("data.csv");
  const Json fit = Json::parse(R"({"command": "fit", "data_csv": "data.csv", "gamma": 0.5,
                                    "group": {"kind": "SE", "n": 2},
                                    "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2},
                                    "solver": {"max_iter": 10}})");
  const RunConfig cfg = parse_config(fit, data.parent_path());
  CHECK(cfg.data_csv == data);
  CHECK(cfg.gamma_grid == std::vector<double>{0.5});
  CHECK(cfg.solver.max_iter == 10);
  Json both = fit;
  both["gamma_grid"] = Json::array({0.1, 0.2});
  CHECK_THROWS_AS(parse_config(both), ConfigError);

  const RunConfig poly = parse_config(Json::parse(R"({"command": "exp-polyrec", "family": "rad", "n": 4, "r": 2})"));
  CHECK(poly.poly_recovery.family == "rad");
  CHECK(poly.poly_recovery.n == 4);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"command": "exp-polyrec", "n": 3, "r": 4})")), ConfigError);

  const RunConfig sm = parse_config(Json::parse(R"({"command": "exp-springmass", "num_particles": 3})"));
  CHECK(sm.spring_mass.num_particles == 3);
}

TEST_CASE("CSV matrices with and without headers") {
  const fs::path p = scratch("m.csv");
  std::ofstream(p) << "a,b\n1,2\n3.5,-4e-1\n";
  const MatrixXd m = read_csv_matrix(p);
  REQUIRE(m.rows() == 2);
  CHECK(m(1, 1) == -0.4);
  std::ofstream(p) << "1,2\n3\n";
  try {
    read_csv_matrix(p);
    FAIL("ragged CSV accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(read_csv_matrix(scratch("missing.csv")), ConfigError);
}

TEST_CASE("JSON round trips for descriptors and matrices") {
  Rng rng(1);
  const MatrixXd m = rng.normal_matrix(3, 4);
  CHECK(matrix_from_json(to_json(m)) == m);
  const VectorXd v = rng.normal_vector(5);
  CHECK(vector_from_json(to_json(v)) == v);
  const auto prod = MatrixLieGroup::direct_product(
      {MatrixLieGroup::make(GroupKind::SE, 3), MatrixLieGroup::make(GroupKind::SE, 3)});
  CHECK(group_from_json(to_json(prod.descriptor())) == prod.descriptor());
  CHECK_THROWS_AS(group_from_json(Json::parse(R"({"kind": "SO", "n": 2, "extra": 1})")), ConfigError);
}

TEST_CASE("split streams are reproducible and independent of consumption order") {
  Rng root(42);
  Rng a1 = root.split("a"), b1 = root.split("b");
  const double first_b = b1.uniform();
  const double first_a = a1.uniform();
  Rng a2 = Rng(42).split("a");
  CHECK(a2.uniform() == first_a);
  CHECK(Rng(42).split("b").uniform() == first_b);
  CHECK(first_a != first_b);
  CHECK(Rng(42).split(std::uint64_t{1})() != Rng(42).split(std::uint64_t{2})());
}

TEST_CASE("property: uniform and normal draws have the right moments") {
  Rng rng(7);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(su / n - 0.5) < 4 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sn / n) < 4 / std::sqrt(n));
  CHECK(std::abs(sn2 / n - 1.0) < 4 * std::sqrt(2.0 / n));
}
