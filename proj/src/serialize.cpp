#include "liesym/serialize.hpp"

#include "liesym/error.hpp"

namespace liesym {

Json to_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a matrix as an array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j[0].size()) : 0;
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Index>(j[i].size()) != cols) throw ConfigError("matrix rows differ in length");
    for (Index k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  VectorXd v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Json to_json(const GroupDescriptor& d) {
  Json out{{"kind", to_string(d.kind)}, {"n", d.n}};
  if (d.kind == GroupKind::DirectProduct) {
    Json f = Json::array();
    for (const auto& x : d.factors) f.push_back(to_json(x));
    out["factors"] = std::move(f);
  }
  return out;
}

GroupDescriptor group_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("group must be an object {kind, n}");
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "n" && key != "factors") throw ConfigError("unknown key 'group." + key + "'");
  }
  GroupDescriptor d;
  try {
    d.kind = parse_group_kind(j.at("kind").get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (d.kind == GroupKind::DirectProduct) {
    for (const auto& f : j.at("factors")) d.factors.push_back(group_from_json(f));
    d.n = static_cast<int>(MatrixLieGroup::from_descriptor(d).ambient_dim());
  } else {
    d.n = j.at("n").get<int>();
  }
  return d;
}

Json to_json(const DictionaryDescriptor& d) {
  if (d.type == "poly") return Json{{"type", "poly"}, {"m", d.m}, {"n", d.n}, {"d", d.d}};
  return Json{{"type", "named"}, {"id", d.id}};
}

DictionaryDescriptor dictionary_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("dictionary must be an object");
  DictionaryDescriptor d;
  d.type = j.at("type").get<std::string>();
  if (d.type == "poly") {
    for (const auto& [key, value] : j.items()) {
      if (key != "type" && key != "m" && key != "n" && key != "d") throw ConfigError("unknown key 'dictionary." + key + "'");
    }
    d.m = j.at("m").get<int>();
    d.n = j.at("n").get<int>();
    d.d = j.at("d").get<int>();
  } else if (d.type == "named") {
    for (const auto& [key, value] : j.items()) {
      if (key != "type" && key != "id") throw ConfigError("unknown key 'dictionary." + key + "'");
    }
    d.id = j.at("id").get<std::string>();
    d.d = -1;
  } else {
    throw ConfigError("dictionary.type must be 'poly' or 'named'");
  }
  return d;
}

Json to_json(const SampledInnerProduct& inner) {
  return Json{{"seed", inner.seed},
              {"num_points", inner.size()},
              {"domain", {{"lower", to_json(inner.domain.lower)}, {"upper", to_json(inner.domain.upper)}}},
              {"points", to_json(MatrixXd(inner.points.transpose()))},
              {"weights", to_json(inner.weights)}};
}

SampledInnerProduct inner_product_from_json(const Json& j) {
  SampledInnerProduct inner;
  inner.seed = j.at("seed").get<std::uint64_t>();
  inner.domain.lower = vector_from_json(j.at("domain").at("lower"));
  inner.domain.upper = vector_from_json(j.at("domain").at("upper"));
  inner.points = matrix_from_json(j.at("points")).transpose();
  inner.weights = vector_from_json(j.at("weights"));
  return inner;
}

Json to_json(const LieOperatorTensor& t) {
  Json flat = Json::array();
  for (Index i = 0; i < t.num_functions; ++i) {
    const MatrixXd s = t.slice(i);
    for (Index j = 0; j < t.range_dim; ++j)
      for (Index k = 0; k < t.algebra_dim; ++k) flat.push_back(s(j, k));
  }
  return Json{{"dims", {t.num_functions, t.range_dim, t.algebra_dim}},
              {"seed", t.inner.seed},
              {"domain", {{"lower", to_json(t.inner.domain.lower)}, {"upper", to_json(t.inner.domain.upper)}}},
              {"group", to_json(t.group)},
              {"dictionary", to_json(t.dictionary)},
              {"dropped", t.dropped},
              {"gram_condition", t.gram_condition},
              {"inner_product", to_json(t.inner)},
              {"tensor", std::move(flat)}};
}

LieOperatorTensor tensor_from_json(const Json& j) {
  LieOperatorTensor t;
  const auto& dims = j.at("dims");
  t.num_functions = dims.at(0).get<Index>();
  t.range_dim = dims.at(1).get<Index>();
  t.algebra_dim = dims.at(2).get<Index>();
  t.group = group_from_json(j.at("group"));
  t.dictionary = dictionary_from_json(j.at("dictionary"));
  t.dropped = j.at("dropped").get<Index>();
  t.gram_condition = j.at("gram_condition").get<double>();
  t.inner = inner_product_from_json(j.at("inner_product"));
  const auto& flat = j.at("tensor");
  if (static_cast<Index>(flat.size()) != t.num_functions * t.range_dim * t.algebra_dim) {
    throw ConfigError("tensor entry count does not match its dims");
  }
  t.slices.resize(t.range_dim * t.algebra_dim, t.num_functions);
  std::size_t pos = 0;
  for (Index i = 0; i < t.num_functions; ++i)
    for (Index r = 0; r < t.range_dim; ++r)
      for (Index k = 0; k < t.algebra_dim; ++k) t.slices(k * t.range_dim + r, i) = flat[pos++].get<double>();
  return t;
}

Json to_json(const SymmetryReport& r) {
  Json out{{"group", to_json(r.group)},
           {"source", r.source},
           {"singular_values", to_json(r.singular_values)},
           {"threshold", r.threshold},
           {"nullity", r.nullity()},
           {"subalgebra_basis", to_json(MatrixXd(r.basis.transpose()))},
           {"residuals", r.residuals},
           {"seed", r.seed},
           {"num_points", r.num_points}};
  if (!r.notes.empty()) out["notes"] = r.notes;
  return out;
}

Json to_json(const EquivariantBasis& b) {
  return Json{{"group", to_json(b.group)},
              {"dictionary", to_json(b.dictionary)},
              {"seed", b.seed},
              {"num_points", b.num_points},
              {"dim", b.dim()},
              {"singular_values", to_json(b.singular_values)},
              {"threshold", b.threshold},
              {"columns", to_json(MatrixXd(b.columns.transpose()))},
              {"residuals", b.residuals}};
}

Json to_json(const ConservedQuantities& c) {
  return Json{{"nullity", c.nullity()},
              {"singular_values", to_json(c.singular_values)},
              {"threshold", c.threshold},
              {"columns", to_json(MatrixXd(c.columns.transpose()))},
              {"residuals", c.residuals}};
}

Json to_json(const FitResult& f) {
  Json out{{"solver", f.solver},
           {"converged", f.converged},
           {"iterations", f.iterations},
           {"primal_residual", f.primal_residual},
           {"dual_residual", f.dual_residual},
           {"consensus_residual", f.consensus_residual},
           {"final_rho", f.final_rho},
           {"mse", f.mse},
           {"penalty", f.penalty},
           {"coefficients", to_json(f.coeffs)},
           {"objective", f.objective}};
  if (f.symmetry) out["symmetry"] = to_json(*f.symmetry);
  if (f.success) out["success"] = *f.success;
  return out;
}

}  // namespace liesym
