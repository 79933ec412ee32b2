#pragma once

#include <string>

#include <json.hpp>

#include "liesym/discover.hpp"
#include "liesym/enforce.hpp"
#include "liesym/operators.hpp"
#include "liesym/promote.hpp"

namespace liesym {

using Json = nlohmann::ordered_json;

Json to_json(const MatrixXd& m);
Json to_json(const VectorXd& v);
MatrixXd matrix_from_json(const Json& j);
VectorXd vector_from_json(const Json& j);

Json to_json(const GroupDescriptor& d);
GroupDescriptor group_from_json(const Json& j);

Json to_json(const DictionaryDescriptor& d);
DictionaryDescriptor dictionary_from_json(const Json& j);

Json to_json(const SampledInnerProduct& inner);
SampledInnerProduct inner_product_from_json(const Json& j);

/// {dims, seed, domain, group, dictionary, dropped, gram_condition, points, weights, tensor}
/// with the tensor flattened row-major over (i, j, k).
Json to_json(const LieOperatorTensor& t);
LieOperatorTensor tensor_from_json(const Json& j);

Json to_json(const SymmetryReport& r);
Json to_json(const EquivariantBasis& b);
Json to_json(const ConservedQuantities& c);
/// The convergence trace is included in full.
Json to_json(const FitResult& f);

}  // namespace liesym
