#ifndef LAYERCALC_SERIALIZE_HPP
#define LAYERCALC_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "layercalc/bvp.hpp"
#include "layercalc/instances.hpp"

namespace layercalc {

using Json = nlohmann::ordered_json;

/// Complex scalars encode as [re, im]; vectors as arrays of them; matrices
/// as row-major nested arrays.
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const ConditionsReport& r);
Json to_json(const ResidualReport& r);
Json to_json(const EquivalenceReport& r);
Json to_json(const InfSupReport& r);

Json fem_config_to_json(const FemConfig& c);
FemConfig fem_config_from_json(const Json& j);

/// How a Problem is specified in configuration files: a seeded abstract
/// instance, a Galerkin instance, or a named builtin preset.
struct InstanceDescriptor {
  enum class Kind { abstract, fem, preset };
  Kind kind = Kind::preset;
  std::uint64_t seed = 0;
  AbstractDims dims;
  FemConfig fem;
  std::string preset;
};

Json instance_to_json(const InstanceDescriptor& d);
InstanceDescriptor instance_from_json(const Json& j);

/// Validates a document against the subset of JSON Schema used by the
/// report schema (type, properties, required, items, enum, minimum,
/// additionalProperties). Returns human-readable violations, empty if valid.
std::vector<std::string> validate_against_schema(const Json& document,
                                                 const Json& schema);

}  // namespace layercalc

#endif
