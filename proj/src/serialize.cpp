#include "layercalc/serialize.hpp"

namespace layercalc {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("expected a complex number as [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a vector as an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i)
    v[i] = complex_from_json(j[static_cast<size_t>(i)]);
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("expected a matrix as nested arrays");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw ConfigError("matrix rows have inconsistent lengths");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
  }
  return m;
}

Json to_json(const ConditionsReport& r) {
  return Json{{"lambda", r.lambda},
              {"lambda_tol", r.lambda_tol},
              {"coercive", r.coercive},
              {"locality_residual", r.locality_residual},
              {"locality_tol", r.locality_tol},
              {"local", r.local},
              {"trace_extension", {r.trace_extension[0], r.trace_extension[1]}},
              {"trace_factorization",
               {r.trace_factorization[0], r.trace_factorization[1]}},
              {"factored_trace", {r.factored_trace_omega, r.factored_trace_comp}},
              {"pass", r.pass()}};
}

Json to_json(const ResidualReport& r) {
  return Json{{"identity", r.identity}, {"residual", r.residual},
              {"scale", r.scale},       {"tol", r.tol},
              {"applicable", r.applicable}, {"pass", r.pass}};
}

Json to_json(const EquivalenceReport& r) {
  return Json{{"direction", r.direction},
              {"applicable", r.applicable},
              {"hypothesis_constant", r.hypothesis_constant},
              {"conclusion_constant", r.conclusion_constant},
              {"bound", r.bound},
              {"consistent", r.consistent},
              {"note", r.note}};
}

Json to_json(const InfSupReport& r) {
  return Json{{"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"norm_b", r.norm_b}};
}

namespace {

const char* trace_convention_name(TraceConvention t) {
  return t == TraceConvention::whitney ? "whitney" : "top_order";
}

}  // namespace

Json fem_config_to_json(const FemConfig& c) {
  Json coeff;
  if (c.coefficients.empty()) {
    coeff = Json{{"kind", "identity"}};
  } else if (c.coefficients.size() == 1) {
    coeff = Json{{"kind", "constant"}, {"value", matrix_to_json(c.coefficients[0])}};
  } else {
    Json values = Json::array();
    for (const auto& m : c.coefficients) values.push_back(matrix_to_json(m));
    coeff = Json{{"kind", "per_element"}, {"values", std::move(values)}};
  }
  return Json{{"order", c.order},
              {"dimension", c.dimension},
              {"box", {c.box_lo, c.box_hi}},
              {"omega", {c.omega_lo, c.omega_hi}},
              {"n_elements", c.n_elements},
              {"trace_convention", trace_convention_name(c.trace_convention)},
              {"coefficients", std::move(coeff)}};
}

FemConfig fem_config_from_json(const Json& j) {
  FemConfig c;
  try {
    c.order = j.at("order").get<int>();
    c.dimension = j.at("dimension").get<int>();
    c.box_lo = j.at("box").at(0).get<double>();
    c.box_hi = j.at("box").at(1).get<double>();
    c.omega_lo = j.at("omega").at(0).get<double>();
    c.omega_hi = j.at("omega").at(1).get<double>();
    c.n_elements = j.at("n_elements").get<int>();
    if (j.contains("trace_convention")) {
      const std::string t = j.at("trace_convention").get<std::string>();
      if (t == "whitney")
        c.trace_convention = TraceConvention::whitney;
      else if (t == "top_order")
        c.trace_convention = TraceConvention::top_order;
      else
        throw ConfigError("unknown trace_convention: " + t);
    }
    if (j.contains("coefficients")) {
      const Json& coeff = j.at("coefficients");
      const std::string kind = coeff.at("kind").get<std::string>();
      if (kind == "constant") {
        c.coefficients = {matrix_from_json(coeff.at("value"))};
      } else if (kind == "per_element") {
        for (const Json& m : coeff.at("values"))
          c.coefficients.push_back(matrix_from_json(m));
      } else if (kind != "identity") {
        throw ConfigError("unknown coefficient kind: " + kind);
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad fem configuration: ") + e.what());
  }
  return c;
}

Json instance_to_json(const InstanceDescriptor& d) {
  switch (d.kind) {
    case InstanceDescriptor::Kind::abstract:
      return Json{{"kind", "abstract"},
                  {"seed", d.seed},
                  {"dims", {d.dims.n_omega, d.dims.n_comp, d.dims.n_gamma1,
                            d.dims.n_gamma2}}};
    case InstanceDescriptor::Kind::fem: {
      Json out = fem_config_to_json(d.fem);
      out["kind"] = "fem";
      return out;
    }
    case InstanceDescriptor::Kind::preset:
    default:
      return Json{{"kind", "preset"}, {"name", d.preset}};
  }
}

InstanceDescriptor instance_from_json(const Json& j) {
  InstanceDescriptor d;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "abstract") {
      d.kind = InstanceDescriptor::Kind::abstract;
      d.seed = j.at("seed").get<std::uint64_t>();
      const Json& dims = j.at("dims");
      d.dims = AbstractDims{dims.at(0).get<int>(), dims.at(1).get<int>(),
                            dims.at(2).get<int>(), dims.at(3).get<int>()};
    } else if (kind == "fem") {
      d.kind = InstanceDescriptor::Kind::fem;
      d.fem = fem_config_from_json(j);
    } else if (kind == "preset") {
      d.kind = InstanceDescriptor::Kind::preset;
      d.preset = j.at("name").get<std::string>();
    } else {
      throw ConfigError("unknown instance kind: " + kind);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad instance descriptor: ") + e.what());
  }
  return d;
}

namespace {

bool type_matches(const Json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

void validate_node(const Json& value, const Json& schema, const std::string& path,
                   std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const std::string type = schema.at("type").get<std::string>();
    if (!type_matches(value, type)) {
      errors.push_back(path + ": expected " + type);
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const Json& option : schema.at("enum")) found = found || option == value;
    if (!found) errors.push_back(path + ": value not in enum");
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema.at("minimum").get<double>())
    errors.push_back(path + ": below minimum");
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const Json& key : schema.at("required"))
        if (!value.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key " +
                           key.get<std::string>());
    const Json props =
        schema.contains("properties") ? schema.at("properties") : Json::object();
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        validate_node(sub, props.at(key), path + "/" + key, errors);
      } else if (schema.contains("additionalProperties")) {
        const Json& extra = schema.at("additionalProperties");
        if (extra.is_boolean() && !extra.get<bool>())
          errors.push_back(path + ": unexpected key " + key);
        else if (extra.is_object())
          validate_node(sub, extra, path + "/" + key, errors);
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    size_t i = 0;
    for (const Json& item : value)
      validate_node(item, schema.at("items"), path + "/" + std::to_string(i++),
                    errors);
  }
}

}  // namespace

std::vector<std::string> validate_against_schema(const Json& document,
                                                 const Json& schema) {
  std::vector<std::string> errors;
  validate_node(document, schema, "#", errors);
  return errors;
}

}  // namespace layercalc
