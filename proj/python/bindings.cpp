#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "layercalc/runner.hpp"

namespace py = pybind11;
using namespace layercalc;

namespace {

Side side_from(const std::string& s) {
  if (s == "omega") return Side::omega;
  if (s == "complement") return Side::complement;
  throw StructureError("side must be 'omega' or 'complement'");
}

py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return py::none();
    case Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case Json::value_t::number_float:
      return py::float_(j.get<double>());
    case Json::value_t::string:
      return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const Json& item : j) out.append(json_to_py(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items())
        out[py::str(key)] = json_to_py(value);
      return out;
    }
    default:
      return py::none();
  }
}

Json py_to_json(const py::handle& obj) {
  return Json::parse(
      py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object reports_to_py(const std::vector<ResidualReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return json_to_py(arr);
}

}  // namespace

PYBIND11_MODULE(_layercalc, m) {
  m.doc() = "Variational layer-potential calculus on finite-dimensional "
            "Hilbert spaces";

  py::register_exception<Error>(m, "LayercalcError", PyExc_RuntimeError);

  py::class_<Space>(m, "Space")
      .def(py::init<Matrix>(), py::arg("gram"))
      .def_property_readonly("dim", &Space::dim)
      .def_property_readonly("gram", &Space::gram)
      .def("norm", &Space::norm)
      .def("inner", &Space::inner);

  py::class_<QuotientSpace>(m, "QuotientSpace")
      .def(py::init<Space, Matrix>(), py::arg("parent"), py::arg("surjection"))
      .def_property_readonly("dim", &QuotientSpace::dim)
      .def_property_readonly("gram",
                             [](const QuotientSpace& q) { return q.range().gram(); })
      .def("norm", &QuotientSpace::norm)
      .def("extend", &QuotientSpace::extend);

  m.def("dual_space", py::overload_cast<const Space&>(&dual_space));

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("lambda_", &Problem::lambda)
      .def_property_readonly("norm_b", &Problem::norm_b)
      .def_property_readonly("h1_dim", [](const Problem& p) { return p.h1().dim(); })
      .def_property_readonly("h2_dim", [](const Problem& p) { return p.h2().dim(); })
      .def_property_readonly(
          "d1_dim", [](const Problem& p) { return p.dirichlet_space(1).dim(); })
      .def_property_readonly(
          "d2_dim", [](const Problem& p) { return p.dirichlet_space(2).dim(); })
      .def("interior_dim",
           [](const Problem& p, const std::string& side) {
             return p.interior_space(2, side_from(side)).dim();
           })
      .def("restriction",
           [](const Problem& p, int j, const std::string& side) {
             return p.restriction(j, side_from(side));
           })
      .def("trace", [](const Problem& p, int j) { return p.trace(j); })
      .def("has_factored_trace",
           [](const Problem& p, const std::string& side) {
             return p.has_factored_trace(side_from(side));
           })
      .def("local_form_norm", [](const Problem& p, const std::string& side) {
        return p.local_form_norm(side_from(side));
      });

  m.def(
      "make_abstract",
      [](std::uint64_t seed, std::tuple<int, int, int, int> dims) {
        const auto [a, b, c, d] = dims;
        return make_abstract(seed, AbstractDims{a, b, c, d});
      },
      py::arg("seed"), py::arg("dims"));
  m.def(
      "make_fem",
      [](const py::dict& config) {
        Json j = py_to_json(config);
        if (!j.contains("kind")) j["kind"] = "fem";
        return build_instance(instance_from_json(j));
      },
      py::arg("config"));
  m.def("preset", [](const std::string& name) {
    return build_instance(builtin_instance(name));
  });
  m.def("list_presets", [] {
    py::list out;
    for (const auto& [name, d] : list_builtin_instances()) {
      py::dict row;
      row["name"] = name;
      row["instance"] = json_to_py(instance_to_json(d));
      out.append(row);
    }
    return out;
  });

  m.def("verify_conditions",
        [](const Problem& p, double lambda_tol, double locality_tol) {
          return json_to_py(to_json(verify_conditions(p, lambda_tol, locality_tol)));
        },
        py::arg("problem"), py::arg("lambda_tol") = 1e-6,
        py::arg("locality_tol") = 1e-12);

  m.def("inf_sup", [](const Matrix& gram_left, const Matrix& gram_right,
                      const Matrix& form) {
    return json_to_py(to_json(
        inf_sup(SesquilinearForm(Space(gram_left), Space(gram_right), form))));
  });

  m.def("apply_l",
        [](const Problem& p, const Vector& u) { return apply_l(p, u).action; });
  m.def("l_indicator",
        [](const Problem& p, const std::string& side, const Vector& coeffs) {
          return l_indicator(p, InteriorElement(side_from(side), coeffs)).action;
        });
  m.def("interior_residual",
        [](const Problem& p, const std::string& side, const Vector& coeffs) {
          return interior_residual(p, InteriorElement(side_from(side), coeffs));
        });
  m.def(
      "neumann_trace",
      [](const Problem& p, const std::string& side, const Vector& coeffs,
         bool force) {
        NeumannTraceOptions opt;
        opt.force = force;
        return neumann_trace(p, InteriorElement(side_from(side), coeffs), opt)
            .action;
      },
      py::arg("problem"), py::arg("side"), py::arg("coeffs"),
      py::arg("force") = false);
  m.def("newton_potential", [](const Problem& p, const Vector& action) {
    return newton_potential(p, Functional(action));
  });
  m.def("single_layer", [](const Problem& p, const Vector& g) {
    return single_layer(p, Functional(g));
  });
  m.def("double_layer",
        [](const Problem& p, const std::string& side, const Vector& f) {
          return double_layer(p, side_from(side), f).coeffs;
        });
  m.def("trace_of_double_layer",
        [](const Problem& p, const std::string& side, const Vector& f) {
          return trace_of_double_layer(p, side_from(side), f);
        });
  m.def("adjoint_problem", &adjoint_problem);
  m.def("swap_sides", &swap_sides);

  m.def(
      "check_green",
      [](const Problem& p, const std::string& side, const Vector& coeffs,
         double tol) {
        return reports_to_py(
            check_green(p, InteriorElement(side_from(side), coeffs), tol));
      },
      py::arg("problem"), py::arg("side"), py::arg("coeffs"),
      py::arg("tol") = 1e-9);
  m.def(
      "check_jump",
      [](const Problem& p, const Vector& f, const Vector& g, double tol) {
        return reports_to_py(check_jump(p, f, Functional(g), tol));
      },
      py::arg("problem"), py::arg("f"), py::arg("g"), py::arg("tol") = 1e-9);
  m.def(
      "check_adjoint",
      [](const Problem& p, const Vector& f, const Vector& phi, const Vector& g,
         const Vector& gamma, double tol) {
        return reports_to_py(
            check_adjoint(p, f, phi, Functional(g), Functional(gamma), tol));
      },
      py::arg("problem"), py::arg("f"), py::arg("phi"), py::arg("g"),
      py::arg("gamma"), py::arg("tol") = 1e-10);
  m.def(
      "check_bounds",
      [](const Problem& p, int samples, std::uint64_t seed, double slack) {
        return reports_to_py(check_bounds(p, samples, seed, slack));
      },
      py::arg("problem"), py::arg("samples") = 25, py::arg("seed") = 7,
      py::arg("slack") = 1e-9);

  m.def("boundary_operator", [](const Problem& p, const std::string& kind) {
    const BoundaryKind k = kind == "single_layer_trace"
                               ? BoundaryKind::single_layer_trace
                               : BoundaryKind::double_layer_neumann;
    const BoundaryOperator op = boundary_operator(p, k);
    py::dict out;
    out["kind"] = boundary_kind_name(op.kind);
    out["matrix"] = op.matrix;
    out["singular_values"] = op.singular_values;
    return out;
  });

  m.def("solve_dirichlet_direct",
        [](const Problem& p, const std::string& side, const Vector& f) {
          const DirichletSolution sol = solve_dirichlet_direct(p, side_from(side), f);
          py::dict out;
          out["solution"] = sol.u.coeffs;
          out["trace_residual"] = sol.trace_residual;
          out["interior_residual"] = sol.interior_residual;
          out["stability"] = sol.stability;
          return out;
        });
  m.def("solve_neumann_direct",
        [](const Problem& p, const std::string& side, const Vector& g) {
          const NeumannSolution sol =
              solve_neumann_direct(p, side_from(side), Functional(g));
          py::dict out;
          out["solution"] = sol.u.coeffs;
          out["kernel_dim"] = sol.kernel_dim;
          out["kernel"] = sol.kernel;
          out["defect"] = sol.defect;
          return out;
        });
  auto layer_result = [](const LayerSolution& sol) {
    py::dict out;
    out["solution"] = sol.u.coeffs;
    out["density"] = sol.density;
    out["data_residual"] = sol.data_residual;
    out["stability"] = sol.stability;
    return out;
  };
  m.def("solve_dirichlet_via_layers",
        [layer_result](const Problem& p, const std::string& side, const Vector& f,
                       double tol_invert) {
          return layer_result(
              solve_dirichlet_via_layers(p, side_from(side), f, tol_invert));
        },
        py::arg("problem"), py::arg("side"), py::arg("f"),
        py::arg("tol_invert") = 1e-8);
  m.def("solve_neumann_via_layers",
        [layer_result](const Problem& p, const std::string& side, const Vector& g,
                       double tol_invert) {
          return layer_result(solve_neumann_via_layers(p, side_from(side),
                                                       Functional(g), tol_invert));
        },
        py::arg("problem"), py::arg("side"), py::arg("g"),
        py::arg("tol_invert") = 1e-8);

  m.def(
      "verify_equivalence",
      [](const Problem& p, int samples, std::uint64_t seed) {
        Json arr = Json::array();
        for (const auto& r : verify_equivalence(p, samples, seed))
          arr.push_back(to_json(r));
        return json_to_py(arr);
      },
      py::arg("problem"), py::arg("samples") = 10, py::arg("seed") = 7);
}
