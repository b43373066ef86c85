#include "layercalc/runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace layercalc {

std::vector<std::pair<std::string, InstanceDescriptor>> list_builtin_instances() {
  std::vector<std::pair<std::string, InstanceDescriptor>> out;
  {
    InstanceDescriptor d;
    d.kind = InstanceDescriptor::Kind::fem;
    d.fem = FemConfig{};  // order 1, box [0,1], omega (1/4, 3/4), 8 elements
    out.emplace_back("laplace-1d-quarter", d);
  }
  {
    InstanceDescriptor d;
    d.kind = InstanceDescriptor::Kind::fem;
    d.fem = FemConfig{};
    d.fem.order = 2;
    d.fem.trace_convention = TraceConvention::whitney;
    out.emplace_back("hermite-1d-m2", d);
  }
  {
    InstanceDescriptor d;
    d.kind = InstanceDescriptor::Kind::fem;
    d.fem = FemConfig{};
    d.fem.dimension = 2;
    out.emplace_back("square-2d-m1", d);
  }
  {
    InstanceDescriptor d;
    d.kind = InstanceDescriptor::Kind::abstract;
    d.seed = 0;
    d.dims = AbstractDims{4, 4, 2, 2};
    out.emplace_back("abstract-small", d);
  }
  return out;
}

InstanceDescriptor builtin_instance(const std::string& name) {
  for (const auto& [n, d] : list_builtin_instances())
    if (n == name) return d;
  throw ConfigError("unknown preset: " + name);
}

InstanceDescriptor resolve_instance(const InstanceDescriptor& d) {
  if (d.kind != InstanceDescriptor::Kind::preset) return d;
  return builtin_instance(d.preset);
}

Problem build_instance(const InstanceDescriptor& d) {
  const InstanceDescriptor r = resolve_instance(d);
  if (r.kind == InstanceDescriptor::Kind::abstract)
    return make_abstract(r.seed, r.dims);
  return make_fem(r.fem);
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"lambda_min", 1e-6}, {"locality", 1e-12}, {"identity", 1e-9},
      {"adjoint", 1e-10},   {"bound_slack", 1e-9}, {"invert", 1e-8},
      {"solve", 1e-9}};
  return defaults;
}

double RunConfig::tolerance(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw ConfigError("configuration must be an object");
    c.instance = instance_from_json(j.at("instance"));
    if (j.contains("suites"))
      for (const Json& s : j.at("suites")) {
        const std::string name = s.get<std::string>();
        if (name != "conditions" && name != "identities" && name != "bounds" &&
            name != "equivalence")
          throw ConfigError("unknown suite: " + name);
        c.suites.push_back(name);
      }
    if (j.contains("solves"))
      for (const Json& s : j.at("solves")) {
        SolveRequest req;
        const std::string kind = s.at("problem").get<std::string>();
        if (kind == "dirichlet")
          req.kind = SolveRequest::Kind::dirichlet;
        else if (kind == "neumann")
          req.kind = SolveRequest::Kind::neumann;
        else
          throw ConfigError("unknown problem kind: " + kind);
        const std::string method = s.at("method").get<std::string>();
        if (method == "direct")
          req.method = SolveRequest::Method::direct;
        else if (method == "layers")
          req.method = SolveRequest::Method::layers;
        else
          throw ConfigError("unknown method: " + method);
        const std::string side = s.at("side").get<std::string>();
        if (side == "omega")
          req.side = Side::omega;
        else if (side == "complement")
          req.side = Side::complement;
        else
          throw ConfigError("unknown side: " + side);
        req.data = vector_from_json(s.at("data"));
        c.solves.push_back(std::move(req));
      }
    if (j.contains("tolerances")) {
      for (const auto& [name, value] : j.at("tolerances").items()) {
        if (default_tolerances().find(name) == default_tolerances().end())
          throw ConfigError("unknown tolerance: " + name);
        const double v = value.get<double>();
        if (!(v > 0)) throw ConfigError("tolerances must be positive: " + name);
        c.tolerances[name] = v;
      }
    }
    if (j.contains("samples")) {
      const Json& s = j.at("samples");
      if (s.contains("identities")) c.samples_identities = s.at("identities").get<int>();
      if (s.contains("bounds")) c.samples_bounds = s.at("bounds").get<int>();
      if (s.contains("equivalence"))
        c.samples_equivalence = s.at("equivalence").get<int>();
      if (c.samples_identities < 1 || c.samples_bounds < 1 ||
          c.samples_equivalence < 1)
        throw ConfigError("sample counts must be positive");
    }
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad configuration: ") + e.what());
  }
  if (c.suites.empty() && c.solves.empty())
    throw ConfigError("configuration requests no suites and no solves");
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

namespace {

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

Json report_skeleton(const RunConfig& config, bool with_timestamp) {
  Json report;
  report["schema_version"] = 1;
  if (with_timestamp) report["timestamp"] = timestamp_now();
  report["instance"] = instance_to_json(resolve_instance(config.instance));
  return report;
}

void append_csv(std::ostringstream& csv, const std::string& suite,
                const ResidualReport& r, int input) {
  csv << suite << ',' << r.identity << ',' << input << ',' << r.residual << ','
      << r.scale << ',' << (r.applicable ? "yes" : "no") << ','
      << (r.pass ? "pass" : "fail") << '\n';
}

struct IdentityBatch {
  std::vector<ResidualReport> reports;
  bool pass = true;
};

IdentityBatch run_identities(const Problem& p, const Problem& adj, int samples,
                             std::uint64_t seed, double tol, double tol_adj,
                             std::vector<int>* inputs) {
  // Inputs are drawn sequentially so the batch is deterministic, then the
  // checks run in parallel.
  struct Input {
    Vector f, phi;
    Functional g, gamma;
    InteriorElement u;
  };
  Rng rng(seed);
  std::vector<Input> in(static_cast<size_t>(samples));
  for (auto& x : in) {
    x.f = random_vector(rng, p.dirichlet_space(2).dim());
    x.phi = random_vector(rng, p.dirichlet_space(1).dim());
    x.g = Functional(random_vector(rng, p.neumann_space(2).dim()));
    x.gamma = Functional(random_vector(rng, p.neumann_space(1).dim()));
  }
  for (size_t i = 0; i < in.size(); ++i) {
    const Side side = i % 2 == 0 ? Side::omega : Side::complement;
    if ((i / 2) % 2 == 0) {
      const Vector field = single_layer(p, Functional(random_vector(
                                               rng, p.neumann_space(2).dim())));
      in[i].u = InteriorElement(side, p.restriction(2, side) * field);
    } else {
      in[i].u =
          double_layer(p, side, random_vector(rng, p.dirichlet_space(2).dim()));
    }
  }

  std::vector<std::vector<ResidualReport>> results(in.size());
  parallel_for(static_cast<Index>(in.size()), [&](Index i) {
    const Input& x = in[static_cast<size_t>(i)];
    std::vector<ResidualReport> r = check_green(p, x.u, tol);
    for (auto& rep : check_jump(p, x.f, x.g, tol)) r.push_back(std::move(rep));
    for (auto& rep : check_adjoint(p, adj, x.f, x.phi, x.g, x.gamma, tol_adj))
      r.push_back(std::move(rep));
    results[static_cast<size_t>(i)] = std::move(r);
  });

  IdentityBatch batch;
  for (size_t i = 0; i < results.size(); ++i)
    for (auto& r : results[i]) {
      batch.pass = batch.pass && r.pass;
      if (inputs) inputs->push_back(static_cast<int>(i));
      batch.reports.push_back(std::move(r));
    }
  return batch;
}

Json solve_outcome(const Problem& p, const SolveRequest& req, double tol_invert) {
  Json out;
  out["problem"] =
      req.kind == SolveRequest::Kind::dirichlet ? "dirichlet" : "neumann";
  out["method"] = req.method == SolveRequest::Method::direct ? "direct" : "layers";
  out["side"] = side_name(req.side);
  try {
    if (req.kind == SolveRequest::Kind::dirichlet) {
      if (req.method == SolveRequest::Method::direct) {
        const DirichletSolution sol = solve_dirichlet_direct(p, req.side, req.data);
        out["status"] = "ok";
        out["solution"] = vector_to_json(sol.u.coeffs);
        out["stability"] = sol.stability;
        out["residual"] = sol.trace_residual;
      } else {
        const LayerSolution sol =
            solve_dirichlet_via_layers(p, req.side, req.data, tol_invert);
        out["status"] = "ok";
        out["solution"] = vector_to_json(sol.u.coeffs);
        out["density"] = vector_to_json(sol.density);
        out["stability"] = sol.stability;
        out["residual"] = sol.data_residual;
      }
    } else {
      const Functional g(req.data);
      if (req.method == SolveRequest::Method::direct) {
        const NeumannSolution sol = solve_neumann_direct(p, req.side, g);
        out["status"] = "ok";
        out["solution"] = vector_to_json(sol.u.coeffs);
        out["kernel_dim"] = sol.kernel_dim;
        out["residual"] = sol.defect;
      } else {
        const LayerSolution sol =
            solve_neumann_via_layers(p, req.side, g, tol_invert);
        out["status"] = "ok";
        out["solution"] = vector_to_json(sol.u.coeffs);
        out["density"] = vector_to_json(sol.density);
        out["stability"] = sol.stability;
        out["residual"] = sol.data_residual;
      }
    }
  } catch (const NotInvertible& e) {
    out["status"] = "not_invertible";
    out["detail"] = e.what();
    out["sigma_min"] = e.sigma_min;
    out["sigma_max"] = e.sigma_max;
  } catch (const SingularSystem& e) {
    out["status"] = "singular";
    out["detail"] = e.what();
    out["kernel_dim"] = static_cast<int>(e.kernel.cols());
  } catch (const InconsistentSystem& e) {
    out["status"] = "inconsistent";
    out["detail"] = e.what();
    out["defect"] = e.defect;
  } catch (const Error& e) {
    out["status"] = "error";
    out["detail"] = e.what();
  }
  return out;
}

}  // namespace

RunResult run_suites(const RunConfig& config, bool with_timestamp) {
  const Problem p = build_instance(config.instance);
  RunResult result;
  result.report = report_skeleton(config, with_timestamp);
  result.report["lambda"] = p.lambda();
  result.report["norm_b"] = p.norm_b();
  Json suites = Json::object();
  std::ostringstream csv;
  csv << "suite,identity,input,residual,scale,applicable,pass\n";
  bool all_pass = true;

  for (const std::string& suite : config.suites) {
    if (suite == "conditions") {
      const ConditionsReport r = verify_conditions(
          p, config.tolerance("lambda_min"), config.tolerance("locality"));
      suites["conditions"] = to_json(r);
      all_pass = all_pass && r.pass();
      ResidualReport lambda_row = ResidualReport::judged(
          "coercivity", r.lambda >= r.lambda_tol ? 0.0 : r.lambda_tol - r.lambda,
          1.0, r.lambda_tol);
      lambda_row.pass = r.coercive;
      append_csv(csv, "conditions", lambda_row, 0);
      ResidualReport locality_row = ResidualReport::judged(
          "locality", r.locality_residual, 1.0, r.locality_tol);
      append_csv(csv, "conditions", locality_row, 0);
    } else if (suite == "identities") {
      const Problem adj = adjoint_problem(p);
      std::vector<int> inputs;
      const IdentityBatch batch = run_identities(
          p, adj, config.samples_identities, config.seed,
          config.tolerance("identity"), config.tolerance("adjoint"), &inputs);
      Json checks = Json::array();
      for (size_t i = 0; i < batch.reports.size(); ++i) {
        Json row = to_json(batch.reports[i]);
        row["input"] = inputs[i];
        checks.push_back(std::move(row));
        append_csv(csv, "identities", batch.reports[i], inputs[i]);
      }
      suites["identities"] = Json{{"checks", std::move(checks)}, {"pass", batch.pass}};
      all_pass = all_pass && batch.pass;
    } else if (suite == "bounds") {
      const auto reports = check_bounds(p, config.samples_bounds, config.seed,
                                        config.tolerance("bound_slack"));
      bool pass = true;
      double sharpest = 0.0;
      Json checks = Json::array();
      for (size_t i = 0; i < reports.size(); ++i) {
        pass = pass && reports[i].pass;
        if (reports[i].scale > 0)
          sharpest = std::max(sharpest, reports[i].residual / reports[i].scale);
        Json row = to_json(reports[i]);
        row["input"] = static_cast<int>(i / 3);
        checks.push_back(std::move(row));
        append_csv(csv, "bounds", reports[i], static_cast<int>(i / 3));
      }
      suites["bounds"] = Json{{"checks", std::move(checks)},
                              {"sharpest_ratio", sharpest},
                              {"pass", pass}};
      all_pass = all_pass && pass;
    } else if (suite == "equivalence") {
      const auto reports =
          verify_equivalence(p, config.samples_equivalence, config.seed);
      bool pass = true;
      Json rows = Json::array();
      for (const auto& r : reports) {
        pass = pass && r.consistent;
        rows.push_back(to_json(r));
      }
      suites["equivalence"] = Json{{"reports", std::move(rows)}, {"pass", pass}};
      all_pass = all_pass && pass;
    }
  }

  result.report["suites"] = std::move(suites);
  result.report["pass"] = all_pass;
  result.csv = csv.str();
  result.all_pass = all_pass;
  return result;
}

RunResult run_solves(const RunConfig& config, bool with_timestamp) {
  const Problem p = build_instance(config.instance);
  RunResult result;
  result.report = report_skeleton(config, with_timestamp);
  result.report["lambda"] = p.lambda();
  Json solves = Json::array();
  bool all_pass = true;
  for (const SolveRequest& req : config.solves) {
    Json outcome = solve_outcome(p, req, config.tolerance("invert"));
    all_pass = all_pass && outcome["status"] == "ok";
    solves.push_back(std::move(outcome));
  }
  result.report["solves"] = std::move(solves);
  result.report["pass"] = all_pass;
  result.all_pass = all_pass;
  std::ostringstream csv;
  csv << "suite,identity,input,residual,scale,applicable,pass\n";
  result.csv = csv.str();
  return result;
}

Json spectrum_report(const RunConfig& config, bool with_timestamp) {
  const Problem p = build_instance(config.instance);
  Json report = report_skeleton(config, with_timestamp);
  report["lambda"] = p.lambda();
  Json ops = Json::array();
  for (const BoundaryKind kind : {BoundaryKind::single_layer_trace,
                                  BoundaryKind::double_layer_neumann}) {
    const BoundaryOperator op = boundary_operator(p, kind);
    Json row;
    row["kind"] = boundary_kind_name(kind);
    Json sv = Json::array();
    for (Index i = 0; i < op.singular_values.size(); ++i)
      sv.push_back(op.singular_values(i));
    row["singular_values"] = std::move(sv);
    ops.push_back(std::move(row));
  }
  report["operators"] = std::move(ops);
  report["pass"] = true;
  return report;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

}  // namespace

int run_cli(const CliOptions& options) {
  try {
    if (options.command == "presets") {
      Json out = Json::array();
      for (const auto& [name, d] : list_builtin_instances()) {
        Json row;
        row["name"] = name;
        row["instance"] = instance_to_json(d);
        out.push_back(std::move(row));
      }
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    RunConfig config = RunConfig::from_file(options.config_path);
    for (const std::string& override_text : options.tolerance_overrides) {
      const auto eq = override_text.find('=');
      if (eq == std::string::npos)
        throw ConfigError("tolerance override must be name=value");
      const std::string name = override_text.substr(0, eq);
      if (default_tolerances().find(name) == default_tolerances().end())
        throw ConfigError("unknown tolerance: " + name);
      const double value = std::stod(override_text.substr(eq + 1));
      if (!(value > 0)) throw ConfigError("tolerances must be positive");
      config.tolerances[name] = value;
    }

    const std::filesystem::path out_dir =
        !options.out_dir.empty() ? options.out_dir
                                 : config.out_dir.value_or(".");
    std::filesystem::create_directories(out_dir);
    if (options.command == "verify") {
      if (config.suites.empty())
        throw ConfigError("verify: configuration requests no suites");
      const RunResult result = run_suites(config, !options.no_timestamp);
      write_file(out_dir / "report.json", result.report.dump(2) + "\n");
      write_file(out_dir / "report.csv", result.csv);
      return result.all_pass ? 0 : 2;
    }
    if (options.command == "solve") {
      if (config.solves.empty())
        throw ConfigError("solve: configuration requests no solves");
      const RunResult result = run_solves(config, !options.no_timestamp);
      write_file(out_dir / "report.json", result.report.dump(2) + "\n");
      return result.all_pass ? 0 : 2;
    }
    if (options.command == "spectrum") {
      const Json report = spectrum_report(config, !options.no_timestamp);
      write_file(out_dir / "report.json", report.dump(2) + "\n");
      return 0;
    }
    throw ConfigError("unknown command: " + options.command);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace layercalc
