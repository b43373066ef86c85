#ifndef LAYERCALC_RUNNER_HPP
#define LAYERCALC_RUNNER_HPP

#include <filesystem>
#include <map>
#include <optional>

#include "layercalc/serialize.hpp"

namespace layercalc {

/// Named builtin instances.
std::vector<std::pair<std::string, InstanceDescriptor>> list_builtin_instances();
InstanceDescriptor builtin_instance(const std::string& name);

/// Builds the Problem named by a descriptor, resolving presets.
Problem build_instance(const InstanceDescriptor& d);
/// The descriptor with presets expanded to their definition.
InstanceDescriptor resolve_instance(const InstanceDescriptor& d);

struct SolveRequest {
  enum class Kind { dirichlet, neumann } kind = Kind::dirichlet;
  enum class Method { direct, layers } method = Method::direct;
  Side side = Side::omega;
  Vector data;
};

/// A verification/solver run: which instance, which suites, which solves,
/// with tolerance overrides and sampling controls.
struct RunConfig {
  InstanceDescriptor instance;
  std::vector<std::string> suites;  // subset of the known suite names
  std::vector<SolveRequest> solves;
  std::map<std::string, double> tolerances;
  std::optional<std::filesystem::path> out_dir;  // default for --out
  int samples_identities = 100;
  int samples_bounds = 100;
  int samples_equivalence = 10;
  std::uint64_t seed = 2024;

  double tolerance(const std::string& name) const;
  static RunConfig from_json(const Json& j);
  static RunConfig from_file(const std::filesystem::path& path);
};

/// Known tolerance names with their defaults.
const std::map<std::string, double>& default_tolerances();

struct RunResult {
  Json report;
  std::string csv;
  bool all_pass = false;
};

/// Executes the requested suites and solves. Individual solve failures
/// (singular operators, incompatible data) are recorded in the report, not
/// thrown; configuration errors throw ConfigError.
RunResult run_suites(const RunConfig& config, bool with_timestamp = true);
RunResult run_solves(const RunConfig& config, bool with_timestamp = true);

/// Singular values of both boundary operators.
Json spectrum_report(const RunConfig& config, bool with_timestamp = true);

struct CliOptions {
  std::string command;  // verify | solve | spectrum | presets
  std::filesystem::path config_path;
  std::filesystem::path out_dir;  // empty: config's out, else the cwd
  bool no_timestamp = false;
  std::vector<std::string> tolerance_overrides;  // name=value
};

/// Full CLI behavior behind the executable: returns the process exit code
/// (0 pass, 1 configuration error, 2 check failure) and writes reports
/// under out_dir.
int run_cli(const CliOptions& options);

}  // namespace layercalc

#endif
