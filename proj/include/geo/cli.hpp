#pragma once

#include "geo/catalog.hpp"
#include "geo/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace geo::cli {

using Report = nlohmann::ordered_json;

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitParse = 64;

int exit_code_for(ErrorKind kind) noexcept;

/// Parsed config document. Paths are resolved against the config's directory.
struct RunConfig {
  Params map_spec;        // null when absent
  Params potential_spec;  // null when absent
  int dimension = 0;
  Tolerances tol;
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = kDefaultSeed;
  int samples = 20;
  int ode_pairs = 3;
  std::vector<double> weights;  // empty means uniform

  bool has_map() const { return !map_spec.is_null(); }
  bool has_potential() const { return !potential_spec.is_null(); }
};

/// Throws GeoError(parse) on malformed JSON, unknown keys or wrong types.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// GEO_SEED, when set, replaces the config seed. Decimal or 0x-prefixed hex.
void apply_seed_override(RunConfig& config);

/// Headerless CSV, one point per row. Parse errors name the line.
std::vector<Vec> parse_points_csv(const std::string& text, int dim,
                                  const std::string& source = "<csv>");
std::vector<Vec> read_points_csv(const std::string& path, int dim);

/// "1.5,2" -> point; the dimension must match.
Vec parse_point(const std::string& text, int dim, const std::string& flag);

DiffeoMap config_map(const RunConfig& config);
ConvexPotential config_potential(const RunConfig& config);

struct Check {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

class CheckList {
 public:
  /// pass iff deviation <= tolerance; NaN fails.
  void add(const std::string& name, double max_deviation, double tolerance);
  bool all_pass() const;
  std::optional<std::string> first_failure() const;
  Report to_json() const;
  const std::vector<Check>& items() const noexcept { return items_; }

 private:
  std::vector<Check> items_;
};

Report vec_json(const Vec& v);
Report config_echo(const RunConfig& config);

struct CommandResult {
  Report report;
  int exit_code = kExitPass;
  std::string message;  // stderr line on failure
};

/// Attaches checks and status and picks the exit code.
CommandResult finish(Report report, const CheckList& checks);

struct PointArgs {
  std::optional<std::string> x;
  std::optional<std::string> y;
};

CommandResult cmd_mean(const RunConfig& config);
CommandResult cmd_distance(const RunConfig& config, const PointArgs& args);
CommandResult cmd_geodesic(const RunConfig& config, const PointArgs& args, int samples,
                           const std::string& csv_path);
CommandResult cmd_compare(const RunConfig& config, const PointArgs& args);
CommandResult cmd_factorize(const RunConfig& config, const std::string& direction,
                            const std::string& kind);
CommandResult cmd_conjugate(const RunConfig& config, const PointArgs& args, int grid_points);
CommandResult cmd_verify(const RunConfig& config, const std::string& suite);

/// Suites used by cmd_verify; each appends checks and fills `section`.
void suite_dynamics(const RunConfig& config, CheckList& checks, Report& section);
void suite_bridge(const RunConfig& config, CheckList& checks, Report& section);
void suite_bregman(const RunConfig& config, CheckList& checks, Report& section);
void suite_legendre(const RunConfig& config, CheckList& checks, Report& section);

/// Map factoring the config potential: the config map when it factors the
/// Hessian, otherwise the symmetric square-root map.
DiffeoMap factor_map(const RunConfig& config, const ConvexPotential& potential,
                     std::string& source);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace geo::cli
