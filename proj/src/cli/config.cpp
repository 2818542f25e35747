#include "geo/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace geo::cli {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw GeoError(ErrorKind::parse, msg); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& field, double& out) {
  const char* first = field.data();
  const char* last = first + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

// Splits on ',' and parses each field; returns an error message or "".
std::string parse_row(const std::string& line, Vec& out) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string field = trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    double v = 0.0;
    if (!parse_double(field, v)) return "cannot parse '" + field + "' as a finite number";
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  out = Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
  return {};
}

template <typename T>
T get_as(const Params& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_fail(std::string("config key '") + key + "' has the wrong type");
  }
}

void check_spec(const Params& spec, const char* key) {
  if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string()) {
    parse_fail(std::string("config key '") + key + "' must be an object with a string \"name\"");
  }
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return kExitParse;
    case ErrorKind::integrability: return kExitVerificationFailed;
    default: return kExitPrecondition;
  }
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  Params doc;
  try {
    doc = Params::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("config must be a JSON object");

  static const std::set<std::string> known = {"map", "potential", "dimension", "tolerances", "input",
                                              "output", "seed", "samples", "ode_pairs", "weights"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) parse_fail("unknown config key '" + key + "'");
  }

  RunConfig c;
  if (!doc.contains("dimension")) parse_fail("config needs 'dimension'");
  c.dimension = get_as<int>(doc, "dimension");
  if (c.dimension < 1) parse_fail("'dimension' must be >= 1");

  if (doc.contains("map")) {
    check_spec(doc["map"], "map");
    c.map_spec = doc["map"];
  }
  if (doc.contains("potential")) {
    check_spec(doc["potential"], "potential");
    c.potential_spec = doc["potential"];
  }

  if (doc.contains("tolerances")) {
    const Params& t = doc["tolerances"];
    if (!t.is_object()) parse_fail("'tolerances' must be an object");
    for (const auto& [key, _] : t.items()) {
      if (key == "fd_step") c.tol.fd_step = get_as<double>(t, "fd_step");
      else if (key == "newton_tol") c.tol.newton_tol = get_as<double>(t, "newton_tol");
      else if (key == "newton_max_iter") c.tol.newton_max_iter = get_as<int>(t, "newton_max_iter");
      else if (key == "ode_steps") c.tol.ode_steps = get_as<int>(t, "ode_steps");
      else if (key == "quad_points") c.tol.quad_points = get_as<int>(t, "quad_points");
      else if (key == "spd_eig_floor") c.tol.spd_eig_floor = get_as<double>(t, "spd_eig_floor");
      else parse_fail("unknown tolerance '" + key + "'");
    }
  }
  c.tol.validate();

  const std::filesystem::path base(base_dir);
  if (doc.contains("input")) c.input_path = (base / get_as<std::string>(doc, "input")).string();
  if (doc.contains("output")) c.output_path = (base / get_as<std::string>(doc, "output")).string();
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed");
  if (doc.contains("samples")) c.samples = get_as<int>(doc, "samples");
  if (doc.contains("ode_pairs")) c.ode_pairs = get_as<int>(doc, "ode_pairs");
  if (c.samples < 1 || c.ode_pairs < 0) parse_fail("'samples' must be >= 1 and 'ode_pairs' >= 0");
  if (doc.contains("weights")) c.weights = get_as<std::vector<double>>(doc, "weights");
  return c;
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  try {
    return parse_config(text, dir);
  } catch (const GeoError& e) {
    throw GeoError(e.kind(), path + ": " + e.what());
  }
}

void apply_seed_override(RunConfig& config) {
  const char* env = std::getenv("GEO_SEED");
  if (env == nullptr || *env == '\0') return;
  const std::string s = trim(env);
  std::uint64_t value = 0;
  const bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
  const char* first = s.data() + (hex ? 2 : 0);
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value, hex ? 16 : 10);
  if (ec != std::errc() || ptr != last || first == last) parse_fail("GEO_SEED is not an integer: '" + s + "'");
  config.seed = value;
}

std::vector<Vec> parse_points_csv(const std::string& text, int dim, const std::string& source) {
  std::vector<Vec> points;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Vec p;
    const std::string err = parse_row(line, p);
    if (!err.empty()) parse_fail(source + ":" + std::to_string(lineno) + ": " + err);
    if (p.size() != dim) {
      parse_fail(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                 " values, got " + std::to_string(p.size()));
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) parse_fail(source + ": no points");
  return points;
}

std::vector<Vec> read_points_csv(const std::string& path, int dim) {
  return parse_points_csv(read_file(path), dim, path);
}

Vec parse_point(const std::string& text, int dim, const std::string& flag) {
  Vec p;
  const std::string err = parse_row(text, p);
  if (!err.empty()) parse_fail(flag + ": " + err);
  if (p.size() != dim) {
    parse_fail(flag + ": expected " + std::to_string(dim) + " values, got " + std::to_string(p.size()));
  }
  return p;
}

DiffeoMap config_map(const RunConfig& config) {
  if (!config.has_map()) throw GeoError(ErrorKind::invalid_argument, "config has no 'map'");
  return map_from_spec(config.map_spec, config.dimension);
}

ConvexPotential config_potential(const RunConfig& config) {
  if (!config.has_potential()) throw GeoError(ErrorKind::invalid_argument, "config has no 'potential'");
  return potential_from_spec(config.potential_spec, config.dimension);
}

void CheckList::add(const std::string& name, double max_deviation, double tolerance) {
  items_.push_back({name, max_deviation, tolerance, max_deviation <= tolerance});
}

bool CheckList::all_pass() const {
  for (const Check& c : items_) {
    if (!c.pass) return false;
  }
  return true;
}

std::optional<std::string> CheckList::first_failure() const {
  for (const Check& c : items_) {
    if (!c.pass) return c.name;
  }
  return std::nullopt;
}

Report CheckList::to_json() const {
  Report arr = Report::array();
  for (const Check& c : items_) {
    Report o;
    o["name"] = c.name;
    o["max_deviation"] = c.max_deviation;
    o["tolerance"] = c.tolerance;
    o["pass"] = c.pass;
    arr.push_back(std::move(o));
  }
  return arr;
}

Report vec_json(const Vec& v) {
  Report arr = Report::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Report config_echo(const RunConfig& config) {
  Report o;
  o["dimension"] = config.dimension;
  if (config.has_map()) o["map"] = Report::parse(config.map_spec.dump());
  if (config.has_potential()) o["potential"] = Report::parse(config.potential_spec.dump());
  o["seed"] = config.seed;
  o["samples"] = config.samples;
  return o;
}

CommandResult finish(Report report, const CheckList& checks) {
  CommandResult r;
  report["checks"] = checks.to_json();
  const bool ok = checks.all_pass();
  report["status"] = ok ? "pass" : "fail";
  r.report = std::move(report);
  if (!ok) {
    r.exit_code = kExitVerificationFailed;
    r.message = "verification failed: " + *checks.first_failure();
  }
  return r;
}

}  // namespace geo::cli
