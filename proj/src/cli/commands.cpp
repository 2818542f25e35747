#include "geo/bregman.hpp"
#include "geo/cli.hpp"
#include "geo/geometry.hpp"
#include "geo/hessian_bridge.hpp"
#include "geo/legendre.hpp"
#include "geo/means.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace geo::cli {

namespace {

Vec require_point(const std::optional<std::string>& text, int dim, const char* flag) {
  if (!text) throw GeoError(ErrorKind::parse, std::string(flag) + " is required");
  return parse_point(*text, dim, flag);
}

Report mat_json(const Mat& m) {
  Report rows = Report::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

Report base_report(const char* command, const RunConfig& config) {
  Report r;
  r["command"] = command;
  r["config"] = config_echo(config);
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GeoError(ErrorKind::invalid_argument, "cannot write " + path);
  out << text;
}

}  // namespace

CommandResult cmd_mean(const RunConfig& config) {
  if (config.input_path.empty()) throw GeoError(ErrorKind::parse, "mean needs an input CSV ('input' or --input)");
  const std::vector<Vec> points = read_points_csv(config.input_path, config.dimension);
  const DiffeoMap map = config_map(config);

  Vec mean;
  if (config.weights.empty()) {
    mean = generalized_mean_nd(map, points);
  } else {
    const DiscreteLaw law{points, config.weights};
    law.validate(map.domain());
    mean = weighted_mean(map, law);
  }
  const MinimalityReport m = verify_mean_minimizes(map, points, mean, config.samples, config.seed);

  Report report = base_report("mean", config);
  report["map"] = map.name();
  report["points"] = static_cast<int>(points.size());
  report["mean"] = vec_json(mean);
  Report dists = Report::array();
  for (const Vec& p : points) dists.push_back(geodesic_distance(map, p, mean));
  report["distances"] = dists;
  report["objective"] = m.objective;
  report["minimality"] = {{"min_margin", m.min_margin},
                          {"trials_run", m.trials_run},
                          {"trials_skipped", m.trials_skipped},
                          {"negative_margins", m.negative_margins}};
  CheckList checks;
  checks.add("mean_minimality", std::max(0.0, -m.min_margin), 0.0);
  return finish(std::move(report), checks);
}

CommandResult cmd_distance(const RunConfig& config, const PointArgs& args) {
  const DiffeoMap map = config_map(config);
  const Vec x = require_point(args.x, config.dimension, "--x");
  const Vec y = require_point(args.y, config.dimension, "--y");
  const double d = geodesic_distance(map, x, y);

  Report report = base_report("distance", config);
  report["map"] = map.name();
  report["x"] = vec_json(x);
  report["y"] = vec_json(y);
  report["distance"] = d;
  report["momenta"] = vec_json(map.forward(y) - map.forward(x));
  CheckList checks;
  checks.add("distance_symmetry", std::abs(d - geodesic_distance(map, y, x)), 1e-12);
  return finish(std::move(report), checks);
}

CommandResult cmd_geodesic(const RunConfig& config, const PointArgs& args, int samples,
                           const std::string& csv_path) {
  const DiffeoMap map = config_map(config);
  const Vec x = require_point(args.x, config.dimension, "--x");
  const Vec y = require_point(args.y, config.dimension, "--y");
  const GeodesicPath path = geodesic_closed_form(map, x, y, samples);

  Report report = base_report("geodesic", config);
  report["map"] = map.name();
  report["x"] = vec_json(x);
  report["y"] = vec_json(y);
  report["distance"] = geodesic_distance(map, x, y);
  report["momenta"] = vec_json(path.momenta);
  Report rows = Report::array();
  std::ostringstream csv;
  csv << std::setprecision(17);
  for (std::size_t s = 0; s < path.points.size(); ++s) {
    Report row = Report::array();
    row.push_back(path.times[s]);
    csv << path.times[s];
    for (Eigen::Index i = 0; i < path.points[s].size(); ++i) {
      row.push_back(path.points[s][i]);
      csv << ',' << path.points[s][i];
    }
    csv << '\n';
    rows.push_back(std::move(row));
  }
  report["path"] = rows;
  if (!csv_path.empty()) write_text(csv_path, csv.str());

  CheckList checks;
  if (samples >= 3) {
    const MomentumReport m = verify_momentum_constancy(path, config.tol);
    checks.add("momentum_constancy", std::max(m.max_rate_deviation, m.endpoint_deviation), 1e-6);
  }
  return finish(std::move(report), checks);
}

CommandResult cmd_compare(const RunConfig& config, const PointArgs& args) {
  const ConvexPotential pot = config_potential(config);
  std::string source;
  const DiffeoMap map = factor_map(config, pot, source);

  std::vector<PointPair> pairs;
  if (args.x || args.y) {
    pairs.emplace_back(require_point(args.x, config.dimension, "--x"),
                       require_point(args.y, config.dimension, "--y"));
  } else {
    const auto pts = sample_points(pot.sample_box(), 2 * config.samples, config.seed);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.emplace_back(pts[i], pts[i + 1]);
  }
  ComparisonOptions opts;
  opts.seed = config.seed;
  const ComparisonVerdict v = compare_divergence_distance(pot, map, pairs, opts);

  Report report = base_report("compare", config);
  report["potential"] = pot.name();
  report["map"] = map.name();
  report["map_source"] = source;
  report["k_sign"] = to_string(v.k.sign);
  report["expected"] = to_string(v.inequality_expected);
  report["pairs_tested"] = v.pairs_tested;
  report["violations"] = static_cast<int>(v.violations.size());
  if (pairs.size() == 1) {
    report["divergence"] = v.pairs[0].lhs;
    report["half_distance_squared"] = v.pairs[0].rhs;
  }
  CheckList checks;
  checks.add("bregman_comparison", v.max_violation, opts.tolerance);
  return finish(std::move(report), checks);
}

CommandResult cmd_factorize(const RunConfig& config, const std::string& direction,
                            const std::string& kind_name) {
  const int n = std::min(config.samples, 50);
  BridgeOptions opts;
  opts.samples = n;
  opts.seed = config.seed;
  Report report = base_report("factorize", config);
  report["direction"] = direction;
  CheckList checks;

  if (direction == "potential_to_map") {
    const ConvexPotential pot = config_potential(config);
    const SquareRootKind kind = square_root_kind_from_string(kind_name);
    const auto pts = sample_points(pot.sample_box(), n, config.seed);
    const FactorizationReport f = check_sqrt_integrability(pot, kind, pts, config.tol, opts.threshold);
    report["potential"] = pot.name();
    report["kind"] = to_string(kind);
    report["min_singular_value"] = f.min_singular_value;
    report["max_inverse_norm"] = f.max_inverse_norm;
    if (pot.eigen_floor()) report["inverse_norm_bound"] = f.inverse_norm_bound;
    checks.add("check_sqrt_integrability", f.curl_violation, opts.threshold);
    checks.add("jacobian_invertible", f.jacobian_invertible_ok ? 0.0 : 1.0, 0.0);
    if (pot.eigen_floor()) {
      checks.add("inverse_norm_bound", std::max(0.0, f.max_inverse_norm - f.inverse_norm_bound), 1e-9);
    }
    if (f.ok()) {
      const DiffeoMap map = potential_to_map(pot, kind, pot.sample_box().center(), config.tol, opts);
      report["map"] = map.name();
      double err = 0.0;
      for (const Vec& x : pts) {
        const Mat J = map.jacobian(x);
        err = std::max(err, (J.transpose() * J - pot.hessian(x)).cwiseAbs().maxCoeff());
      }
      checks.add("factorization", err, 1e-8);
    }
  } else if (direction == "map_to_potential") {
    const DiffeoMap map = config_map(config);
    const auto pts = sample_points(map.sample_box(), n, config.seed);
    const IntegrabilityReport r = check_map_integrability(map, pts, config.tol, opts.threshold);
    report["map"] = map.name();
    checks.add("check_map_integrability", r.condition_violation, opts.threshold);
    checks.add("metric_symmetry", r.symmetry_violation, opts.threshold);
    if (r.ok() && map.domain().is_convex() && map.domain().is_product()) {
      const ConvexPotential pot = map_to_potential(map, map.sample_box().center(), config.tol, opts);
      report["potential"] = pot.name();
      double err = 0.0;
      for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 10); ++i) {
        const Mat J = map.jacobian(pts[i]);
        err = std::max(err, (pot.hessian(pts[i]) - J.transpose() * J).cwiseAbs().maxCoeff());
      }
      checks.add("hessian_roundtrip", err, 1e-3);
    }
  } else {
    throw GeoError(ErrorKind::parse, "unknown direction '" + direction + "'");
  }
  return finish(std::move(report), checks);
}

CommandResult cmd_conjugate(const RunConfig& config, const PointArgs& args, int grid_points) {
  const ConvexPotential pot = config_potential(config);
  const Vec xi = require_point(args.x, config.dimension, "--x");
  const ConjugatePair pair = make_conjugate_pair(pot, config.tol);
  const double value = conjugate(pair, xi);
  const Vec x = pair.primal_point(xi);

  Report report = base_report("conjugate", config);
  report["potential"] = pot.name();
  report["dual_domain"] = pair.dual_domain.describe();
  report["gradient_inverse"] = pair.analytic_inverse ? "analytic" : "newton";
  report["xi"] = vec_json(xi);
  report["conjugate"] = value;
  report["primal_point"] = vec_json(x);
  report["conjugate_hessian"] = mat_json(conjugate_hessian(pair, xi));
  CheckList checks;
  checks.add("fenchel_equality", fenchel_gap(pair, x), 1e-9);
  checks.add("gradient_inverse_identity", check_gradient_inverse(pair, xi), 1e-5);
  if (grid_points > 0) {
    const double grid = conjugate_grid_search(pot, xi, pot.sample_box(), grid_points);
    report["grid_search"] = grid;
    // A grid maximum can never exceed the supremum.
    checks.add("grid_search_bound", std::max(0.0, grid - value), 1e-9);
  }
  return finish(std::move(report), checks);
}

int run(int argc, char** argv) {
  CLI::App app{"geo: generalized means, geodesics and Hessian geometry"};
  app.require_subcommand(1);

  std::string config_path, out_path, input_path, suite = "all", csv_path, direction = "potential_to_map",
                                                 kind = "symmetric_psd";
  std::string x_text, y_text;
  int samples = 11, grid = 0;

  const auto common = [&](CLI::App* sub, bool points) {
    sub->add_option("--config", config_path, "config JSON")->required();
    sub->add_option("--out", out_path, "report path (default stdout)");
    if (points) {
      sub->add_option("--x", x_text, "point, comma separated");
      sub->add_option("--y", y_text, "point, comma separated");
    }
  };
  CLI::App* mean = app.add_subcommand("mean", "generalized mean of the input points");
  common(mean, false);
  mean->add_option("--input", input_path, "points CSV (overrides config)");
  CLI::App* distance = app.add_subcommand("distance", "geodesic distance between --x and --y");
  common(distance, true);
  CLI::App* geodesic = app.add_subcommand("geodesic", "sampled closed-form geodesic");
  common(geodesic, true);
  geodesic->add_option("--samples", samples, "number of samples")->check(CLI::Range(2, 1000000));
  geodesic->add_option("--csv", csv_path, "write t,x1..xn rows here");
  CLI::App* compare = app.add_subcommand("compare", "Bregman divergence vs squared distance");
  common(compare, true);
  CLI::App* factorize = app.add_subcommand("factorize", "Hessian <-> map bridge");
  common(factorize, false);
  factorize->add_option("--direction", direction)->check(CLI::IsMember({"potential_to_map", "map_to_potential"}));
  factorize->add_option("--kind", kind)->check(CLI::IsMember({"symmetric_psd", "symmetric", "cholesky", "cholesky_transpose"}));
  CLI::App* conj = app.add_subcommand("conjugate", "Legendre conjugate at --x");
  common(conj, true);
  conj->add_option("--grid", grid, "grid points per dimension for a brute-force check")->check(CLI::Range(0, 100000));
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify, false);
  verify->add_option("--suite", suite)->check(CLI::IsMember({"dynamics", "bridge", "bregman", "legendre", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    RunConfig config = load_config(config_path);
    apply_seed_override(config);
    if (!input_path.empty()) config.input_path = input_path;
    if (!out_path.empty()) config.output_path = out_path;
    PointArgs args;
    if (!x_text.empty()) args.x = x_text;
    if (!y_text.empty()) args.y = y_text;

    CommandResult result;
    if (*mean) result = cmd_mean(config);
    else if (*distance) result = cmd_distance(config, args);
    else if (*geodesic) result = cmd_geodesic(config, args, samples, csv_path);
    else if (*compare) result = cmd_compare(config, args);
    else if (*factorize) result = cmd_factorize(config, direction, kind);
    else if (*conj) result = cmd_conjugate(config, args, grid);
    else result = cmd_verify(config, suite);

    const std::string body = result.report.dump(2) + "\n";
    if (config.output_path.empty()) std::cout << body;
    else write_text(config.output_path, body);
    if (!result.message.empty()) std::cerr << "geo: " << result.message << "\n";
    return result.exit_code;
  } catch (const GeoError& e) {
    std::cerr << "geo: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "geo: parse error: " << e.what() << "\n";
    return kExitParse;
  }
}

}  // namespace geo::cli
