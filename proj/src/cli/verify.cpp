#include "geo/bregman.hpp"
#include "geo/cli.hpp"
#include "geo/geometry.hpp"
#include "geo/hessian_bridge.hpp"
#include "geo/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace geo::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<PointPair> random_pairs(const SampleBox& box, int count, std::uint64_t seed) {
  const std::vector<Vec> pts = sample_points(box, 2 * count, seed);
  std::vector<PointPair> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    pairs.emplace_back(pts[static_cast<std::size_t>(2 * i)], pts[static_cast<std::size_t>(2 * i + 1)]);
  }
  return pairs;
}

std::vector<Vec> path_points(const HamiltonianTrajectory& h) {
  std::vector<Vec> out;
  out.reserve(h.states.size());
  for (const PhaseState& s : h.states) out.push_back(s.x);
  return out;
}

double factorization_error(const ConvexPotential& potential, const DiffeoMap& map,
                           const std::vector<Vec>& pts) {
  double err = 0.0;
  for (const Vec& x : pts) {
    if (!map.domain().contains(x)) return kInf;
    const Mat J = map.jacobian(x);
    err = std::max(err, (potential.hessian(x) - J.transpose() * J).cwiseAbs().maxCoeff());
  }
  return err;
}

}  // namespace

DiffeoMap factor_map(const RunConfig& config, const ConvexPotential& potential, std::string& source) {
  if (config.has_map()) {
    DiffeoMap map = config_map(config);
    const auto pts = sample_points(potential.sample_box(), 20, config.seed);
    if (factorization_error(potential, map, pts) <= 1e-4) {
      source = "config";
      return map;
    }
  }
  source = "sqrt_map";
  return potential_to_map(potential, SquareRootKind::symmetric_psd, potential.sample_box().center(),
                          config.tol);
}

void suite_dynamics(const RunConfig& config, CheckList& checks, Report& section) {
  const DiffeoMap map = config_map(config);
  const Tolerances& tol = config.tol;
  const auto pairs = random_pairs(map.sample_box(), config.samples, config.seed);

  double arc = 0.0, speed = 0.0, flow = 0.0, predictor = 0.0;
  int skipped = 0;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> half(0.0, 0.5);
  for (const auto& [x, y] : pairs) {
    const double t = half(rng);
    const double s = half(rng);
    try {
      const ArclengthReport a = closed_form_arclength(map, x, y, tol.quad_points);
      arc = std::max(arc, std::abs(a.arclength - a.distance));
      speed = std::max(speed, a.speed_spread());
      const Vec xi = map.forward(y) - map.forward(x);
      flow = std::max(flow, flow_semigroup_check(map, x, xi, t, s).deviation);
      predictor = std::max(predictor, kernel_predictor_check(map, x, xi, t, s).deviation);
    } catch (const GeoError& e) {
      if (e.kind() != ErrorKind::domain) throw;
      ++skipped;
    }
  }
  checks.add("arclength_vs_distance", arc, 1e-6);
  checks.add("speed_constancy", speed, 1e-6);
  checks.add("flow_semigroup", flow, 1e-9);
  checks.add("kernel_predictor", predictor, 1e-9);

  double el_cf = 0.0, ham_cf = 0.0, el_ham = 0.0, drift = 0.0, momentum = 0.0;
  const int ode_pairs = std::min<int>(config.ode_pairs, static_cast<int>(pairs.size()));
  for (int k = 0; k < ode_pairs; ++k) {
    const auto& [x, y] = pairs[static_cast<std::size_t>(k)];
    const GeodesicPath closed = geodesic_closed_form(map, x, y, tol.ode_steps + 1);
    const GeodesicPath el = geodesic_euler_lagrange(map, x, y, tol);
    const HamiltonianTrajectory ham = hamiltonian_flow(map, {x, initial_momentum(map, x, y)}, {0.0, 1.0}, tol);
    if (!el.complete || !ham.complete) {
      el_cf = ham_cf = el_ham = kInf;
      continue;
    }
    const std::vector<Vec> hp = path_points(ham);
    el_cf = std::max(el_cf, sup_distance(closed.times, closed.points, el.times, el.points));
    ham_cf = std::max(ham_cf, sup_distance(closed.times, closed.points, ham.times, hp));
    el_ham = std::max(el_ham, sup_distance(el.times, el.points, ham.times, hp));
    drift = std::max(drift, ham.energy_drift());
    const MomentumReport m = verify_momentum_constancy(el, tol);
    momentum = std::max({momentum, m.max_rate_deviation, m.endpoint_deviation});
  }
  if (ode_pairs > 0) {
    checks.add("euler_lagrange_vs_closed_form", el_cf, 1e-4);
    checks.add("hamiltonian_vs_closed_form", ham_cf, 1e-4);
    checks.add("euler_lagrange_vs_hamiltonian", el_ham, 1e-4);
    checks.add("energy_drift", drift, 1e-7);
    checks.add("momentum_constancy", momentum, 1e-4);
  }
  const BracketReport brackets = check_canonical(map, map.sample_box().center(), tol, 10, config.seed);
  checks.add("canonical_brackets", brackets.max_deviation(), 1e-4);

  section["map"] = map.name();
  section["pairs"] = static_cast<int>(pairs.size());
  section["pairs_skipped"] = skipped;
  section["ode_pairs"] = ode_pairs;
  section["bracket_phase_points"] = brackets.phase_points;
}

void suite_bridge(const RunConfig& config, CheckList& checks, Report& section) {
  const Tolerances& tol = config.tol;
  const int n = std::min(config.samples, 50);
  BridgeOptions opts;
  opts.samples = n;
  opts.seed = config.seed;
  if (config.has_map()) {
    const DiffeoMap map = config_map(config);
    const auto pts = sample_points(map.sample_box(), n, config.seed);
    const IntegrabilityReport r = check_map_integrability(map, pts, tol, opts.threshold);
    checks.add("check_map_integrability", r.condition_violation, opts.threshold);
    checks.add("metric_symmetry", r.symmetry_violation, opts.threshold);
    Report m;
    m["map"] = map.name();
    m["samples"] = n;
    if (r.ok() && map.domain().is_convex() && map.domain().is_product()) {
      const ConvexPotential pot = map_to_potential(map, map.sample_box().center(), tol, opts);
      double err = 0.0;
      for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 10); ++i) {
        const Mat J = map.jacobian(pts[i]);
        err = std::max(err, (pot.hessian(pts[i]) - J.transpose() * J).cwiseAbs().maxCoeff());
      }
      checks.add("map_to_potential_hessian", err, 1e-3);
      m["potential"] = pot.name();
    }
    section["map_to_potential"] = m;
  }
  if (config.has_potential()) {
    const ConvexPotential pot = config_potential(config);
    const auto pts = sample_points(pot.sample_box(), n, config.seed);
    Report p;
    p["potential"] = pot.name();
    for (SquareRootKind kind : {SquareRootKind::symmetric_psd, SquareRootKind::cholesky_transpose}) {
      const FactorizationReport f = check_sqrt_integrability(pot, kind, pts, tol, opts.threshold);
      const std::string k = to_string(kind);
      checks.add("sqrt_curl_" + k, f.curl_violation, opts.threshold);
      checks.add("sqrt_invertible_" + k, f.jacobian_invertible_ok ? 0.0 : 1.0, 0.0);
      if (pot.eigen_floor()) {
        checks.add("inverse_norm_bound_" + k, std::max(0.0, f.max_inverse_norm - f.inverse_norm_bound), 1e-9);
      }
      p[k] = {{"min_singular_value", f.min_singular_value}, {"max_inverse_norm", f.max_inverse_norm}};
    }
    const DiffeoMap map = potential_to_map(pot, SquareRootKind::symmetric_psd, pot.sample_box().center(), tol, opts);
    const ConvexPotential back = map_to_potential(map, pot.sample_box().center(), tol, opts);
    double err = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 10); ++i) {
      err = std::max(err, (back.hessian(pts[i]) - pot.hessian(pts[i])).cwiseAbs().maxCoeff());
    }
    checks.add("hessian_roundtrip", err, 1e-3);
    section["potential_to_map"] = p;
  }
  if (!config.has_map() && !config.has_potential()) {
    throw GeoError(ErrorKind::invalid_argument, "bridge suite needs 'map' or 'potential'");
  }
}

void suite_bregman(const RunConfig& config, CheckList& checks, Report& section) {
  const ConvexPotential pot = config_potential(config);
  std::string source;
  const DiffeoMap map = factor_map(config, pot, source);
  const auto pairs = random_pairs(pot.sample_box(), config.samples, config.seed);

  ComparisonOptions opts;
  opts.seed = config.seed;
  const ComparisonVerdict v = compare_divergence_distance(pot, map, pairs, opts);
  checks.add("bregman_comparison", v.max_violation, opts.tolerance);
  if (v.inequality_expected == ExpectedInequality::delta_eq_half_d2) {
    double eq = 0.0;
    for (const PairComparison& c : v.pairs) eq = std::max(eq, std::abs(c.lhs - c.rhs));
    checks.add("bregman_equality", eq, 1e-12);
  }

  double neg = 0.0, taylor = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    neg = std::max(neg, -bregman_divergence(pot, x, y));
    if (i < 20) taylor = std::max(taylor, taylor_identity_check(pot, x, y, 64).residual);
  }
  checks.add("divergence_nonnegative", std::max(0.0, neg), 1e-12);
  checks.add("taylor_identity", taylor, 1e-8);

  // Same comparison with each pair sorted componentwise (y >= x); reported only.
  std::vector<PointPair> ordered;
  for (const auto& [x, y] : pairs) ordered.emplace_back(x.cwiseMin(y), x.cwiseMax(y));
  const ComparisonVerdict vo = compare_divergence_distance(pot, map, ordered, opts);

  section["potential"] = pot.name();
  section["map"] = map.name();
  section["map_source"] = source;
  section["k_sign"] = to_string(v.k.sign);
  section["k_min"] = v.k.k_min;
  section["k_max"] = v.k.k_max;
  section["expected"] = to_string(v.inequality_expected);
  section["pairs_tested"] = v.pairs_tested;
  section["violations"] = static_cast<int>(v.violations.size());
  section["ordered_pair_violations"] = static_cast<int>(vo.violations.size());
}

void suite_legendre(const RunConfig& config, CheckList& checks, Report& section) {
  const ConvexPotential pot = config_potential(config);
  const Tolerances& tol = config.tol;
  const ConjugatePair pair = make_conjugate_pair(pot, tol);
  const ConjugatePair newton = make_conjugate_pair(pot, tol, true);
  const auto dual_pts = sample_points(pair.dual_box, config.samples, config.seed);

  double inverse_err = 0.0, product_err = 0.0, agree = 0.0;
  for (const Vec& xi : dual_pts) {
    inverse_err = std::max(inverse_err, check_gradient_inverse(pair, xi));
    product_err = std::max(product_err, check_hessian_product(pair, xi));
    agree = std::max(agree, (newton.primal_point(xi) - pair.primal_point(xi)).cwiseAbs().maxCoeff());
  }
  checks.add("gradient_inverse_identity", inverse_err, 1e-5);
  checks.add("hessian_product_identity", product_err, 1e-5);
  if (pair.analytic_inverse) checks.add("newton_inverse_agreement", agree, 1e-8);

  std::string source;
  const DiffeoMap map = factor_map(config, pot, source);
  const auto pairs = random_pairs(pot.sample_box(), config.samples, config.seed + 1);
  double fenchel = 0.0, dist = 0.0;
  for (const auto& [x, y] : pairs) {
    fenchel = std::max(fenchel, fenchel_gap(pair, x));
    dist = std::max(dist, dual_distance_check(newton, map, x, y).deviation);
  }
  checks.add("fenchel_equality", fenchel, 1e-9);
  checks.add("dual_distance_equality", dist, 1e-6);

  double traj = 0.0, speed = 0.0;
  const int ode_pairs = std::min<int>(config.ode_pairs, static_cast<int>(pairs.size()));
  for (int k = 0; k < ode_pairs; ++k) {
    const auto& [x, y] = pairs[static_cast<std::size_t>(k)];
    const DualGeodesicReport r = dual_geodesic_check(pair, map, x, y, 11);
    traj = std::max(traj, r.trajectory_deviation);
    speed = std::max(speed, r.speed_deviation);
  }
  if (ode_pairs > 0) {
    checks.add("dual_geodesic_trajectory", traj, 1e-5);
    checks.add("dual_speed_identity", speed, 1e-5);
  }

  section["potential"] = pot.name();
  section["dual_domain"] = pair.dual_domain.describe();
  section["gradient_inverse"] = pair.analytic_inverse ? "analytic" : "newton";
  section["map"] = map.name();
  section["map_source"] = source;
}

CommandResult cmd_verify(const RunConfig& config, const std::string& suite) {
  static const std::vector<std::string> all = {"dynamics", "bridge", "bregman", "legendre"};
  std::vector<std::string> run;
  if (suite == "all") {
    if (config.has_map()) run.push_back("dynamics");
    run.push_back("bridge");
    if (config.has_potential()) {
      run.push_back("bregman");
      run.push_back("legendre");
    }
  } else if (std::find(all.begin(), all.end(), suite) != all.end()) {
    run.push_back(suite);
  } else {
    throw GeoError(ErrorKind::parse, "unknown suite '" + suite + "'");
  }

  Report report;
  report["command"] = "verify";
  report["suite"] = suite;
  report["config"] = config_echo(config);
  CheckList checks;
  Report suites;
  for (const std::string& name : run) {
    Report section;
    if (name == "dynamics") suite_dynamics(config, checks, section);
    else if (name == "bridge") suite_bridge(config, checks, section);
    else if (name == "bregman") suite_bregman(config, checks, section);
    else suite_legendre(config, checks, section);
    suites[name] = section;
  }
  report["suites"] = suites;
  return finish(std::move(report), checks);
}

}  // namespace geo::cli
