#include "doctest.h"
#include "support.hpp"

#include "geo/geometry.hpp"

#include <cmath>
#include <random>

using namespace geo;
using geo::test::max_abs;
using geo::test::v;

TEST_SUITE("geometry") {

TEST_CASE("pullback metric examples") {
  const Vec x = v({0.4, 2.2});
  CHECK(pullback_metric(builtin_map("identity", 2), x).g == Mat::Identity(2, 2));
  // separable: diag(u'(x_i)^2)
  const DiffeoMap p = builtin_map("separable", 2, Params{{"u", "power"}, {"p", 3.0}});
  const Mat g = pullback_metric(p, x).g;
  CHECK(std::abs(g(0, 0) - std::pow(3 * x[0] * x[0], 2)) < 1e-12);
  CHECK(std::abs(g(1, 1) - std::pow(3 * x[1] * x[1], 2)) < 1e-10);
  CHECK(g(0, 1) == 0.0);
  const DiffeoMap inv = builtin_map("sphere_inversion", 2);
  const Mat Jfd = fd_jacobian([&inv](const Vec& y) { return inv.forward(y); }, v({1, 0}), Tolerances{});
  CHECK(max_abs(pullback_metric(inv, v({1, 0})).g - Jfd.transpose() * Jfd) < 1e-8);
}

TEST_CASE("metric inverse and SPD at samples") {
  for (const auto& nm : geo::test::catalog_maps()) {
    for (const Vec& x : sample_points(nm.map.sample_box(), 20, 1)) {
      const MetricTensor m = pullback_metric(nm.map, x);
      CHECK_MESSAGE(max_abs(m.g - m.g.transpose()) == 0.0, nm.label);
      CHECK_MESSAGE(max_abs(m.g * m.inverse() - Mat::Identity(2, 2)) < 1e-9, nm.label);
      CHECK_MESSAGE(Eigen::SelfAdjointEigenSolver<Mat>(m.g).eigenvalues().minCoeff() > 0, nm.label);
    }
  }
}

TEST_CASE("distance examples") {
  CHECK(geodesic_distance(builtin_map("identity", 2), v({0, 0}), v({3, 4})) == 5.0);
  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  CHECK(std::abs(geodesic_distance(lg, v({1}), v({std::exp(2.0)})) - 2) < 1e-15);
  CHECK(std::abs(geodesic_distance(builtin_map("sphere_inversion", 2), v({1, 0}), v({0, 2})) - std::sqrt(1.25)) < 1e-15);
  CHECK_THROWS_AS(geodesic_distance(lg, v({-1}), v({1})), GeoError);
}

TEST_CASE("d_U is a metric on sampled triples") {
  for (const auto& nm : geo::test::catalog_maps()) {
    const auto pts = sample_points(nm.map.sample_box(), 600, 9);
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
      const Vec &x = pts[i], &y = pts[i + 1], &z = pts[i + 2];
      const double dxy = geodesic_distance(nm.map, x, y);
      CHECK(dxy >= 0);
      CHECK(std::abs(dxy - geodesic_distance(nm.map, y, x)) <= 1e-12);
      CHECK(geodesic_distance(nm.map, x, z) <= dxy + geodesic_distance(nm.map, y, z) + 1e-12);
    }
    CHECK(geodesic_distance(nm.map, pts[0], pts[0]) == 0.0);
  }
}

TEST_CASE("closed-form geodesic examples") {
  const DiffeoMap id = builtin_map("identity", 2);
  const GeodesicPath line = geodesic_closed_form(id, v({0, 0}), v({2, -1}), 5);
  for (std::size_t s = 0; s < line.points.size(); ++s) {
    CHECK((line.points[s] - line.times[s] * v({2, -1})).norm() < 1e-15);
  }
  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const GeodesicPath p = geodesic_closed_form(lg, v({1}), v({std::exp(2.0)}), 3);
  CHECK(std::abs(p.points[1][0] - M_E) < 1e-14);
  CHECK(p.points.front() == v({1}));
  CHECK(p.points.back() == v({std::exp(2.0)}));
  CHECK(std::abs(p.momenta[0] - 2) < 1e-15);

  const DiffeoMap eh = builtin_map("separable", 1, Params{{"u", "exp_half"}});
  const GeodesicPath q = geodesic_closed_form(eh, v({0}), v({2}), 3);
  CHECK(std::abs(q.points[1][0] - 2 * std::log((1 + M_E) / 2)) < 1e-14);
}

TEST_CASE("closed-form geodesic names the offending t") {
  const DiffeoMap inv = builtin_map("sphere_inversion", 2);
  try {
    geodesic_closed_form(inv, v({1, 0}), v({-1, 0}), 11);
    FAIL("expected a domain error");
  } catch (const GeoError& e) {
    CHECK(e.kind() == ErrorKind::domain);
    CHECK(std::string(e.what()).find("t = 0.5") != std::string::npos);
  }
}

TEST_CASE("Euler-Lagrange agrees with the closed form") {
  const Tolerances tol;
  const GeodesicPath id = geodesic_euler_lagrange(builtin_map("identity", 2), v({0, 0}), v({1, 2}), tol);
  CHECK(id.endpoint_error < 1e-13);

  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const GeodesicPath el = geodesic_euler_lagrange(lg, v({1}), v({std::exp(2.0)}), tol);
  const GeodesicPath cf = geodesic_closed_form(lg, v({1}), v({std::exp(2.0)}), tol.ode_steps + 1);
  CHECK(sup_distance(cf.times, cf.points, el.times, el.points) < 1e-6);

  const DiffeoMap inv = builtin_map("sphere_inversion", 2);
  const GeodesicPath el2 = geodesic_euler_lagrange(inv, v({1, 0}), v({0.6, 0.3}), tol);
  const GeodesicPath cf2 = geodesic_closed_form(inv, v({1, 0}), v({0.6, 0.3}), tol.ode_steps + 1);
  CHECK(sup_distance(cf2.times, cf2.points, el2.times, el2.points) < 1e-5);
  CHECK(el2.complete);
}

TEST_CASE("Hamiltonian flow examples") {
  const Tolerances tol;
  const HamiltonianTrajectory free =
      hamiltonian_flow(builtin_map("identity", 2), {v({0, 0}), v({1, 0})}, {0, 1}, tol);
  CHECK((free.states.back().x - v({1, 0})).norm() < 1e-12);
  CHECK((free.states.back().p - v({1, 0})).norm() < 1e-12);

  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const Vec y = v({std::exp(2.0)});
  const HamiltonianTrajectory h = hamiltonian_flow(lg, {v({1}), initial_momentum(lg, v({1}), y)}, {0, 1}, tol);
  const GeodesicPath cf = geodesic_closed_form(lg, v({1}), y, tol.ode_steps + 1);
  std::vector<Vec> hx;
  for (const auto& s : h.states) hx.push_back(s.x);
  CHECK(sup_distance(cf.times, cf.points, h.times, hx) < 1e-5);
  CHECK(h.energy_drift() < 1e-7);
}

TEST_CASE("Hamiltonian flow stops with a diagnostic on domain exit") {
  // U = 2 e^{x/2} with image velocity -3 from U = 2 reaches the image boundary at t = 2/3.
  const DiffeoMap eh = builtin_map("separable", 1, Params{{"u", "exp_half"}});
  const HamiltonianTrajectory h = hamiltonian_flow(eh, {v({0}), v({-3})}, {0, 1}, Tolerances{});
  CHECK_FALSE(h.complete);
  CHECK_FALSE(h.diagnostic.empty());
}

TEST_CASE("transformed momenta") {
  const TransformedState id = transformed_momenta(builtin_map("identity", 2), {v({1, 2}), v({3, 4})});
  CHECK(id.y == v({1, 2}));
  CHECK(id.pi == v({3, 4}));
  const TransformedState lg =
      transformed_momenta(builtin_map("separable", 1, Params{{"u", "log"}}), {v({2}), v({0.7})});
  CHECK(std::abs(lg.pi[0] - 1.4) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  for (const auto& nm : geo::test::catalog_maps()) {
    for (const Vec& x : sample_points(nm.map.sample_box(), 50, 13)) {
      const PhaseState s{x, v({U(rng), U(rng)})};
      const double lhs = 0.5 * transformed_momenta(nm.map, s).pi.squaredNorm();
      const double rhs = hamiltonian(nm.map, s);
      CHECK_MESSAGE(std::abs(lhs - rhs) < 1e-9 * (1 + rhs), nm.label);
    }
  }
}

TEST_CASE("canonical brackets") {
  const Tolerances tol;
  CHECK(check_canonical(builtin_map("identity", 2), v({0.3, 0.1}), tol).max_deviation() < 1e-9);
  const BracketReport lg = check_canonical(builtin_map("separable", 1, Params{{"u", "log"}}), v({1.5}), tol);
  CHECK(lg.max_ypi < 1e-5);
  const BracketReport inv = check_canonical(builtin_map("sphere_inversion", 2), v({0.8, 1.3}), tol);
  CHECK(inv.max_deviation() < 1e-4);
  CHECK(inv.phase_points == 10);
}

TEST_CASE("momentum constancy") {
  const Tolerances tol;
  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const GeodesicPath cf = geodesic_closed_form(lg, v({1}), v({5}), 1000);
  CHECK(verify_momentum_constancy(cf, tol).max_rate_deviation < 1e-4);
  const GeodesicPath line = geodesic_closed_form(builtin_map("identity", 2), v({0, 0}), v({1, 1}), 50);
  CHECK(verify_momentum_constancy(line, tol).max_rate_deviation < 1e-12);
  const GeodesicPath el = geodesic_euler_lagrange(lg, v({1}), v({5}), tol);
  const MomentumReport m = verify_momentum_constancy(el, tol);
  CHECK(m.max_rate_deviation < 1e-4);
  CHECK(m.endpoint_deviation < 1e-4);
  GeodesicPath two = geodesic_closed_form(lg, v({1}), v({5}), 2);
  CHECK_THROWS_AS(verify_momentum_constancy(two, tol), GeoError);
}

TEST_CASE("arclength and constant speed") {
  for (const auto& nm : geo::test::catalog_maps()) {
    const auto pts = sample_points(nm.map.sample_box(), 20, 5);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const ArclengthReport a = closed_form_arclength(nm.map, pts[i], pts[i + 1], 32);
      CHECK_MESSAGE(std::abs(a.arclength - a.distance) < 1e-6, nm.label);
      CHECK_MESSAGE(a.speed_spread() < 1e-6, nm.label);
    }
  }
}

TEST_CASE("flow semigroup and predictor") {
  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const FlowReport f = flow_semigroup_check(lg, v({1}), v({1}), 0.5, 0.5);
  CHECK(std::abs(f.direct[0] - M_E) < 1e-15);
  CHECK(std::abs(f.composed[0] - M_E) < 1e-15);
  CHECK(flow_semigroup_check(builtin_map("identity", 2), v({1, 2}), v({3, -1}), 0.3, 0.4).deviation < 1e-15);

  const DiffeoMap inv = builtin_map("sphere_inversion", 2);
  const Vec x = v({1, 0.5});
  const Vec xi = v({0.2, -0.3});
  CHECK(geodesic_flow(inv, x, xi, 0.0) == x);
  const PredictorReport s0 = kernel_predictor_check(inv, x, xi, 0.4, 0.0);
  CHECK(s0.predictor == s0.current);
  const PredictorReport t0 = kernel_predictor_check(inv, x, xi, 0.0, 0.4);
  CHECK(t0.predictor == geodesic_flow(inv, x, xi, 0.4));
  const FlowReport ff = flow_semigroup_check(inv, x, xi, 0.3, 0.6);
  CHECK(ff.deviation < 1e-9);
  CHECK(kernel_predictor_check(inv, x, xi, 0.3, 0.6).deviation == ff.deviation);
}

TEST_CASE("flow leaving the domain is a domain error") {
  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "exp_half"}});
  CHECK_THROWS_AS(geodesic_flow(lg, v({0}), v({-3}), 1.0), GeoError);
}

}
