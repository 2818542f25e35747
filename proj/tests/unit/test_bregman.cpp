#include "doctest.h"
#include "support.hpp"

#include "geo/bregman.hpp"
#include "geo/hessian_bridge.hpp"

#include <cmath>

using namespace geo;
using geo::test::v;

namespace {
ConvexPotential exp1() { return builtin_potential("separable", 1, Params{{"phi", "exp"}}); }
DiffeoMap exp_half1() { return builtin_map("separable", 1, Params{{"u", "exp_half"}}); }
}  // namespace

TEST_SUITE("bregman") {

TEST_CASE("divergence examples") {
  const ConvexPotential q = builtin_potential("quadratic", 3);
  const Vec x = v({1, 2, -1}), y = v({0.5, -1, 2});
  CHECK(std::abs(bregman_divergence(q, x, y) - 0.5 * (x - y).squaredNorm()) < 1e-12);
  CHECK(bregman_divergence(q, x, x) == 0.0);
  CHECK(std::abs(bregman_divergence(exp1(), v({1}), v({0})) - (M_E - 2)) < 1e-15);
}

TEST_CASE("divergence is not symmetric") {
  const ConvexPotential e = exp1();
  CHECK(std::abs(bregman_divergence(e, v({1}), v({0})) - bregman_divergence(e, v({0}), v({1}))) > 0.1);
}

TEST_CASE("nonnegativity, indiscernibles and separable reduction") {
  for (const auto& np : geo::test::catalog_potentials()) {
    const auto pts = sample_points(np.potential.sample_box(), 1000, 31);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      CHECK_MESSAGE(bregman_divergence(np.potential, pts[i], pts[i + 1]) >= -1e-12, np.label);
      CHECK(bregman_divergence(np.potential, pts[i], pts[i]) == 0.0);
    }
  }
  const ConvexPotential e2 = builtin_potential("separable", 2, Params{{"phi", "xlogx"}});
  const ConvexPotential e1 = builtin_potential("separable", 1, Params{{"phi", "xlogx"}});
  for (const Vec& x : sample_points(e2.sample_box(), 50, 2)) {
    const Vec y = x.reverse();
    const double sum = bregman_divergence(e1, x.head(1), y.head(1)) + bregman_divergence(e1, x.tail(1), y.tail(1));
    CHECK(std::abs(bregman_divergence(e2, x, y) - sum) < 1e-12);
  }
}

TEST_CASE("K sign probe") {
  const KSignSummary z = k_sign_probe(builtin_map("identity", 2), sample_points(SampleBox::cube(2, -1, 1), 10));
  CHECK(z.sign == KSign::zero);
  CHECK(expected_inequality(z.sign) == ExpectedInequality::delta_eq_half_d2);

  const DiffeoMap eh = exp_half1();
  const auto pts = sample_points(eh.sample_box(), 50);
  const KSignSummary p = k_sign_probe(eh, pts);
  CHECK(p.sign == KSign::nonnegative);
  double kmax = 0;
  for (const Vec& x : pts) kmax = std::max(kmax, 0.5 * std::exp(x[0]));  // u'' u'
  CHECK(std::abs(p.k_max - kmax) < 1e-12);

  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const KSignSummary n = k_sign_probe(lg, sample_points(lg.sample_box(), 50));
  CHECK(n.sign == KSign::nonpositive);
  CHECK(n.k_max <= 0);
  CHECK(expected_inequality(KSign::nonnegative) == ExpectedInequality::delta_le_half_d2);
  CHECK(expected_inequality(KSign::nonpositive) == ExpectedInequality::delta_ge_half_d2);
  CHECK(expected_inequality(KSign::mixed) == ExpectedInequality::none);

  const KSignSummary m = k_sign_probe(builtin_map("sphere_inversion", 2), sample_points(SampleBox::cube(2, 0.5, 2), 20));
  CHECK(m.sign == KSign::mixed);
}

TEST_CASE("comparison: equality case") {
  const ConvexPotential q = builtin_potential("quadratic", 2);
  std::vector<PointPair> pairs;
  const auto pts = sample_points(q.sample_box(), 40, 6);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.emplace_back(pts[i], pts[i + 1]);
  const ComparisonVerdict v0 = compare_divergence_distance(q, builtin_map("identity", 2), pairs);
  CHECK(v0.holds());
  CHECK(v0.inequality_expected == ExpectedInequality::delta_eq_half_d2);
  for (const auto& c : v0.pairs) CHECK(std::abs(c.lhs - c.rhs) <= 1e-12);
}

TEST_CASE("comparison: spot values") {
  const ComparisonVerdict e = compare_divergence_distance(exp1(), exp_half1(), {{v({0}), v({1})}});
  CHECK(e.holds());
  CHECK(std::abs(e.pairs[0].lhs - (M_E - 2)) < 1e-12);
  CHECK(std::abs(e.pairs[0].rhs - 2 * std::pow(std::exp(0.5) - 1, 2)) < 1e-12);
  CHECK(e.pairs[0].lhs == doctest::Approx(0.7182818).epsilon(1e-7));
  CHECK(std::abs(e.pairs[0].rhs - 0.8416786) < 1e-7);

  const ConvexPotential nl = builtin_potential("separable", 1, Params{{"phi", "neglog"}});
  const DiffeoMap lg = builtin_map("separable", 1, Params{{"u", "log"}});
  const ComparisonVerdict n = compare_divergence_distance(nl, lg, {{v({1}), v({2})}});
  CHECK(n.inequality_expected == ExpectedInequality::delta_ge_half_d2);
  CHECK(std::abs(n.pairs[0].lhs - (1 - std::log(2.0))) < 1e-12);
  CHECK(std::abs(n.pairs[0].rhs - 0.5 * std::pow(std::log(2.0), 2)) < 1e-12);
  CHECK(n.holds());
}

TEST_CASE("comparison: ordered pairs satisfy the K-sign inequality") {
  const ConvexPotential e = builtin_potential("separable", 2, Params{{"phi", "exp"}});
  const DiffeoMap eh = builtin_map("separable", 2, Params{{"u", "exp_half"}});
  std::vector<PointPair> pairs;
  const auto pts = sample_points(e.sample_box(), 400, 8);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    pairs.emplace_back(pts[i].cwiseMin(pts[i + 1]), pts[i].cwiseMax(pts[i + 1]));
  }
  CHECK(compare_divergence_distance(e, eh, pairs).holds());
}

TEST_CASE("comparison: reversed pairs break the inequality") {
  // delta(y, x) with y < x: 1-D exp at x=0, y=-1 gives e^-1 vs 2 (1 - e^-1/2)^2.
  const ComparisonVerdict e = compare_divergence_distance(exp1(), exp_half1(), {{v({0}), v({-1})}});
  CHECK(std::abs(e.pairs[0].lhs - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(e.pairs[0].rhs - 2 * std::pow(1 - std::exp(-0.5), 2)) < 1e-15);
  CHECK_FALSE(e.holds());
}

TEST_CASE("comparison: mixed K asserts nothing") {
  const ConvexPotential q = builtin_potential("quadratic", 2);
  const DiffeoMap inv = builtin_map("sphere_inversion", 2);
  ComparisonOptions o;
  o.factorization_tolerance = 1e300;  // bypass: only the K classification is under test
  const ComparisonVerdict v0 = compare_divergence_distance(q, inv, {{v({1, 1}), v({1.5, 0.7})}}, o);
  CHECK(v0.inequality_expected == ExpectedInequality::none);
  CHECK(v0.holds());
}

TEST_CASE("comparison refuses a map that does not factor the Hessian") {
  try {
    compare_divergence_distance(exp1(), builtin_map("identity", 1), {{v({0}), v({1})}});
    FAIL("expected a factorization error");
  } catch (const GeoError& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("Taylor identity") {
  const ConvexPotential q = builtin_potential("quadratic", 2);
  CHECK(taylor_identity_check(q, v({1, 2}), v({-1, 0.5}), 8).residual < 1e-10);
  CHECK(taylor_identity_check(exp1(), v({0}), v({1}), 64).residual < 1e-8);
  const TaylorResidual same = taylor_identity_check(exp1(), v({0.3}), v({0.3}), 16);
  CHECK(same.divergence == 0.0);
  CHECK(same.integral == 0.0);
  for (const auto& np : geo::test::catalog_potentials()) {
    const auto pts = sample_points(np.potential.sample_box(), 20, 12);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      CHECK_MESSAGE(taylor_identity_check(np.potential, pts[i], pts[i + 1], 64).residual < 1e-8, np.label);
    }
  }
}

}
