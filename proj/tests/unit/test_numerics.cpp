#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace geo;
using geo::test::v;
using geo::test::max_abs;

TEST_SUITE("numerics") {

TEST_CASE("tolerances reject non-positive fields") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.fd_step = 0.0;
  CHECK_THROWS_AS(t.validate(), GeoError);
  t = {};
  t.ode_steps = 0;
  CHECK_THROWS_AS(t.validate(), GeoError);
}

TEST_CASE("fd_gradient on known fields") {
  const Tolerances tol;
  CHECK(fd_gradient([](const Vec& x) { return x[0] * x[0]; }, v({3}), tol)[0] == doctest::Approx(6).epsilon(1e-10));
  CHECK(fd_gradient([](const Vec&) { return 4.2; }, v({1, -2}), tol).norm() == 0.0);
  const Vec g = fd_gradient([](const Vec& x) { return std::exp(x[0] + 2 * x[1]); }, v({0, 0}), tol);
  CHECK(std::abs(g[0] - 1) < 1e-6);
  CHECK(std::abs(g[1] - 2) < 1e-6);
}

TEST_CASE("fd_gradient refuses stencils outside the domain") {
  const Domain d = Domain::positive_orthant(1);
  const auto f = [](const Vec& x) { return std::log(x[0]); };
  CHECK_THROWS_AS(fd_gradient(f, v({1e-7}), Tolerances{}, d.membership()), GeoError);
  try {
    fd_gradient(f, v({1e-7}), Tolerances{}, d.membership());
  } catch (const GeoError& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("fd_hessian examples and exact symmetry") {
  const Tolerances tol;
  const Mat H1 = fd_hessian([](const Vec& x) { return 0.5 * x.squaredNorm(); }, v({0.3, -1.7, 2}), tol);
  CHECK(max_abs(H1 - Mat::Identity(3, 3)) < 1e-5);
  const Mat H2 = fd_hessian([](const Vec& x) { return x[0] * x[1]; }, v({1, 1}), tol);
  CHECK(max_abs(H2 - (Mat(2, 2) << 0, 1, 1, 0).finished()) < 1e-6);
  const Mat H3 = fd_hessian([](const Vec& x) { return std::exp(x[0]) + std::exp(x[1]); }, v({0, 0}), tol);
  CHECK(max_abs(H3 - Mat::Identity(2, 2)) < 1e-5);
  const Mat H4 = fd_hessian([](const Vec& x) { return std::sin(x[0] * x[1]) + x[0] * x[0] * x[1]; },
                            v({0.4, 1.3}), tol);
  CHECK((H4 - H4.transpose()).norm() == 0.0);
}

TEST_CASE("matrix partials, second and fourth order") {
  Tolerances tol;
  tol.fd_step = 1e-3;
  const MatrixField M = [](const Vec& x) {
    Mat m(2, 2);
    m << std::exp(x[0]), x[0] * x[1], std::sin(x[1]), x[1] * x[1] * x[1];
    return m;
  };
  const Vec x = v({0.5, 1.5});
  Mat d0(2, 2), d1(2, 2);
  d0 << std::exp(0.5), 1.5, 0, 0;
  d1 << 0, 0.5, std::cos(1.5), 3 * 1.5 * 1.5;
  const auto p2 = fd_matrix_partials(M, x, tol);
  const auto p4 = fd_matrix_partials(M, x, tol, {}, 4);
  const double e2 = std::max(max_abs(p2[0] - d0), max_abs(p2[1] - d1));
  const double e4 = std::max(max_abs(p4[0] - d0), max_abs(p4[1] - d1));
  CHECK(e2 < 1e-5);
  CHECK(e4 < 1e-10);
  CHECK(e4 < 1e-3 * e2);
  CHECK_THROWS_AS(fd_matrix_partials(M, x, tol, {}, 3), GeoError);
  const Membership right = [](const Vec& p) { return p[0] > 0.498; };
  CHECK_NOTHROW(fd_matrix_partials(M, x, tol, right, 2));
  CHECK_THROWS_AS(fd_matrix_partials(M, x, tol, right, 4), GeoError);
}

TEST_CASE("rk4 examples") {
  const Trajectory c = rk4_integrate([](double, const Vec&) { return Vec::Zero(2); }, v({1, 2}), {0, 1}, 10);
  REQUIRE(c.complete);
  for (const Vec& s : c.states) CHECK((s - v({1, 2})).norm() == 0.0);
  CHECK(c.times.size() == 11);
  CHECK(c.times.back() == 1.0);

  const Trajectory e = rk4_integrate([](double, const Vec& y) { return y; }, v({1}), {0, 1}, 100);
  CHECK(std::abs(e.states.back()[0] - std::exp(1.0)) < 1e-8);

  const Trajectory r = rk4_integrate([](double, const Vec& y) { return v({y[1], -y[0]}); }, v({1, 0}),
                                     {0, 2 * M_PI}, 1000);
  CHECK((r.states.back() - v({1, 0})).norm() < 1e-6);
}

TEST_CASE("rk4 error shrinks at fourth order on a linear field") {
  // y' = A y has the matrix-exponential solution; use a rotation-dilation.
  const auto field = [](double, const Vec& y) { return v({-0.5 * y[0] + y[1], -y[0] - 0.5 * y[1]}); };
  const auto exact = [](double t) {
    return v({std::exp(-0.5 * t) * std::cos(t), -std::exp(-0.5 * t) * std::sin(t)});
  };
  const double e1 = (rk4_integrate(field, v({1, 0}), {0, 2}, 20).states.back() - exact(2)).norm();
  const double e2 = (rk4_integrate(field, v({1, 0}), {0, 2}, 40).states.back() - exact(2)).norm();
  CHECK(e1 / e2 > 14.0);
  CHECK(e1 / e2 < 18.0);
}

TEST_CASE("rk4 returns a partial trajectory when the state leaves the admissible set") {
  const Trajectory t = rk4_integrate([](double, const Vec&) { return v({1}); }, v({0}), {0, 1}, 10,
                                     [](const Vec& y) { return y[0] < 0.55; });
  CHECK_FALSE(t.complete);
  CHECK_FALSE(t.diagnostic.empty());
  CHECK(t.states.size() == 6);
}

TEST_CASE("newton examples") {
  const Tolerances tol;
  const Vec c = v({1.5, -2});
  const NewtonResult r1 = newton_solve([&](const Vec& x) -> Vec { return x - c; },
                                       [](const Vec& x) -> Mat { return Mat::Identity(x.size(), x.size()); },
                                       v({0, 0}), tol);
  CHECK((r1.x - c).norm() == 0.0);
  CHECK(r1.iterations <= 1);

  const NewtonResult r2 = newton_solve([](const Vec& x) { return v({x[0] * x[0] * x[0] - 8}); },
                                       [](const Vec& x) { return Mat::Constant(1, 1, 3 * x[0] * x[0]); },
                                       v({3}), tol);
  CHECK(std::abs(r2.x[0] - 2) < 1e-12);
  CHECK(r2.residual <= tol.newton_tol);

  const NewtonResult r3 = newton_solve([](const Vec& x) -> Vec { return x.array().exp().matrix() - v({1, 1}); },
                                       [](const Vec& x) -> Mat { return x.array().exp().matrix().asDiagonal(); },
                                       v({0.5, 0.5}), tol);
  CHECK(r3.x.norm() < 1e-12);
}

TEST_CASE("newton failures") {
  Tolerances tol;
  CHECK_THROWS_AS(newton_solve([](const Vec& x) { return v({x[0] * x[0] + 1}); },
                               [](const Vec& x) { return Mat::Constant(1, 1, 2 * x[0]); }, v({0}), tol),
                  GeoError);
  tol.newton_max_iter = 2;
  CHECK_THROWS_AS(newton_solve([](const Vec& x) { return v({std::atan(x[0])}); },
                               [](const Vec& x) { return Mat::Constant(1, 1, 1 / (1 + x[0] * x[0])); },
                               v({1.3}), tol),
                  GeoError);
}

TEST_CASE("spd_sqrt examples, both kinds") {
  for (SquareRootKind k : {SquareRootKind::symmetric_psd, SquareRootKind::cholesky_transpose}) {
    CHECK(max_abs(spd_sqrt(Mat::Identity(3, 3), k) - Mat::Identity(3, 3)) < 1e-14);
    const Mat D = (Mat(2, 2) << 4, 0, 0, 9).finished();
    CHECK(max_abs(spd_sqrt(D, k) - (Mat(2, 2) << 2, 0, 0, 3).finished()) < 1e-14);
    const Mat A = (Mat(2, 2) << 2, 1, 1, 2).finished();
    const Mat S = spd_sqrt(A, k);
    CHECK(max_abs(S.transpose() * S - A) < 1e-12);
  }
  const Mat A = (Mat(2, 2) << 2, 1, 1, 2).finished();
  const Mat S = spd_sqrt(A, SquareRootKind::symmetric_psd);
  CHECK(max_abs(S - S.transpose()) < 1e-15);
  const Mat C = spd_sqrt(A, SquareRootKind::cholesky_transpose);
  CHECK(C(1, 0) == 0.0);
}

TEST_CASE("spd_sqrt rejects indefinite input") {
  const Mat A = (Mat(2, 2) << 1, 2, 2, 1).finished();
  CHECK_THROWS_AS(spd_sqrt(A, SquareRootKind::symmetric_psd), GeoError);
  CHECK_THROWS_AS(spd_sqrt(A, SquareRootKind::cholesky_transpose), GeoError);
}

TEST_CASE("spd_sqrt relative error on random well-conditioned matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    Mat Q = Mat::NullaryExpr(n, n, [&] { return n01(rng); });
    Q = Eigen::HouseholderQR<Mat>(Q).householderQ();
    Vec ev(n);
    for (int i = 0; i < n; ++i) ev[i] = std::pow(10.0, 6.0 * i / (n - 1) - 3.0);  // condition 1e6
    const Mat A = Q * ev.asDiagonal() * Q.transpose();
    const Mat Asym = 0.5 * (A + A.transpose());
    for (SquareRootKind k : {SquareRootKind::symmetric_psd, SquareRootKind::cholesky_transpose}) {
      const Mat S = spd_sqrt(Asym, k);
      CHECK((S.transpose() * S - Asym).norm() / Asym.norm() <= 1e-10);
    }
  }
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const QuadratureRule r = gauss_legendre(8);
  double w = 0, m15 = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    w += r.weights[i];
    m15 += r.weights[i] * std::pow(r.nodes[i], 15);
  }
  CHECK(std::abs(w - 1) < 1e-14);
  CHECK(std::abs(m15 - 1.0 / 16) < 1e-14);
}

TEST_CASE("line integral examples") {
  const MatrixField I = [](const Vec& x) -> Mat { return Mat::Identity(x.size(), x.size()); };
  const Vec x = v({0.5, -1}), y = v({2, 3});
  CHECK((path_line_integral(I, Path::straight(x, y), 8) - (y - x)).norm() < 1e-14);
  const MatrixField Z = [](const Vec& p) -> Mat { return Mat::Zero(p.size(), p.size()); };
  CHECK(path_line_integral(Z, Path::straight(x, y), 8).norm() == 0.0);

  const MatrixField E = [](const Vec& p) -> Mat { return (p / 2).array().exp().matrix().asDiagonal(); };
  const Vec r = path_line_integral(E, Path::polyline({v({0, 0}), v({1, 0}), v({1, 1})}), 32);
  const double expected = 2 * (std::exp(0.5) - 1);
  CHECK(std::abs(r[0] - expected) < 1e-13);
  CHECK(std::abs(r[1] - expected) < 1e-13);
}

TEST_CASE("line integrals of gradient fields are path independent") {
  for (const auto& np : geo::test::catalog_potentials()) {
    const ConvexPotential& p = np.potential;
    const MatrixField H = [&p](const Vec& x) { return p.hessian(x); };
    for (const Vec& x : sample_points(p.sample_box(), 10, 11)) {
      const Vec base = p.sample_box().center();
      const Vec a = path_line_integral(H, Path::staircase(base, x), 32);
      const Vec b = path_line_integral(H, Path::straight(base, x), 32);
      CHECK_MESSAGE((a - b).cwiseAbs().maxCoeff() < 1e-8, np.label);
      CHECK_MESSAGE((a - (p.gradient(x) - p.gradient(base))).cwiseAbs().maxCoeff() < 1e-8, np.label);
    }
  }
}

TEST_CASE("staircase skips flat coordinates") {
  const Path p = Path::staircase(v({0, 1, 2}), v({3, 1, 5}));
  CHECK(p.segments().size() == 2);
  CHECK(Path::staircase(v({1, 1}), v({1, 1})).segments().size() == 1);
}

TEST_CASE("square root kind names") {
  CHECK(square_root_kind_from_string("cholesky_transpose") == SquareRootKind::cholesky_transpose);
  CHECK(square_root_kind_from_string("symmetric_psd") == SquareRootKind::symmetric_psd);
  CHECK_THROWS_AS(square_root_kind_from_string("qr"), GeoError);
}

}
