#include "geo/legendre.hpp"

#include "geo/error.hpp"
#include "geo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geo {

namespace {

SampleBox gradient_image_box(const ConvexPotential& potential) {
  const SampleBox& box = potential.sample_box();
  const Eigen::Index n = box.lo.size();
  Vec lo = Vec::Constant(n, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  const long corners = 1L << n;
  for (long c = 0; c < corners; ++c) {
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = (c >> i) & 1 ? box.hi[i] : box.lo[i];
    const Vec g = potential.gradient(x);
    lo = lo.cwiseMin(g);
    hi = hi.cwiseMax(g);
  }
  // Shrink slightly so sampled points stay strictly inside the image.
  const Vec pad = 0.02 * (hi - lo);
  return {lo + pad, hi - pad};
}

}  // namespace

Vec ConjugatePair::primal_point(const Vec& xi) const {
  if (!dual_domain.contains(xi)) {
    std::ostringstream os;
    os << "(" << xi.transpose() << ") is outside the gradient range " << dual_domain.describe();
    throw GeoError(ErrorKind::domain, os.str());
  }
  return grad_inverse(xi);
}

ConjugatePair make_conjugate_pair(const ConvexPotential& potential, const Tolerances& tol,
                                  bool force_newton) {
  if (potential.dim() > 16) {
    throw GeoError(ErrorKind::invalid_argument, "conjugate pairs support dimension <= 16");
  }
  ConjugatePair pair{potential, {}, false, potential.gradient_range(), gradient_image_box(potential), tol};
  if (potential.has_gradient_inverse() && !force_newton) {
    pair.analytic_inverse = true;
    pair.grad_inverse = [potential](const Vec& xi) { return potential.gradient_inverse(xi); };
    return pair;
  }
  const Vec x0 = potential.sample_box().center();
  const Membership inside = potential.domain().membership();
  pair.grad_inverse = [potential, x0, inside, tol](const Vec& xi) -> Vec {
    const VectorField F = [&](const Vec& x) -> Vec { return potential.gradient(x) - xi; };
    const MatrixField J = [&](const Vec& x) { return potential.hessian(x); };
    try {
      return newton_solve(F, J, x0, tol, inside).x;
    } catch (const GeoError& e) {
      std::ostringstream os;
      os << "(" << xi.transpose() << ") appears to be outside the gradient range: " << e.what();
      throw GeoError(ErrorKind::domain, os.str());
    }
  };
  return pair;
}

double conjugate(const ConjugatePair& pair, const Vec& xi) {
  const Vec x = pair.primal_point(xi);
  if (!pair.primal.domain().contains(x)) {
    throw GeoError(ErrorKind::domain, "conjugate: gradient inverse left the primal domain");
  }
  return xi.dot(x) - pair.primal.value(x);
}

double conjugate(const ConvexPotential& potential, const Vec& xi, const Tolerances& tol) {
  return conjugate(make_conjugate_pair(potential, tol), xi);
}

double conjugate_grid_search(const ConvexPotential& potential, const Vec& xi,
                             const SampleBox& box, int points_per_dim) {
  if (points_per_dim < 2) {
    throw GeoError(ErrorKind::invalid_argument, "grid search needs >= 2 points per dimension");
  }
  const Eigen::Index n = xi.size();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = -std::numeric_limits<double>::infinity();
  Vec x(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[static_cast<std::size_t>(i)] / (points_per_dim - 1);
    }
    if (potential.domain().contains(x)) best = std::max(best, xi.dot(x) - potential.value(x));
    Eigen::Index d = 0;
    while (d < n && ++idx[static_cast<std::size_t>(d)] == points_per_dim) idx[static_cast<std::size_t>(d++)] = 0;
    if (d == n) break;
  }
  return best;
}

Mat conjugate_hessian(const ConjugatePair& pair, const Vec& xi) {
  Tolerances tol = pair.tol;
  tol.fd_step = pair.dual_fd_step;
  return fd_hessian([&pair](const Vec& v) { return conjugate(pair, v); }, xi, tol,
                    pair.dual_domain.membership());
}

ConvexPotential dual_potential(const ConjugatePair& pair) {
  return ConvexPotential({
      .name = "conjugate(" + pair.primal.name() + ")",
      .domain = pair.dual_domain,
      .value = [pair](const Vec& xi) { return conjugate(pair, xi); },
      .gradient = [pair](const Vec& xi) { return pair.primal_point(xi); },
      .hessian = [pair](const Vec& xi) { return conjugate_hessian(pair, xi); },
      .third = {},
      .gradient_inverse = [primal = pair.primal](const Vec& x) { return primal.gradient(x); },
      .gradient_range = pair.primal.domain(),
      .eigen_floor = std::nullopt,
      .sample_box = pair.dual_box,
      .tol = pair.tol,
      .supplied = pair.analytic_inverse ? DerivativeSource::analytic : DerivativeSource::newton,
  });
}

double check_gradient_inverse(const ConjugatePair& pair, const Vec& xi) {
  Tolerances tol = pair.tol;
  tol.fd_step = pair.dual_fd_step;
  const Vec fd = fd_gradient([&pair](const Vec& v) { return conjugate(pair, v); }, xi, tol,
                             pair.dual_domain.membership());
  return (fd - pair.primal_point(xi)).cwiseAbs().maxCoeff();
}

double check_hessian_product(const ConjugatePair& pair, const Vec& xi) {
  const Mat product = conjugate_hessian(pair, xi) * pair.primal.hessian(pair.primal_point(xi));
  return (product - Mat::Identity(xi.size(), xi.size())).cwiseAbs().maxCoeff();
}

double fenchel_gap(const ConjugatePair& pair, const Vec& x) {
  const Vec g = pair.primal.gradient(x);
  return std::abs(conjugate(pair, g) + pair.primal.value(x) - g.dot(x));
}

DiffeoMap dual_map(const ConjugatePair& pair, const DiffeoMap& map) {
  const ConvexPotential& primal = pair.primal;
  if (primal.dim() != map.dim()) {
    throw GeoError(ErrorKind::invalid_argument, "dual_map: dimension mismatch");
  }
  double err = 0.0;
  for (const Vec& x : sample_points(primal.sample_box(), 20, kDefaultSeed)) {
    const Mat J = map.jacobian(x);
    err = std::max(err, (primal.hessian(x) - J.transpose() * J).cwiseAbs().maxCoeff());
  }
  if (err > 1e-4) {
    std::ostringstream os;
    os << "dual_map: " << map.name() << " does not factor the Hessian of " << primal.name()
       << " (max error " << err << ")";
    throw GeoError(ErrorKind::invalid_argument, os.str());
  }
  const Domain primal_domain = primal.domain();
  return DiffeoMap({
      .name = "dual(" + map.name() + ")",
      .domain = pair.dual_domain,
      .forward = [pair, map](const Vec& xi) { return map.forward(pair.primal_point(xi)); },
      .inverse = [pair, map, primal_domain](const Vec& eta) -> Vec {
        const Vec x = map.inverse(eta);
        if (!primal_domain.contains(x)) return Vec::Constant(eta.size(), std::numeric_limits<double>::quiet_NaN());
        return pair.primal.gradient(x);
      },
      .jacobian = [pair, map](const Vec& xi) -> Mat {
        const Vec x = pair.primal_point(xi);
        // d/dxi U((grad Phi)^{-1}(xi)) = J_U(x) Phi''(x)^{-1}
        const Mat H = pair.primal.hessian(x);
        return H.transpose().ldlt().solve(map.jacobian(x).transpose()).transpose();
      },
      .second = {},
      .sample_box = pair.dual_box,
      .tol = pair.tol,
  });
}

DualGeodesicReport dual_geodesic_check(const ConjugatePair& pair, const DiffeoMap& map,
                                       const Vec& x1, const Vec& x2, int n_samples) {
  const GeodesicPath primal = geodesic_closed_form(map, x1, x2, n_samples);
  const DiffeoMap dual = dual_map(pair, map);
  const Vec xi1 = pair.primal.gradient(x1);
  const Vec xi2 = pair.primal.gradient(x2);
  const GeodesicPath dual_path = geodesic_closed_form(dual, xi1, xi2, n_samples);

  DualGeodesicReport report;
  const Vec C = primal.momenta;
  constexpr double h = 1e-5;
  for (std::size_t s = 0; s < primal.points.size(); ++s) {
    const double t = primal.times[s];
    const Vec xi_t = pair.primal.gradient(primal.points[s]);
    report.trajectory_deviation =
        std::max(report.trajectory_deviation, (xi_t - dual_path.points[s]).cwiseAbs().maxCoeff());

    const Vec xp = geodesic_flow(map, x1, C, t + h);
    const Vec xm = geodesic_flow(map, x1, C, t - h);
    const Vec xdot = (xp - xm) / (2.0 * h);
    const Vec xidot = (pair.primal.gradient(xp) - pair.primal.gradient(xm)) / (2.0 * h);
    const double primal_speed = xdot.dot(pair.primal.hessian(primal.points[s]) * xdot);
    const double dual_speed = xidot.dot(conjugate_hessian(pair, xi_t) * xidot);
    report.speed_deviation = std::max(report.speed_deviation, std::abs(primal_speed - dual_speed));
    ++report.samples;
  }
  return report;
}

DualDistanceReport dual_distance_check(const ConjugatePair& pair, const DiffeoMap& map,
                                       const Vec& x1, const Vec& x2) {
  const Vec xi1 = pair.primal.gradient(x1);
  const Vec xi2 = pair.primal.gradient(x2);
  DualDistanceReport r;
  r.dual_distance = (map.forward(pair.primal_point(xi1)) - map.forward(pair.primal_point(xi2))).norm();
  r.primal_distance = geodesic_distance(map, x1, x2);
  r.deviation = std::abs(r.dual_distance - r.primal_distance);
  return r;
}

}  // namespace geo
