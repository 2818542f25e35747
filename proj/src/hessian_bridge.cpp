#include "geo/hessian_bridge.hpp"

#include "geo/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geo {

FactorizationReport check_sqrt_integrability(const ConvexPotential& potential, SquareRootKind kind,
                                             const std::vector<Vec>& sample_points,
                                             const Tolerances& tol, double threshold) {
  FactorizationReport report;
  report.kind = kind;
  report.sample_points = sample_points;
  report.min_singular_value = std::numeric_limits<double>::infinity();
  report.min_abs_det = std::numeric_limits<double>::infinity();

  const MatrixField S = [&](const Vec& x) {
    return spd_sqrt(potential.hessian(x), kind, tol.spd_eig_floor);
  };
  const Membership inside = potential.domain().membership();
  for (const Vec& x : sample_points) {
    const Mat Sx = S(x);
    const std::vector<Mat> dS = fd_matrix_partials(S, x, tol, inside);
    const Eigen::Index n = x.size();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          const double v = std::abs(dS[static_cast<std::size_t>(k)](i, j) -
                                    dS[static_cast<std::size_t>(j)](i, k));
          report.curl_violation = std::max(report.curl_violation, v);
        }
    const Eigen::JacobiSVD<Mat> svd(Sx);
    const double smin = svd.singularValues().minCoeff();
    report.min_singular_value = std::min(report.min_singular_value, smin);
    report.min_abs_det = std::min(report.min_abs_det, std::abs(Sx.determinant()));
    report.max_inverse_norm = std::max(report.max_inverse_norm, 1.0 / smin);
  }
  report.curl_condition_ok = report.curl_violation <= threshold;
  report.jacobian_invertible_ok = report.min_singular_value > tol.spd_eig_floor;
  if (auto a = potential.eigen_floor()) {
    report.inverse_norm_bound = 1.0 / std::sqrt(*a);
    report.bound_ok = report.max_inverse_norm <= report.inverse_norm_bound + 1e-9;
  }
  return report;
}

DiffeoMap potential_to_map(const ConvexPotential& potential, SquareRootKind kind,
                           const Vec& base_point, const Tolerances& tol,
                           const BridgeOptions& options) {
  if (!potential.domain().contains(base_point)) {
    throw GeoError(ErrorKind::domain, "potential_to_map: base point outside the domain");
  }
  const auto samples = sample_points(potential.sample_box(), options.samples, options.seed);
  const FactorizationReport check =
      check_sqrt_integrability(potential, kind, samples, tol, options.threshold);
  if (!check.curl_condition_ok || !check.jacobian_invertible_ok) {
    std::ostringstream os;
    os << "potential_to_map: the " << to_string(kind) << " root of " << potential.name()
       << " fails the curl condition (max violation " << check.curl_violation << ", threshold "
       << options.threshold << ")";
    throw GeoError(ErrorKind::integrability, os.str());
  }
  const MatrixField S = [potential, kind, floor = tol.spd_eig_floor](const Vec& x) {
    return spd_sqrt(potential.hessian(x), kind, floor);
  };
  const Domain domain = potential.domain();
  const int quad = tol.quad_points;
  return DiffeoMap({
      .name = "sqrt_map(" + potential.name() + ", " + to_string(kind) + ")",
      .domain = domain,
      .forward = [S, base_point, domain, quad](const Vec& x) -> Vec {
        if (!domain.contains(x)) {
          std::ostringstream os;
          os << "sqrt_map: (" << x.transpose() << ") is outside " << domain.describe();
          throw GeoError(ErrorKind::domain, os.str());
        }
        return path_line_integral(S, Path::straight(base_point, x), quad);
      },
      .inverse = {},
      .jacobian = S,
      .second = {},
      .sample_box = potential.sample_box(),
      .tol = tol,
  });
}

IntegrabilityReport check_map_integrability(const DiffeoMap& map,
                                            const std::vector<Vec>& sample_points,
                                            const Tolerances&, double threshold) {
  IntegrabilityReport report;
  report.sample_points = sample_points;
  for (const Vec& x : sample_points) {
    const Mat J = map.jacobian(x);
    const Tensor3 H = map.second_derivatives(x);
    const Eigen::Index n = x.size();
    // T(a, b, c) = sum_m U^m_{ab} U^m_c
    auto T = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
      double acc = 0.0;
      for (Eigen::Index m = 0; m < n; ++m) acc += H[static_cast<std::size_t>(m)](a, b) * J(m, c);
      return acc;
    };
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          report.condition_violation =
              std::max(report.condition_violation, std::abs(T(k, i, j) - T(i, j, k)));
        }
    const Mat g = J.transpose() * J;
    report.symmetry_violation =
        std::max(report.symmetry_violation, (g - g.transpose()).cwiseAbs().maxCoeff());
  }
  report.condition_ok = report.condition_violation <= threshold;
  report.symmetry_ok = report.symmetry_violation <= threshold;
  return report;
}

namespace {

MatrixField metric_field(const DiffeoMap& map) {
  return [map](const Vec& x) -> Mat {
    const Mat J = map.jacobian(x);
    return J.transpose() * J;
  };
}

void require_staircase(const Domain& domain, const Vec& base, const Vec& x, const char* who) {
  if (!domain.contains(x)) {
    std::ostringstream os;
    os << who << ": (" << x.transpose() << ") is outside " << domain.describe();
    throw GeoError(ErrorKind::domain, os.str());
  }
  const Path path = Path::staircase(base, x);
  for (const Vec& corner : path.vertices()) {
    if (!domain.contains(corner)) {
      std::ostringstream os;
      os << who << ": staircase corner (" << corner.transpose() << ") leaves the domain";
      throw GeoError(ErrorKind::domain, os.str());
    }
  }
}

}  // namespace

Vec staircase_gradient(const DiffeoMap& map, const Vec& base_point, const Vec& x, int quad_points) {
  require_staircase(map.domain(), base_point, x, "staircase_gradient");
  return path_line_integral(metric_field(map), Path::staircase(base_point, x), quad_points);
}

Vec straight_gradient(const DiffeoMap& map, const Vec& base_point, const Vec& x, int quad_points) {
  return path_line_integral(metric_field(map), Path::straight(base_point, x), quad_points);
}

ConvexPotential map_to_potential(const DiffeoMap& map, const Vec& base_point,
                                 const Tolerances& tol, const BridgeOptions& options) {
  const Domain& domain = map.domain();
  if (!domain.is_convex() || !domain.is_product()) {
    throw GeoError(ErrorKind::invalid_argument,
                   "map_to_potential: needs a convex product domain, got " + domain.describe());
  }
  if (!domain.contains(base_point)) {
    throw GeoError(ErrorKind::domain, "map_to_potential: base point outside the domain");
  }
  const auto samples = sample_points(map.sample_box(), options.samples, options.seed);
  const IntegrabilityReport check = check_map_integrability(map, samples, tol, options.threshold);
  if (!check.ok()) {
    std::ostringstream os;
    os << "map_to_potential: " << map.name()
       << " fails check_map_integrability (max violation " << check.condition_violation
       << ", threshold " << options.threshold << ")";
    throw GeoError(ErrorKind::integrability, os.str());
  }
  const int quad = tol.quad_points;
  const VectorField gradient = [map, base_point, quad](const Vec& x) {
    return staircase_gradient(map, base_point, x, quad);
  };
  const ScalarField value = [gradient, base_point, quad, domain](const Vec& x) {
    require_staircase(domain, base_point, x, "map_to_potential");
    return path_line_integral_scalar(gradient, Path::staircase(base_point, x), quad);
  };
  return ConvexPotential({
      .name = "staircase_potential(" + map.name() + ")",
      .domain = domain,
      .value = value,
      .gradient = gradient,
      .hessian = {},
      .third = {},
      .gradient_inverse = {},
      .gradient_range = std::nullopt,
      .eigen_floor = std::nullopt,
      .sample_box = map.sample_box(),
      .tol = tol,
      .supplied = DerivativeSource::quadrature,
  });
}

}  // namespace geo
