#include "geo/bregman.hpp"

#include "geo/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geo {

namespace {

void require_inside(const Domain& domain, const Vec& p, const char* who) {
  if (!domain.contains(p)) {
    std::ostringstream os;
    os << who << ": (" << p.transpose() << ") is outside " << domain.describe();
    throw GeoError(ErrorKind::domain, os.str());
  }
}

}  // namespace

double bregman_divergence(const ConvexPotential& potential, const Vec& x, const Vec& y) {
  require_inside(potential.domain(), x, "bregman_divergence");
  require_inside(potential.domain(), y, "bregman_divergence");
  if (x == y) return 0.0;
  return potential.value(x) - potential.value(y) - (x - y).dot(potential.gradient(y));
}

const char* to_string(KSign sign) noexcept {
  switch (sign) {
    case KSign::zero: return "zero";
    case KSign::nonnegative: return "nonnegative";
    case KSign::nonpositive: return "nonpositive";
    case KSign::mixed: return "mixed";
  }
  return "unknown";
}

const char* to_string(ExpectedInequality e) noexcept {
  switch (e) {
    case ExpectedInequality::delta_eq_half_d2: return "delta_eq_half_d2";
    case ExpectedInequality::delta_le_half_d2: return "delta_le_half_d2";
    case ExpectedInequality::delta_ge_half_d2: return "delta_ge_half_d2";
    case ExpectedInequality::none: return "none";
  }
  return "unknown";
}

ExpectedInequality expected_inequality(KSign sign) noexcept {
  switch (sign) {
    case KSign::zero: return ExpectedInequality::delta_eq_half_d2;
    case KSign::nonnegative: return ExpectedInequality::delta_le_half_d2;
    case KSign::nonpositive: return ExpectedInequality::delta_ge_half_d2;
    case KSign::mixed: return ExpectedInequality::none;
  }
  return ExpectedInequality::none;
}

KSignSummary k_sign_probe(const DiffeoMap& map, const std::vector<Vec>& sample_points,
                          double zero_tol) {
  KSignSummary out;
  out.k_min = std::numeric_limits<double>::infinity();
  out.k_max = -std::numeric_limits<double>::infinity();
  for (const Vec& xi : sample_points) {
    const Mat J = map.jacobian(xi);
    const Tensor3 H = map.second_derivatives(xi);
    const Eigen::Index n = xi.size();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          double K = 0.0;
          for (Eigen::Index m = 0; m < n; ++m) K += H[static_cast<std::size_t>(m)](i, j) * J(m, k);
          out.k_min = std::min(out.k_min, K);
          out.k_max = std::max(out.k_max, K);
        }
    ++out.points_probed;
  }
  if (out.points_probed == 0) {
    out.k_min = out.k_max = 0.0;
    return out;
  }
  const bool has_negative = out.k_min < -zero_tol;
  const bool has_positive = out.k_max > zero_tol;
  out.sign = has_negative ? (has_positive ? KSign::mixed : KSign::nonpositive)
                          : (has_positive ? KSign::nonnegative : KSign::zero);
  return out;
}

ComparisonVerdict compare_divergence_distance(const ConvexPotential& potential,
                                              const DiffeoMap& map,
                                              const std::vector<PointPair>& pairs,
                                              const ComparisonOptions& options) {
  if (potential.dim() != map.dim()) {
    throw GeoError(ErrorKind::invalid_argument, "potential and map dimensions differ");
  }
  ComparisonVerdict verdict;

  std::vector<Vec> probe = options.k_points.empty()
                               ? sample_points(map.sample_box(), options.k_samples, options.seed)
                               : options.k_points;
  for (const auto& [x, y] : pairs) {
    require_inside(potential.domain(), x, "compare_divergence_distance");
    require_inside(potential.domain(), y, "compare_divergence_distance");
    require_inside(map.domain(), x, "compare_divergence_distance");
    require_inside(map.domain(), y, "compare_divergence_distance");
    for (const Vec* p : {&x, &y}) {
      const Mat J = map.jacobian(*p);
      verdict.factorization_error = std::max(
          verdict.factorization_error, (potential.hessian(*p) - J.transpose() * J).cwiseAbs().maxCoeff());
    }
    probe.push_back(x);
    probe.push_back(y);
  }
  if (verdict.factorization_error > options.factorization_tolerance) {
    std::ostringstream os;
    os << "compare_divergence_distance: " << map.name() << " does not factor the Hessian of "
       << potential.name() << " (max error " << verdict.factorization_error << ")";
    throw GeoError(ErrorKind::invalid_argument, os.str());
  }

  verdict.k = k_sign_probe(map, probe);
  verdict.inequality_expected = expected_inequality(verdict.k.sign);
  for (const auto& [x, y] : pairs) {
    PairComparison c{x, y, bregman_divergence(potential, y, x), 0.0};
    c.rhs = 0.5 * (map.forward(y) - map.forward(x)).squaredNorm();
    double excess = 0.0;
    switch (verdict.inequality_expected) {
      case ExpectedInequality::delta_le_half_d2: excess = c.lhs - c.rhs; break;
      case ExpectedInequality::delta_ge_half_d2: excess = c.rhs - c.lhs; break;
      case ExpectedInequality::delta_eq_half_d2: excess = std::abs(c.lhs - c.rhs); break;
      case ExpectedInequality::none: break;
    }
    if (excess > options.tolerance) {
      verdict.violations.push_back(c);
      verdict.max_violation = std::max(verdict.max_violation, excess);
    }
    verdict.pairs.push_back(std::move(c));
    ++verdict.pairs_tested;
  }
  return verdict;
}

TaylorResidual taylor_identity_check(const ConvexPotential& potential, const Vec& x, const Vec& y,
                                     int quad_points) {
  require_inside(potential.domain(), x, "taylor_identity_check");
  require_inside(potential.domain(), y, "taylor_identity_check");
  TaylorResidual out;
  out.divergence = bregman_divergence(potential, y, x);
  const Vec d = y - x;
  const QuadratureRule rule = gauss_legendre(quad_points);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = rule.nodes[q];
    const Vec g = x + s * d;
    out.integral += rule.weights[q] * (y - g).dot(potential.hessian(g) * d);
  }
  out.residual = std::abs(out.divergence - out.integral);
  return out;
}

}  // namespace geo
