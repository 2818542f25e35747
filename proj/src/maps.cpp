#include "geo/maps.hpp"

#include "geo/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace geo {

const char* to_string(DerivativeSource source) noexcept {
  switch (source) {
    case DerivativeSource::analytic: return "analytic";
    case DerivativeSource::finite_difference: return "finite_difference";
    case DerivativeSource::newton: return "newton";
    case DerivativeSource::quadrature: return "quadrature";
  }
  return "unknown";
}

namespace {

void check_box(const SampleBox& box, const Domain& domain, const std::string& name) {
  if (box.lo.size() != domain.dim() || box.hi.size() != domain.dim()) {
    throw GeoError(ErrorKind::invalid_argument,
                   name + ": sample box dimension does not match the domain");
  }
  if (!(box.lo.array() < box.hi.array()).all()) {
    throw GeoError(ErrorKind::invalid_argument, name + ": sample box needs lo < hi");
  }
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

DiffeoMap::DiffeoMap(Parts parts)
    : name_(std::move(parts.name)),
      domain_(std::move(parts.domain)),
      forward_(std::move(parts.forward)),
      inverse_(std::move(parts.inverse)),
      jacobian_(std::move(parts.jacobian)),
      second_(std::move(parts.second)),
      box_(std::move(parts.sample_box)),
      monotonicity_(parts.monotonicity),
      jacobian_source_(DerivativeSource::analytic),
      second_source_(DerivativeSource::analytic),
      inverse_source_(DerivativeSource::analytic) {
  if (!forward_) throw GeoError(ErrorKind::invalid_argument, name_ + ": forward map missing");
  check_box(box_, domain_, name_);
  parts.tol.validate();
  const Tolerances tol = parts.tol;
  const Membership inside = domain_.membership();

  if (!jacobian_) {
    jacobian_source_ = DerivativeSource::finite_difference;
    jacobian_ = [fwd = forward_, tol, inside](const Vec& x) {
      return fd_jacobian(fwd, x, tol, inside);
    };
  }
  if (!second_) {
    second_source_ = DerivativeSource::finite_difference;
    second_ = [jac = jacobian_, tol, inside](const Vec& x) {
      const std::vector<Mat> dJ = fd_matrix_partials(jac, x, tol, inside);
      const Eigen::Index n = x.size();
      Tensor3 out(static_cast<std::size_t>(n), Mat(n, n));
      for (Eigen::Index k = 0; k < n; ++k) {
        Mat& Hk = out[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) Hk(i, j) = dJ[static_cast<std::size_t>(j)](k, i);
        Hk = symmetrized(Hk);
      }
      return out;
    };
  }
  if (!inverse_) {
    inverse_source_ = DerivativeSource::newton;
    Vec x0 = box_.center();
    inverse_ = [fwd = forward_, jac = jacobian_, tol, inside, x0](const Vec& y) {
      const VectorField F = [&](const Vec& x) -> Vec { return fwd(x) - y; };
      return newton_solve(F, jac, x0, tol, inside).x;
    };
  }
}

Mat DiffeoMap::inverse_jacobian(const Vec& x) const {
  const Mat J = jacobian(x);
  const Eigen::FullPivLU<Mat> lu(J);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << name_ << ": singular Jacobian at (" << x.transpose() << ")";
    throw GeoError(ErrorKind::numerical, os.str());
  }
  return lu.inverse();
}

std::optional<Vec> DiffeoMap::try_pull_back(const Vec& y, double rel_tol) const {
  if (!y.allFinite()) return std::nullopt;
  Vec x;
  try {
    x = inverse(y);
  } catch (const GeoError&) {
    return std::nullopt;
  }
  if (!domain_.contains(x)) return std::nullopt;
  const Vec back = forward(x);
  if (!back.allFinite() || (back - y).norm() > rel_tol * (1.0 + y.norm())) return std::nullopt;
  return x;
}

ConvexPotential::ConvexPotential(Parts parts)
    : name_(std::move(parts.name)),
      domain_(std::move(parts.domain)),
      value_(std::move(parts.value)),
      gradient_(std::move(parts.gradient)),
      hessian_(std::move(parts.hessian)),
      third_(std::move(parts.third)),
      gradient_inverse_(std::move(parts.gradient_inverse)),
      range_(parts.gradient_range.value_or(Domain::full_space(domain_.dim()))),
      floor_(parts.eigen_floor),
      box_(std::move(parts.sample_box)),
      gradient_source_(parts.supplied),
      hessian_source_(parts.supplied),
      third_source_(parts.supplied) {
  if (!value_) throw GeoError(ErrorKind::invalid_argument, name_ + ": potential value missing");
  if (!domain_.is_convex()) {
    throw GeoError(ErrorKind::invalid_argument,
                   name_ + ": a convex potential needs a convex domain, got " + domain_.describe());
  }
  check_box(box_, domain_, name_);
  parts.tol.validate();
  const Tolerances tol = parts.tol;
  const Membership inside = domain_.membership();

  if (!gradient_) {
    gradient_source_ = DerivativeSource::finite_difference;
    gradient_ = [f = value_, tol, inside](const Vec& x) { return fd_gradient(f, x, tol, inside); };
  }
  if (!hessian_) {
    hessian_source_ = DerivativeSource::finite_difference;
    if (gradient_source_ != DerivativeSource::finite_difference) {
      hessian_ = [g = gradient_, tol, inside](const Vec& x) {
        return symmetrized(fd_jacobian(g, x, tol, inside));
      };
    } else {
      hessian_ = [f = value_, tol, inside](const Vec& x) { return fd_hessian(f, x, tol, inside); };
    }
  }
  if (!third_) {
    third_source_ = DerivativeSource::finite_difference;
    third_ = [h = hessian_, tol, inside](const Vec& x) {
      return fd_matrix_partials(h, x, tol, inside);
    };
  }
}

Vec ConvexPotential::gradient_inverse(const Vec& xi) const {
  if (!gradient_inverse_) {
    throw GeoError(ErrorKind::invalid_argument, name_ + ": no analytic gradient inverse");
  }
  return gradient_inverse_(xi);
}

int SeparableScale::monotonicity() const {
  const double d = du(0.5 * (sample_lo + sample_hi));
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

double SeparableScale::invert(double v) const {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (inverse) {
    const double x = inverse(v);
    return contains(x) ? x : nan;
  }
  Tolerances tol;
  const VectorField F = [&](const Vec& x) -> Vec { return Vec::Constant(1, u(x[0]) - v); };
  const MatrixField J = [&](const Vec& x) -> Mat { return Mat::Constant(1, 1, du(x[0])); };
  try {
    const Vec x0 = Vec::Constant(1, 0.5 * (sample_lo + sample_hi));
    const double x = newton_solve(F, J, x0, tol, [this](const Vec& p) { return contains(p[0]); }).x[0];
    return x;
  } catch (const GeoError&) {
    return nan;
  }
}

DiffeoMap map_from_separable(const SeparableScale& scale, int dim) {
  if (!scale.u || !scale.du || !scale.d2u) {
    throw GeoError(ErrorKind::invalid_argument, "separable scale '" + scale.name + "' is incomplete");
  }
  if (!(scale.lo < scale.hi) || !(scale.sample_lo < scale.sample_hi) ||
      !scale.contains(scale.sample_lo) || !scale.contains(scale.sample_hi)) {
    throw GeoError(ErrorKind::invalid_argument,
                   "separable scale '" + scale.name + "' has an invalid interval");
  }
  if (scale.monotonicity() == 0) {
    throw GeoError(ErrorKind::invalid_argument,
                   "separable scale '" + scale.name + "' is not strictly monotone");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Domain domain = (scale.lo == -inf && scale.hi == inf) ? Domain::full_space(dim)
                  : (scale.lo == 0.0 && scale.hi == inf) ? Domain::positive_orthant(dim)
                                                          : Domain::box(dim, scale.lo, scale.hi);
  DiffeoMap::Parts parts{
      .name = "separable(" + scale.name + ")",
      .domain = std::move(domain),
      .forward = [scale](const Vec& x) -> Vec { return x.unaryExpr(scale.u); },
      .inverse = [scale](const Vec& y) -> Vec {
        return y.unaryExpr([&scale](double v) { return scale.invert(v); });
      },
      .jacobian = [scale](const Vec& x) -> Mat { return x.unaryExpr(scale.du).asDiagonal(); },
      .second = [scale](const Vec& x) -> Tensor3 {
        const Eigen::Index n = x.size();
        Tensor3 out(static_cast<std::size_t>(n), Mat::Zero(n, n));
        for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)](k, k) = scale.d2u(x[k]);
        return out;
      },
      .sample_box = SampleBox::cube(dim, scale.sample_lo, scale.sample_hi),
      .tol = {},
      .monotonicity = scale.monotonicity(),
  };
  return DiffeoMap(std::move(parts));
}

}  // namespace geo
