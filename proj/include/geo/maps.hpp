#pragma once

#include "geo/domain.hpp"
#include "geo/numerics.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace geo {

enum class DerivativeSource { analytic, finite_difference, newton, quadrature };

const char* to_string(DerivativeSource source) noexcept;

/// A C2 diffeomorphism U from its domain onto U(domain).
///
/// Components left empty at construction are filled in numerically:
/// the Jacobian and second derivatives by central differences, the inverse by
/// damped Newton started from the sample-box center. Each map reports which
/// route it uses. Objects are immutable once built.
class DiffeoMap {
 public:
  struct Parts {
    std::string name;
    Domain domain;
    VectorField forward;
    VectorField inverse;         // optional
    MatrixField jacobian;        // optional; rows = components, J(k, i) = dU^k/dx_i
    Tensor3Field second;         // optional; second(x)[k](i, j) = d2U^k/dx_i dx_j
    SampleBox sample_box;
    Tolerances tol{};
    int monotonicity = 0;        // +1 / -1 for separable scales, 0 otherwise
  };

  explicit DiffeoMap(Parts parts);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return domain_.dim(); }
  const Domain& domain() const noexcept { return domain_; }
  const SampleBox& sample_box() const noexcept { return box_; }
  int monotonicity() const noexcept { return monotonicity_; }

  Vec forward(const Vec& x) const { return forward_(x); }
  Vec inverse(const Vec& y) const { return inverse_(y); }
  Mat jacobian(const Vec& x) const { return jacobian_(x); }
  Tensor3 second_derivatives(const Vec& x) const { return second_(x); }

  /// V = J^{-1}, the Jacobian of the inverse map, by linear solve. Throws
  /// numerical when J is singular.
  Mat inverse_jacobian(const Vec& x) const;

  /// Pulls `y` back and accepts it when U^{-1}(y) is in the domain and
  /// U(U^{-1}(y)) reproduces y within `rel_tol * (1 + |y|)`.
  std::optional<Vec> try_pull_back(const Vec& y, double rel_tol = 1e-8) const;

  DerivativeSource jacobian_source() const noexcept { return jacobian_source_; }
  DerivativeSource second_source() const noexcept { return second_source_; }
  DerivativeSource inverse_source() const noexcept { return inverse_source_; }

 private:
  std::string name_;
  Domain domain_;
  VectorField forward_;
  VectorField inverse_;
  MatrixField jacobian_;
  Tensor3Field second_;
  SampleBox box_;
  int monotonicity_;
  DerivativeSource jacobian_source_;
  DerivativeSource second_source_;
  DerivativeSource inverse_source_;
};

/// Strictly convex C2 function with gradient and Hessian.
class ConvexPotential {
 public:
  struct Parts {
    std::string name;
    Domain domain;
    ScalarField value;
    VectorField gradient;        // optional
    MatrixField hessian;         // optional
    Tensor3Field third;          // optional; third(x)[k](i, j) = d3 Phi / dx_k dx_i dx_j
    VectorField gradient_inverse;  // optional
    std::optional<Domain> gradient_range;  // defaults to R^n
    std::optional<double> eigen_floor;     // valid on the sample box
    SampleBox sample_box;
    Tolerances tol{};
    DerivativeSource supplied = DerivativeSource::analytic;  // label for supplied derivatives
  };

  explicit ConvexPotential(Parts parts);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return domain_.dim(); }
  const Domain& domain() const noexcept { return domain_; }
  const SampleBox& sample_box() const noexcept { return box_; }
  const Domain& gradient_range() const noexcept { return range_; }
  std::optional<double> eigen_floor() const noexcept { return floor_; }

  double value(const Vec& x) const { return value_(x); }
  Vec gradient(const Vec& x) const { return gradient_(x); }
  Mat hessian(const Vec& x) const { return hessian_(x); }
  Tensor3 third_derivatives(const Vec& x) const { return third_(x); }

  bool has_gradient_inverse() const noexcept { return static_cast<bool>(gradient_inverse_); }
  /// Analytic (grad Phi)^{-1}; throws invalid_argument when none was supplied.
  Vec gradient_inverse(const Vec& xi) const;

  DerivativeSource gradient_source() const noexcept { return gradient_source_; }
  DerivativeSource hessian_source() const noexcept { return hessian_source_; }
  DerivativeSource third_source() const noexcept { return third_source_; }

 private:
  std::string name_;
  Domain domain_;
  ScalarField value_;
  VectorField gradient_;
  MatrixField hessian_;
  Tensor3Field third_;
  VectorField gradient_inverse_;
  Domain range_;
  std::optional<double> floor_;
  SampleBox box_;
  DerivativeSource gradient_source_;
  DerivativeSource hessian_source_;
  DerivativeSource third_source_;
};

/// Strictly monotone C2 change of scale u on an open interval.
struct SeparableScale {
  std::string name;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::function<double(double)> u;
  std::function<double(double)> du;
  std::function<double(double)> d2u;
  std::function<double(double)> inverse;  // optional; Newton when empty
  double sample_lo = -1.0;  // compact sub-interval for sampling
  double sample_hi = 1.0;

  bool contains(double x) const { return std::isfinite(x) && x > lo && x < hi; }
  /// +1 increasing, -1 decreasing (judged from u' at the sample midpoint).
  int monotonicity() const;
  /// u^{-1}(v), analytic when available. Returns NaN when v is not in u(I).
  double invert(double v) const;
};

/// U^k(x) = u(x_k) on I^n with Jacobian diag(u'(x_i)).
DiffeoMap map_from_separable(const SeparableScale& scale, int dim);

}  // namespace geo
