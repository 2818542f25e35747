#pragma once

#include "geo/maps.hpp"

#include <vector>

namespace geo {

/// A potential together with the inverse of its gradient, which is the
/// gradient of its Fenchel-Legendre conjugate.
///
/// The dual side lives on the actual range of grad Phi (for sum e^{x_i} that
/// is the positive orthant, not R^n). Newton failure on a dual point is
/// reported as a domain error: the point is outside that range.
struct ConjugatePair {
  ConvexPotential primal;
  VectorField grad_inverse;
  bool analytic_inverse = false;
  Domain dual_domain;
  SampleBox dual_box;
  Tolerances tol;
  double dual_fd_step = 1e-4;  // step for differencing conjugate values

  /// (grad Phi)^{-1}(xi).
  Vec primal_point(const Vec& xi) const;
};

/// Uses the analytic gradient inverse when the potential has one, unless
/// `force_newton` is set.
ConjugatePair make_conjugate_pair(const ConvexPotential& potential, const Tolerances& tol,
                                  bool force_newton = false);

/// Phi*(xi) = <xi, x> - Phi(x) at x = (grad Phi)^{-1}(xi).
double conjugate(const ConjugatePair& pair, const Vec& xi);
double conjugate(const ConvexPotential& potential, const Vec& xi, const Tolerances& tol);

/// Brute-force sup of <xi, x> - Phi(x) over a regular grid on `box`.
double conjugate_grid_search(const ConvexPotential& potential, const Vec& xi,
                             const SampleBox& box, int points_per_dim);

/// Phi* as a potential on the dual domain: gradient (grad Phi)^{-1}, Hessian
/// by central differences of conjugate values with step `dual_fd_step`.
ConvexPotential dual_potential(const ConjugatePair& pair);

/// Phi*'' by central differences of conjugate values.
Mat conjugate_hessian(const ConjugatePair& pair, const Vec& xi);

/// max |fd grad Phi*(xi) - (grad Phi)^{-1}(xi)|.
double check_gradient_inverse(const ConjugatePair& pair, const Vec& xi);

/// max |Phi*''(xi) Phi''((grad Phi)^{-1}(xi)) - I|.
double check_hessian_product(const ConjugatePair& pair, const Vec& xi);

/// |Phi*(grad Phi(x)) + Phi(x) - <grad Phi(x), x>|.
double fenchel_gap(const ConjugatePair& pair, const Vec& x);

/// U*(xi) = U((grad Phi)^{-1}(xi)). Throws invalid_argument when U does not
/// factor the primal Hessian on the primal sample box.
DiffeoMap dual_map(const ConjugatePair& pair, const DiffeoMap& map);

struct DualGeodesicReport {
  double trajectory_deviation = 0.0;  // grad Phi(x(t)) vs the dual closed-form geodesic
  double speed_deviation = 0.0;       // xi'^T Phi*'' xi' vs x'^T Phi'' x'
  int samples = 0;
};

DualGeodesicReport dual_geodesic_check(const ConjugatePair& pair, const DiffeoMap& map,
                                       const Vec& x1, const Vec& x2, int n_samples);

struct DualDistanceReport {
  double dual_distance = 0.0;    // d_{U*}(xi1, xi2)
  double primal_distance = 0.0;  // d_U(x1, x2)
  double deviation = 0.0;
};

DualDistanceReport dual_distance_check(const ConjugatePair& pair, const DiffeoMap& map,
                                       const Vec& x1, const Vec& x2);

}  // namespace geo
