#pragma once

#include "geo/maps.hpp"

#include <limits>
#include <vector>

namespace geo {

/// Evidence for building a map out of a square root S of a Hessian.
struct FactorizationReport {
  SquareRootKind kind = SquareRootKind::symmetric_psd;
  double curl_violation = 0.0;  // max |dS_ij/dx_k - dS_ik/dx_j|
  bool curl_condition_ok = false;
  double min_singular_value = 0.0;  // of S over the samples
  double min_abs_det = 0.0;
  bool jacobian_invertible_ok = false;
  double max_inverse_norm = 0.0;  // max ||S^{-1}||_2
  double inverse_norm_bound = std::numeric_limits<double>::quiet_NaN();  // 1/sqrt(a)
  bool bound_ok = true;  // vacuous when no eigen floor is declared
  std::vector<Vec> sample_points;

  bool ok() const noexcept { return curl_condition_ok && jacobian_invertible_ok && bound_ok; }
};

/// Evidence for building a potential out of a map.
struct IntegrabilityReport {
  double condition_violation = 0.0;  // max over (i, j, k) of the mixed-partial mismatch
  bool condition_ok = false;
  double symmetry_violation = 0.0;  // max |g_ij - g_ji|
  bool symmetry_ok = false;
  std::vector<Vec> sample_points;

  bool ok() const noexcept { return condition_ok && symmetry_ok; }
};

struct BridgeOptions {
  double threshold = 1e-3;  // integrability thresholds; finite-difference noise aware
  int samples = 50;
  std::uint64_t seed = kDefaultSeed;
};

FactorizationReport check_sqrt_integrability(const ConvexPotential& potential, SquareRootKind kind,
                                             const std::vector<Vec>& sample_points,
                                             const Tolerances& tol, double threshold = 1e-3);

/// U(x) = integral of S along the straight segment base -> x, so U(base) = 0
/// and J = S. Refuses (integrability error) when the curl check fails on the
/// potential's sample points.
DiffeoMap potential_to_map(const ConvexPotential& potential, SquareRootKind kind,
                           const Vec& base_point, const Tolerances& tol,
                           const BridgeOptions& options = {});

/// Checks
///   sum_m U^m_{ki} U^m_j == sum_m U^m_{ij} U^m_k   for all i, j, k.
IntegrabilityReport check_map_integrability(const DiffeoMap& map,
                                            const std::vector<Vec>& sample_points,
                                            const Tolerances& tol, double threshold = 1e-3);

/// Potential with Hessian g = J^T J, built by integrating along the
/// coordinate staircase from `base_point`:
///   A^i(x) = sum_k int g_ik dxi_k,   Phi(x) = sum_k int A^k dxi_k,
/// with A(base) = 0 and Phi(base) = 0. Its gradient is A; its Hessian is a
/// finite-difference Jacobian of A.
ConvexPotential map_to_potential(const DiffeoMap& map, const Vec& base_point,
                                 const Tolerances& tol, const BridgeOptions& options = {});

/// A(x) along the straight segment instead of the staircase; used to check
/// path independence.
Vec staircase_gradient(const DiffeoMap& map, const Vec& base_point, const Vec& x, int quad_points);
Vec straight_gradient(const DiffeoMap& map, const Vec& base_point, const Vec& x, int quad_points);

}  // namespace geo
