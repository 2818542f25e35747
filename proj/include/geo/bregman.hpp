#pragma once

#include "geo/maps.hpp"

#include <string>
#include <utility>
#include <vector>

namespace geo {

/// delta^2_Phi(x, y) = Phi(x) - Phi(y) - <x - y, grad Phi(y)>.
///
/// Argument order matters: the comparison below evaluates the divergence as
/// delta^2(y, x) and the distance as d_U(x, y).
double bregman_divergence(const ConvexPotential& potential, const Vec& x, const Vec& y);

enum class KSign { zero, nonnegative, nonpositive, mixed };
enum class ExpectedInequality { delta_eq_half_d2, delta_le_half_d2, delta_ge_half_d2, none };

const char* to_string(KSign sign) noexcept;
const char* to_string(ExpectedInequality expected) noexcept;

struct KSignSummary {
  KSign sign = KSign::zero;
  double k_min = 0.0;
  double k_max = 0.0;
  int points_probed = 0;
};

/// K_ijk(xi) = sum_m d2U^m/dx_i dx_j (xi) dU^m/dx_k (xi) over every index
/// triple at every sample. A uniform sign is required across all triples;
/// values within `zero_tol` of 0 are sign-neutral.
KSignSummary k_sign_probe(const DiffeoMap& map, const std::vector<Vec>& sample_points,
                          double zero_tol = 1e-12);

ExpectedInequality expected_inequality(KSign sign) noexcept;

using PointPair = std::pair<Vec, Vec>;

struct PairComparison {
  Vec x;
  Vec y;
  double lhs = 0.0;  // delta^2_Phi(y, x)
  double rhs = 0.0;  // d_U(x, y)^2 / 2
};

struct ComparisonVerdict {
  KSignSummary k;
  ExpectedInequality inequality_expected = ExpectedInequality::none;
  int pairs_tested = 0;
  std::vector<PairComparison> pairs;
  std::vector<PairComparison> violations;
  double max_violation = 0.0;
  double factorization_error = 0.0;  // max |Phi'' - J^T J| at pair endpoints

  bool holds() const noexcept { return violations.empty(); }
};

struct ComparisonOptions {
  double tolerance = 1e-9;
  double factorization_tolerance = 1e-4;
  /// K is probed on these points plus every pair endpoint; when empty,
  /// `k_samples` points are drawn from the map's sample box.
  std::vector<Vec> k_points;
  int k_samples = 200;
  std::uint64_t seed = kDefaultSeed;
};

/// Compares delta^2_Phi(y, x) with d_U(x, y)^2 / 2 over `pairs` and records
/// violations of the inequality implied by the sign of K. A mixed sign
/// asserts nothing. Throws invalid_argument when U does not factor Phi''.
ComparisonVerdict compare_divergence_distance(const ConvexPotential& potential,
                                              const DiffeoMap& map,
                                              const std::vector<PointPair>& pairs,
                                              const ComparisonOptions& options = {});

struct TaylorResidual {
  double divergence = 0.0;  // delta^2_Phi(y, x)
  double integral = 0.0;    // int_0^1 (y - g(s))^T Phi''(g(s)) g'(s) ds, g(s) = x + s (y - x)
  double residual = 0.0;
};

TaylorResidual taylor_identity_check(const ConvexPotential& potential, const Vec& x, const Vec& y,
                                     int quad_points);

}  // namespace geo
