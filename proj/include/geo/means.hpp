#pragma once

#include "geo/maps.hpp"

#include <cstdint>
#include <vector>

namespace geo {

/// Finite probability law on points of a map's domain.
struct DiscreteLaw {
  std::vector<Vec> points;
  std::vector<double> weights;

  static DiscreteLaw uniform(std::vector<Vec> points);
  /// Throws invalid_argument for negative weights, sums off 1 by more than
  /// 1e-12, size mismatches, or empty support; domain when a point is outside.
  void validate(const Domain& domain) const;
};

/// u^{-1}(mean of u(x_i)). The result is clamped into [min xs, max xs].
double generalized_mean_1d(const SeparableScale& scale, const std::vector<double>& xs);

/// U^{-1}((1/M) sum U(x_m)). Throws convexity when the U-average does not
/// pull back into the domain.
Vec generalized_mean_nd(const DiffeoMap& map, const std::vector<Vec>& points);

/// U^{-1}(sum p_i U(x_i)).
Vec weighted_mean(const DiffeoMap& map, const DiscreteLaw& law);

struct BlockPrediction {
  std::vector<std::size_t> indices;
  Vec point;
};

/// Discrete conditional predictor: the weighted mean of each block's law with
/// weights renormalized inside the block.
std::vector<BlockPrediction> conditional_predictor(
    const DiffeoMap& map, const DiscreteLaw& law,
    const std::vector<std::vector<std::size_t>>& partition);

struct MinimalityReport {
  double objective = 0.0;        // sum of squared d_U distances at the candidate
  double min_margin = 0.0;       // min over trials of objective(perturbed) - objective
  int trials_run = 0;
  int trials_skipped = 0;        // perturbed point outside the domain
  int negative_margins = 0;
  bool minimal() const noexcept { return negative_margins == 0; }
};

/// Sum of d_U(x_m, c)^2.
double mean_objective(const DiffeoMap& map, const std::vector<Vec>& points, const Vec& c);

/// Compares the objective at `candidate` against `trials` random
/// perturbations at each radius 1e-2, 1e-1, 5e-1 times the spread of the
/// points around the candidate.
MinimalityReport verify_mean_minimizes(const DiffeoMap& map, const std::vector<Vec>& points,
                                       const Vec& candidate, int trials,
                                       std::uint64_t seed = kDefaultSeed);

}  // namespace geo
