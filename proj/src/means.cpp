#include "geo/means.hpp"

#include "geo/error.hpp"
#include <limits>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace geo {

DiscreteLaw DiscreteLaw::uniform(std::vector<Vec> points) {
  const std::size_t m = points.size();
  return {std::move(points), std::vector<double>(m, m ? 1.0 / static_cast<double>(m) : 0.0)};
}

void DiscreteLaw::validate(const Domain& domain) const {
  if (points.empty()) throw GeoError(ErrorKind::invalid_argument, "law has no support points");
  if (points.size() != weights.size()) {
    throw GeoError(ErrorKind::invalid_argument, "law has mismatched points and weights");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw GeoError(ErrorKind::invalid_argument, "law weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "law weights sum to " << total << ", expected 1";
    throw GeoError(ErrorKind::invalid_argument, os.str());
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!domain.contains(points[i])) {
      std::ostringstream os;
      os << "support point " << i << " (" << points[i].transpose() << ") is outside "
         << domain.describe();
      throw GeoError(ErrorKind::domain, os.str());
    }
  }
}

double generalized_mean_1d(const SeparableScale& scale, const std::vector<double>& xs) {
  if (xs.empty()) throw GeoError(ErrorKind::invalid_argument, "generalized_mean_1d: empty input");
  double acc = 0.0;
  for (double x : xs) {
    if (!scale.contains(x)) {
      std::ostringstream os;
      os << "generalized_mean_1d: " << x << " is outside the interval of '" << scale.name << "'";
      throw GeoError(ErrorKind::domain, os.str());
    }
    acc += scale.u(x);
  }
  const double c = scale.invert(acc / static_cast<double>(xs.size()));
  if (!std::isfinite(c)) {
    throw GeoError(ErrorKind::convexity, "generalized_mean_1d: average is outside u(I)");
  }
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return std::clamp(c, *lo, *hi);
}

Vec generalized_mean_nd(const DiffeoMap& map, const std::vector<Vec>& points) {
  return weighted_mean(map, DiscreteLaw::uniform(points));
}

Vec weighted_mean(const DiffeoMap& map, const DiscreteLaw& law) {
  law.validate(map.domain());
  Vec avg = Vec::Zero(map.dim());
  for (std::size_t i = 0; i < law.points.size(); ++i) {
    avg += law.weights[i] * map.forward(law.points[i]);
  }
  if (auto c = map.try_pull_back(avg)) return *c;
  std::ostringstream os;
  os << "U-average (" << avg.transpose() << ") is not in U(M) for map " << map.name()
     << "; the image of the domain is not convex here";
  throw GeoError(ErrorKind::convexity, os.str());
}

std::vector<BlockPrediction> conditional_predictor(
    const DiffeoMap& map, const DiscreteLaw& law,
    const std::vector<std::vector<std::size_t>>& partition) {
  law.validate(map.domain());
  std::vector<int> seen(law.points.size(), 0);
  std::vector<BlockPrediction> out;
  for (const auto& block : partition) {
    if (block.empty()) throw GeoError(ErrorKind::invalid_argument, "partition has an empty block");
    double mass = 0.0;
    for (std::size_t idx : block) {
      if (idx >= law.points.size()) {
        throw GeoError(ErrorKind::invalid_argument, "partition index out of range");
      }
      if (seen[idx]++) throw GeoError(ErrorKind::invalid_argument, "partition blocks overlap");
      mass += law.weights[idx];
    }
    if (!(mass > 0.0)) throw GeoError(ErrorKind::invalid_argument, "partition block has zero weight");
    DiscreteLaw conditional;
    for (std::size_t idx : block) {
      conditional.points.push_back(law.points[idx]);
      conditional.weights.push_back(law.weights[idx] / mass);
    }
    // Renormalized weights may miss 1 by a few ulps.
    const double total = std::accumulate(conditional.weights.begin(), conditional.weights.end(), 0.0);
    for (double& w : conditional.weights) w /= total;
    out.push_back({block, weighted_mean(map, conditional)});
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw GeoError(ErrorKind::invalid_argument, "partition does not cover every point");
  }
  return out;
}

double mean_objective(const DiffeoMap& map, const std::vector<Vec>& points, const Vec& c) {
  const Vec uc = map.forward(c);
  double total = 0.0;
  for (const Vec& x : points) total += (map.forward(x) - uc).squaredNorm();
  return total;
}

MinimalityReport verify_mean_minimizes(const DiffeoMap& map, const std::vector<Vec>& points,
                                       const Vec& candidate, int trials, std::uint64_t seed) {
  if (points.empty()) throw GeoError(ErrorKind::invalid_argument, "no points to compare against");
  if (!map.domain().contains(candidate)) {
    throw GeoError(ErrorKind::domain, "candidate mean is outside the domain");
  }
  MinimalityReport report;
  report.objective = mean_objective(map, points, candidate);
  report.min_margin = std::numeric_limits<double>::infinity();

  double spread = 0.0;
  for (const Vec& x : points) spread = std::max(spread, (x - candidate).norm());
  if (!(spread > 0.0)) spread = 1.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double radius : {1e-2, 1e-1, 5e-1}) {
    for (int t = 0; t < trials; ++t) {
      Vec dir(candidate.size());
      for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = normal(rng);
      const Vec trial = candidate + (radius * spread / dir.norm()) * dir;
      if (!map.domain().contains(trial)) {
        ++report.trials_skipped;
        continue;
      }
      const double margin = mean_objective(map, points, trial) - report.objective;
      ++report.trials_run;
      report.min_margin = std::min(report.min_margin, margin);
      if (margin < 0.0) ++report.negative_margins;
    }
  }
  return report;
}

}  // namespace geo
