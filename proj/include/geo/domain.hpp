#pragma once

#include "geo/types.hpp"

#include <string>

namespace geo {

/// Open subset of R^n on which maps and potentials live.
///
/// Boxes may carry infinite bounds, so half-lines such as (-inf, 0)^n are
/// expressed as boxes. The punctured space R^n \ {0} is the only non-convex
/// kind and is rejected wherever convexity is required.
class Domain {
 public:
  enum class Kind { box, positive_orthant, punctured_space, full_space };

  static Domain box(Vec lo, Vec hi);
  static Domain box(int dim, double lo, double hi);
  static Domain positive_orthant(int dim);
  static Domain punctured_space(int dim);
  static Domain full_space(int dim);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool is_convex() const noexcept { return kind_ != Kind::punctured_space; }

  /// Finite, correctly sized, and strictly inside.
  bool contains(const Vec& x) const;

  /// Product domains (box, orthant, full space) contain every axis-aligned
  /// staircase between two of their points.
  bool is_product() const noexcept { return kind_ != Kind::punctured_space; }

  /// Lower/upper bounds per coordinate (infinite where unbounded).
  const Vec& lower() const noexcept { return lo_; }
  const Vec& upper() const noexcept { return hi_; }

  Membership membership() const;
  std::string describe() const;

 private:
  Domain(Kind kind, int dim, Vec lo, Vec hi);

  Kind kind_;
  int dim_;
  Vec lo_;
  Vec hi_;
};

/// Compact axis-aligned region used to draw reproducible sample points.
struct SampleBox {
  Vec lo;
  Vec hi;

  static SampleBox cube(int dim, double lo, double hi);
  Vec center() const { return 0.5 * (lo + hi); }
};

/// `count` uniform points in `box` from a mt19937_64 seeded with `seed`.
std::vector<Vec> sample_points(const SampleBox& box, int count,
                               std::uint64_t seed = kDefaultSeed);

}  // namespace geo
