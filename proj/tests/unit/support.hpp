#pragma once

#include "geo/catalog.hpp"
#include "geo/error.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace geo::test {

inline Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

struct NamedMap {
  std::string label;
  DiffeoMap map;
};

// Every catalog map family in dimension 2 (sphere inversion included).
inline std::vector<NamedMap> catalog_maps() {
  using P = Params;
  std::vector<NamedMap> out;
  out.push_back({"identity", builtin_map("identity", 2)});
  out.push_back({"linear", builtin_map("separable", 2, P{{"u", "linear"}, {"a", 2.0}, {"b", -1.0}})});
  out.push_back({"log", builtin_map("separable", 2, P{{"u", "log"}})});
  out.push_back({"exp_half", builtin_map("separable", 2, P{{"u", "exp_half"}})});
  out.push_back({"power", builtin_map("separable", 2, P{{"u", "power"}, {"p", 2.0}})});
  out.push_back({"reciprocal", builtin_map("separable", 2, P{{"u", "reciprocal"}})});
  out.push_back({"sphere_inversion", builtin_map("sphere_inversion", 2)});
  out.push_back({"gradient_of_exp",
                 builtin_map("gradient_of", 2, P{{"potential", {{"name", "separable"}, {"phi", "exp"}}}})});
  return out;
}

struct NamedPotential {
  std::string label;
  ConvexPotential potential;
};

inline std::vector<NamedPotential> catalog_potentials() {
  using P = Params;
  std::vector<NamedPotential> out;
  out.push_back({"quadratic", builtin_potential("quadratic", 2)});
  out.push_back({"exp", builtin_potential("separable", 2, P{{"phi", "exp"}})});
  out.push_back({"xlogx", builtin_potential("separable", 2, P{{"phi", "xlogx"}})});
  out.push_back({"neglog", builtin_potential("separable", 2, P{{"phi", "neglog"}})});
  out.push_back({"power3", builtin_potential("separable", 2, P{{"phi", "power"}, {"p", 3.0}})});
  out.push_back({"quadratic_form",
                 builtin_potential("quadratic_form", 2, P{{"matrix", {{2.0, 1.0}, {1.0, 3.0}}}})});
  return out;
}

}  // namespace geo::test
