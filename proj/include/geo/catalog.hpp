#pragma once

#include "geo/maps.hpp"

#include "json.hpp"

#include <string_view>
#include <vector>

namespace geo {

/// Key-value parameters for catalog entries, e.g. {"u": "power", "p": 2}.
using Params = nlohmann::json;

/// Scales: linear(a, b), identity, log, exp_half (u = 2 e^{x/2}), power(p),
/// reciprocal (u = 1/x, decreasing). Optional `sample_lo` / `sample_hi`
/// override the sampling interval.
SeparableScale builtin_scale(std::string_view name, const Params& params = Params::object());

/// Maps: identity, separable (param `u` names the scale), sphere_inversion
/// (x / |x|^2 on R^n \ {0}), gradient_of (param `potential` is a nested
/// {"name": ..., ...} object).
DiffeoMap builtin_map(std::string_view name, int dim, const Params& params = Params::object());

/// Potentials: quadratic (|x|^2 / 2), separable (param `phi` in exp, xlogx,
/// neglog, power with p > 1), quadratic_form (param `matrix`, SPD).
ConvexPotential builtin_potential(std::string_view name, int dim,
                                  const Params& params = Params::object());

/// Build from a {"name": ..., params...} object.
DiffeoMap map_from_spec(const Params& spec, int dim);
ConvexPotential potential_from_spec(const Params& spec, int dim);

std::vector<std::string> catalog_map_names();
std::vector<std::string> catalog_potential_names();

}  // namespace geo
