#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geo/bregman.hpp"
#include "geo/catalog.hpp"
#include "geo/error.hpp"
#include "geo/geometry.hpp"
#include "geo/hessian_bridge.hpp"
#include "geo/legendre.hpp"
#include "geo/means.hpp"

namespace py = pybind11;
using namespace geo;

namespace {

PyObject* geo_error = nullptr;

Params to_params(const py::dict& d) {
  if (d.empty()) return Params::object();
  const std::string text = py::module_::import("json").attr("dumps")(d).cast<std::string>();
  return Params::parse(text);
}

std::vector<Vec> rows(const Mat& m) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(m.row(i).transpose());
  return out;
}

Mat stack(const std::vector<Vec>& pts) {
  if (pts.empty()) return Mat(0, 0);
  Mat m(static_cast<Eigen::Index>(pts.size()), pts.front().size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized means, pullback geodesics, Bregman and Legendre checks.";

  geo_error = PyErr_NewException("geomeans._core.GeoError", PyExc_ValueError, nullptr);
  m.attr("GeoError") = py::handle(geo_error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const GeoError& e) {
      py::object inst = py::reinterpret_borrow<py::object>(geo_error)(e.what());
      inst.attr("kind") = to_string(e.kind());
      PyErr_SetObject(geo_error, inst.ptr());
    }
  });

  py::class_<DiffeoMap>(m, "DiffeoMap")
      .def_property_readonly("name", &DiffeoMap::name)
      .def_property_readonly("dim", &DiffeoMap::dim)
      .def("forward", &DiffeoMap::forward)
      .def("inverse", &DiffeoMap::inverse)
      .def("jacobian", &DiffeoMap::jacobian)
      .def("metric", [](const DiffeoMap& map, const Vec& x) { return pullback_metric(map, x).g; })
      .def("__repr__", [](const DiffeoMap& map) { return "<DiffeoMap " + map.name() + ">"; });

  py::class_<ConvexPotential>(m, "ConvexPotential")
      .def_property_readonly("name", &ConvexPotential::name)
      .def_property_readonly("dim", &ConvexPotential::dim)
      .def("value", &ConvexPotential::value)
      .def("gradient", &ConvexPotential::gradient)
      .def("hessian", &ConvexPotential::hessian)
      .def("__repr__", [](const ConvexPotential& p) { return "<ConvexPotential " + p.name() + ">"; });

  m.def("builtin_map", [](const std::string& name, int dim, const py::dict& params) {
    return builtin_map(name, dim, to_params(params));
  }, py::arg("name"), py::arg("dim"), py::arg("params") = py::dict());
  m.def("builtin_potential", [](const std::string& name, int dim, const py::dict& params) {
    return builtin_potential(name, dim, to_params(params));
  }, py::arg("name"), py::arg("dim"), py::arg("params") = py::dict());
  m.def("catalog_maps", &catalog_map_names);
  m.def("catalog_potentials", &catalog_potential_names);

  m.def("mean_1d", [](const std::string& scale, const std::vector<double>& xs, const py::dict& params) {
    return generalized_mean_1d(builtin_scale(scale, to_params(params)), xs);
  }, py::arg("scale"), py::arg("xs"), py::arg("params") = py::dict());
  m.def("mean", [](const DiffeoMap& map, const Mat& points, std::optional<std::vector<double>> weights) {
    if (!weights) return generalized_mean_nd(map, rows(points));
    return weighted_mean(map, DiscreteLaw{rows(points), *weights});
  }, py::arg("map"), py::arg("points"), py::arg("weights") = py::none());

  m.def("distance", &geodesic_distance, py::arg("map"), py::arg("x"), py::arg("y"));
  m.def("flow", &geodesic_flow, py::arg("map"), py::arg("x"), py::arg("xi"), py::arg("t"));
  m.def("geodesic", [](const DiffeoMap& map, const Vec& x, const Vec& y, int samples) {
    const GeodesicPath path = geodesic_closed_form(map, x, y, samples);
    return py::make_tuple(path.times, stack(path.points));
  }, py::arg("map"), py::arg("x"), py::arg("y"), py::arg("samples") = 11);

  m.def("bregman_divergence", &bregman_divergence, py::arg("potential"), py::arg("x"), py::arg("y"));
  m.def("compare", [](const ConvexPotential& pot, const DiffeoMap& map, const Mat& xs, const Mat& ys) {
    std::vector<PointPair> pairs;
    const auto a = rows(xs), b = rows(ys);
    if (a.size() != b.size()) throw GeoError(ErrorKind::invalid_argument, "xs and ys differ in length");
    for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
    const ComparisonVerdict v = compare_divergence_distance(pot, map, pairs);
    py::dict out;
    out["k_sign"] = to_string(v.k.sign);
    out["expected"] = to_string(v.inequality_expected);
    out["pairs_tested"] = v.pairs_tested;
    out["violations"] = v.violations.size();
    out["max_violation"] = v.max_violation;
    std::vector<double> lhs, rhs;
    for (const PairComparison& c : v.pairs) {
      lhs.push_back(c.lhs);
      rhs.push_back(c.rhs);
    }
    out["divergence"] = lhs;
    out["half_sq_distance"] = rhs;
    return out;
  }, py::arg("potential"), py::arg("map"), py::arg("xs"), py::arg("ys"));

  m.def("conjugate", [](const ConvexPotential& pot, const Vec& xi) {
    return conjugate(pot, xi, Tolerances{});
  }, py::arg("potential"), py::arg("xi"));

  m.def("map_integrability", [](const DiffeoMap& map, int samples, std::uint64_t seed) {
    const IntegrabilityReport r =
        check_map_integrability(map, sample_points(map.sample_box(), samples, seed), Tolerances{});
    py::dict out;
    out["condition_violation"] = r.condition_violation;
    out["symmetry_violation"] = r.symmetry_violation;
    out["ok"] = r.ok();
    return out;
  }, py::arg("map"), py::arg("samples") = 20, py::arg("seed") = kDefaultSeed);

  m.def("potential_to_map", [](const ConvexPotential& pot, const std::string& kind, std::optional<Vec> base) {
    return potential_to_map(pot, square_root_kind_from_string(kind), base.value_or(pot.sample_box().center()),
                            Tolerances{});
  }, py::arg("potential"), py::arg("kind") = "symmetric_psd", py::arg("base") = py::none());
}
