#include "geo/catalog.hpp"

#include "geo/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace geo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void bad_param(const std::string& what) {
  throw GeoError(ErrorKind::invalid_argument, what);
}

double number(const Params& params, const char* key, double fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) bad_param(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::string word(const Params& params, const char* key) {
  if (!params.is_object() || !params.contains(key) || !params.at(key).is_string()) {
    bad_param(std::string("missing string parameter '") + key + "'");
  }
  return params.at(key).get<std::string>();
}

void require_dim(int dim) {
  if (dim < 1) bad_param("dimension must be >= 1, got " + std::to_string(dim));
}

SampleBox box_with_overrides(const Params& params, int dim, double lo, double hi) {
  return SampleBox::cube(dim, number(params, "sample_lo", lo), number(params, "sample_hi", hi));
}

// Separable potentials sum a 1-D convex phi with known derivatives up to
// third order and an explicit inverse of phi'.
struct ScalarConvex {
  std::string name;
  double lo, hi;  // open interval of definition
  std::function<double(double)> phi, d1, d2, d3, d1_inverse;
  double range_lo, range_hi;  // range of phi'
  double sample_lo, sample_hi;
  double floor;  // min of phi'' on the sample interval
};

ScalarConvex scalar_convex(const std::string& name, const Params& params) {
  if (name == "exp") {
    auto e = [](double x) { return std::exp(x); };
    const double slo = number(params, "sample_lo", -2.0);
    return {"exp", -kInf, kInf, e, e, e, e, [](double v) { return v > 0 ? std::log(v) : kNaN; },
            0.0, kInf, slo, number(params, "sample_hi", 2.0), std::exp(slo)};
  }
  if (name == "xlogx") {
    const double shi = number(params, "sample_hi", 4.0);
    return {"xlogx", 0.0, kInf,
            [](double x) { return x * std::log(x) - x; },
            [](double x) { return std::log(x); },
            [](double x) { return 1.0 / x; },
            [](double x) { return -1.0 / (x * x); },
            [](double v) { return std::exp(v); },
            -kInf, kInf, number(params, "sample_lo", 0.5), shi, 1.0 / shi};
  }
  if (name == "neglog") {
    const double shi = number(params, "sample_hi", 4.0);
    return {"neglog", 0.0, kInf,
            [](double x) { return -std::log(x); },
            [](double x) { return -1.0 / x; },
            [](double x) { return 1.0 / (x * x); },
            [](double x) { return -2.0 / (x * x * x); },
            [](double v) { return v < 0 ? -1.0 / v : kNaN; },
            -kInf, 0.0, number(params, "sample_lo", 0.5), shi, 1.0 / (shi * shi)};
  }
  if (name == "power") {
    const double p = number(params, "p", kNaN);
    if (!(p > 1.0) || !std::isfinite(p)) bad_param("separable power potential needs p > 1");
    const double slo = number(params, "sample_lo", 0.5);
    const double shi = number(params, "sample_hi", 3.0);
    auto d2 = [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); };
    return {"power", 0.0, kInf,
            [p](double x) { return std::pow(x, p); },
            [p](double x) { return p * std::pow(x, p - 1.0); },
            d2,
            [p](double x) { return p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0); },
            [p](double v) { return v > 0 ? std::pow(v / p, 1.0 / (p - 1.0)) : kNaN; },
            0.0, kInf, slo, shi, std::min(d2(slo), d2(shi))};
  }
  bad_param("unknown separable potential phi '" + name + "'");
}

Domain interval_domain(int dim, double lo, double hi) {
  if (lo == -kInf && hi == kInf) return Domain::full_space(dim);
  if (lo == 0.0 && hi == kInf) return Domain::positive_orthant(dim);
  return Domain::box(dim, lo, hi);
}

void check_requested_domain(const Params& params, const Domain& natural, const std::string& who) {
  if (!params.is_object() || !params.contains("domain")) return;
  const std::string requested = word(params, "domain");
  const bool compatible =
      (requested == "full_space" && natural.kind() == Domain::Kind::full_space) ||
      (requested == "positive_orthant" && (natural.kind() == Domain::Kind::positive_orthant ||
                                           natural.kind() == Domain::Kind::full_space));
  if (!compatible) {
    bad_param(who + " is not defined on '" + requested + "' (natural domain " +
              natural.describe() + ")");
  }
}

Mat matrix_param(const Params& params, int dim) {
  if (!params.is_object() || !params.contains("matrix") || !params.at("matrix").is_array()) {
    bad_param("quadratic_form needs a 'matrix' parameter");
  }
  const auto& rows = params.at("matrix");
  if (static_cast<int>(rows.size()) != dim) bad_param("quadratic_form matrix must be dim x dim");
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dim) {
      bad_param("quadratic_form matrix must be dim x dim");
    }
    for (int j = 0; j < dim; ++j) A(i, j) = rows[i][j].get<double>();
  }
  return A;
}

}  // namespace

SeparableScale builtin_scale(std::string_view name_view, const Params& params) {
  const std::string name(name_view);
  SeparableScale s;
  s.name = name;
  if (name == "linear" || name == "identity") {
    const double a = name == "identity" ? 1.0 : number(params, "a", 1.0);
    const double b = name == "identity" ? 0.0 : number(params, "b", 0.0);
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) bad_param("linear scale needs finite a != 0");
    s.u = [a, b](double x) { return a * x + b; };
    s.du = [a](double) { return a; };
    s.d2u = [](double) { return 0.0; };
    s.inverse = [a, b](double v) { return (v - b) / a; };
    s.sample_lo = -3.0;
    s.sample_hi = 3.0;
  } else if (name == "log") {
    s.lo = 0.0;
    s.u = [](double x) { return std::log(x); };
    s.du = [](double x) { return 1.0 / x; };
    s.d2u = [](double x) { return -1.0 / (x * x); };
    s.inverse = [](double v) { return std::exp(v); };
    s.sample_lo = 0.5;
    s.sample_hi = 4.0;
  } else if (name == "exp_half") {
    s.u = [](double x) { return 2.0 * std::exp(0.5 * x); };
    s.du = [](double x) { return std::exp(0.5 * x); };
    s.d2u = [](double x) { return 0.5 * std::exp(0.5 * x); };
    s.inverse = [](double v) { return v > 0 ? 2.0 * std::log(0.5 * v) : kNaN; };
    s.sample_lo = -2.0;
    s.sample_hi = 2.0;
  } else if (name == "power") {
    const double p = number(params, "p", kNaN);
    if (p == 0.0 || !std::isfinite(p)) bad_param("power scale needs finite p != 0");
    s.lo = 0.0;
    s.u = [p](double x) { return std::pow(x, p); };
    s.du = [p](double x) { return p * std::pow(x, p - 1.0); };
    s.d2u = [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); };
    s.inverse = [p](double v) { return v > 0 ? std::pow(v, 1.0 / p) : kNaN; };
    s.sample_lo = 0.5;
    s.sample_hi = 3.0;
  } else if (name == "reciprocal") {
    s.lo = 0.0;
    s.u = [](double x) { return 1.0 / x; };
    s.du = [](double x) { return -1.0 / (x * x); };
    s.d2u = [](double x) { return 2.0 / (x * x * x); };
    s.inverse = [](double v) { return 1.0 / v; };
    s.sample_lo = 0.5;
    s.sample_hi = 3.0;
  } else {
    bad_param("unknown separable scale '" + name + "'");
  }
  s.sample_lo = number(params, "sample_lo", s.sample_lo);
  s.sample_hi = number(params, "sample_hi", s.sample_hi);
  return s;
}

DiffeoMap builtin_map(std::string_view name_view, int dim, const Params& params) {
  const std::string name(name_view);
  require_dim(dim);
  if (name == "identity") {
    return DiffeoMap({
        .name = "identity",
        .domain = Domain::full_space(dim),
        .forward = [](const Vec& x) -> Vec { return x; },
        .inverse = [](const Vec& y) -> Vec { return y; },
        .jacobian = [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); },
        .second = [dim](const Vec&) -> Tensor3 {
          return Tensor3(static_cast<std::size_t>(dim), Mat::Zero(dim, dim));
        },
        .sample_box = box_with_overrides(params, dim, -3.0, 3.0),
    });
  }
  if (name == "separable") {
    return map_from_separable(builtin_scale(word(params, "u"), params), dim);
  }
  if (name == "sphere_inversion") {
    auto invert = [](const Vec& x) -> Vec { return x / x.squaredNorm(); };
    return DiffeoMap({
        .name = "sphere_inversion",
        .domain = Domain::punctured_space(dim),
        .forward = invert,
        .inverse = invert,
        .jacobian = [dim](const Vec& x) -> Mat {
          const double r2 = x.squaredNorm();
          return Mat::Identity(dim, dim) / r2 - 2.0 * x * x.transpose() / (r2 * r2);
        },
        .second = [dim](const Vec& x) -> Tensor3 {
          const double r2 = x.squaredNorm();
          const double r4 = r2 * r2;
          const double r6 = r4 * r2;
          Tensor3 out(static_cast<std::size_t>(dim), Mat(dim, dim));
          for (int k = 0; k < dim; ++k) {
            for (int i = 0; i < dim; ++i) {
              for (int j = 0; j < dim; ++j) {
                const double lin = (k == i ? x[j] : 0.0) + (k == j ? x[i] : 0.0) + (i == j ? x[k] : 0.0);
                out[static_cast<std::size_t>(k)](i, j) = -2.0 * lin / r4 + 8.0 * x[k] * x[i] * x[j] / r6;
              }
            }
          }
          return out;
        },
        .sample_box = box_with_overrides(params, dim, 0.5, 2.0),
    });
  }
  if (name == "gradient_of") {
    if (!params.is_object() || !params.contains("potential")) {
      bad_param("gradient_of needs a nested 'potential' specification");
    }
    const ConvexPotential pot = potential_from_spec(params.at("potential"), dim);
    DiffeoMap::Parts parts{
        .name = "gradient_of(" + pot.name() + ")",
        .domain = pot.domain(),
        .forward = [pot](const Vec& x) { return pot.gradient(x); },
        .inverse = {},
        .jacobian = [pot](const Vec& x) { return pot.hessian(x); },
        .second = [pot](const Vec& x) { return pot.third_derivatives(x); },
        .sample_box = pot.sample_box(),
    };
    if (pot.has_gradient_inverse()) {
      parts.inverse = [pot](const Vec& xi) { return pot.gradient_inverse(xi); };
    }
    return DiffeoMap(std::move(parts));
  }
  bad_param("unknown map '" + name + "'");
}

ConvexPotential builtin_potential(std::string_view name_view, int dim, const Params& params) {
  const std::string name(name_view);
  require_dim(dim);
  if (name == "quadratic") {
    check_requested_domain(params, Domain::full_space(dim), "quadratic");
    return ConvexPotential({
        .name = "quadratic",
        .domain = Domain::full_space(dim),
        .value = [](const Vec& x) { return 0.5 * x.squaredNorm(); },
        .gradient = [](const Vec& x) -> Vec { return x; },
        .hessian = [dim](const Vec&) -> Mat { return Mat::Identity(dim, dim); },
        .third = [dim](const Vec&) {
          return Tensor3(static_cast<std::size_t>(dim), Mat::Zero(dim, dim));
        },
        .gradient_inverse = [](const Vec& xi) -> Vec { return xi; },
        .gradient_range = std::nullopt,
        .eigen_floor = 1.0,
        .sample_box = box_with_overrides(params, dim, -3.0, 3.0),
    });
  }
  if (name == "separable") {
    const ScalarConvex c = scalar_convex(word(params, "phi"), params);
    Domain domain = interval_domain(dim, c.lo, c.hi);
    check_requested_domain(params, domain, "separable " + c.name);
    return ConvexPotential({
        .name = "separable(" + c.name + ")",
        .domain = std::move(domain),
        .value = [c](const Vec& x) { return x.unaryExpr(c.phi).sum(); },
        .gradient = [c](const Vec& x) -> Vec { return x.unaryExpr(c.d1); },
        .hessian = [c](const Vec& x) -> Mat { return x.unaryExpr(c.d2).asDiagonal(); },
        .third = [c](const Vec& x) {
          const Eigen::Index n = x.size();
          Tensor3 out(static_cast<std::size_t>(n), Mat::Zero(n, n));
          for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)](k, k) = c.d3(x[k]);
          return out;
        },
        .gradient_inverse = [c](const Vec& xi) -> Vec { return xi.unaryExpr(c.d1_inverse); },
        .gradient_range = interval_domain(dim, c.range_lo, c.range_hi),
        .eigen_floor = c.floor,
        .sample_box = SampleBox::cube(dim, c.sample_lo, c.sample_hi),
    });
  }
  if (name == "quadratic_form") {
    const Mat A = matrix_param(params, dim);
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
      bad_param("quadratic_form matrix must be symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Mat> eig(A);
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmin > 0)) {
      std::ostringstream os;
      os << "quadratic_form matrix is not SPD (smallest eigenvalue " << lmin << ")";
      bad_param(os.str());
    }
    check_requested_domain(params, Domain::full_space(dim), "quadratic_form");
    const Eigen::LLT<Mat> llt(A);
    return ConvexPotential({
        .name = "quadratic_form",
        .domain = Domain::full_space(dim),
        .value = [A](const Vec& x) { return 0.5 * x.dot(A * x); },
        .gradient = [A](const Vec& x) -> Vec { return A * x; },
        .hessian = [A](const Vec&) -> Mat { return A; },
        .third = [dim](const Vec&) {
          return Tensor3(static_cast<std::size_t>(dim), Mat::Zero(dim, dim));
        },
        .gradient_inverse = [llt](const Vec& xi) -> Vec { return llt.solve(xi); },
        .gradient_range = std::nullopt,
        .eigen_floor = lmin,
        .sample_box = box_with_overrides(params, dim, -3.0, 3.0),
    });
  }
  bad_param("unknown potential '" + name + "'");
}

DiffeoMap map_from_spec(const Params& spec, int dim) {
  return builtin_map(word(spec, "name"), dim, spec);
}

ConvexPotential potential_from_spec(const Params& spec, int dim) {
  return builtin_potential(word(spec, "name"), dim, spec);
}

std::vector<std::string> catalog_map_names() {
  return {"identity", "separable", "sphere_inversion", "gradient_of"};
}

std::vector<std::string> catalog_potential_names() {
  return {"quadratic", "separable", "quadratic_form"};
}

}  // namespace geo
