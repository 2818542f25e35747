#pragma once

#include "geo/types.hpp"

#include <string>
#include <vector>

namespace geo {

struct Tolerances {
  double fd_step = 1e-5;  // relative; actual step is fd_step * (1 + |x_i|)
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  int ode_steps = 1000;
  int quad_points = 32;
  double spd_eig_floor = 1e-12;

  /// Throws invalid_argument unless every real field is > 0 and every
  /// integer field is >= 1.
  void validate() const;
};

enum class SquareRootKind { cholesky_transpose, symmetric_psd };

const char* to_string(SquareRootKind kind) noexcept;
SquareRootKind square_root_kind_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Finite differences. Every stencil point is tested against `inside` (when
// given) and a domain error is raised before the field is evaluated there.

Vec fd_gradient(const ScalarField& f, const Vec& x, const Tolerances& tol,
                const Membership& inside = {});

/// Symmetrized central-difference Hessian; the result is exactly symmetric.
Mat fd_hessian(const ScalarField& f, const Vec& x, const Tolerances& tol,
               const Membership& inside = {});

/// Central-difference Jacobian, rows indexed by output component.
Mat fd_jacobian(const VectorField& f, const Vec& x, const Tolerances& tol,
                const Membership& inside = {});

/// Central differences of a matrix field, one matrix per direction:
/// `out[j] = dM/dx_j`. `order` is 2 (3-point stencil) or 4 (5-point).
std::vector<Mat> fd_matrix_partials(const MatrixField& f, const Vec& x, const Tolerances& tol,
                                    const Membership& inside = {}, int order = 2);

// ---------------------------------------------------------------------------
// Fixed-step classical RK4.

using StateField = std::function<Vec(double t, const Vec& y)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  bool complete = true;
  std::string diagnostic;  // set when the run stopped early
};

/// Integrates from t_span.first to t_span.second in `steps` equal steps.
/// Stops at the first state rejected by `admissible` or the first field
/// evaluation that throws or returns non-finite values; the partial
/// trajectory is returned with `complete == false`.
Trajectory rk4_integrate(const StateField& field, const Vec& y0,
                         std::pair<double, double> t_span, int steps,
                         const Membership& admissible = {});

// ---------------------------------------------------------------------------

struct NewtonResult {
  Vec x;
  double residual = 0.0;
  int iterations = 0;
};

/// Damped Newton: the step is halved (up to 30 times) while it leaves
/// `inside` or fails to decrease ||F||. Throws numerical on iteration
/// exhaustion or a pivot below tol.spd_eig_floor.
NewtonResult newton_solve(const VectorField& F, const MatrixField& J, const Vec& x0,
                          const Tolerances& tol, const Membership& inside = {});

/// S with S^T S = A. cholesky_transpose returns the upper-triangular factor,
/// symmetric_psd the unique symmetric positive root. Throws numerical when
/// the smallest eigenvalue is below `eig_floor`.
Mat spd_sqrt(const Mat& A, SquareRootKind kind, double eig_floor = 1e-12);

// ---------------------------------------------------------------------------
// Quadrature and line integrals.

/// Gauss-Legendre rule mapped to [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(int points);

/// Piecewise-C1 curve. Each segment is parameterized over [0, 1].
class Path {
 public:
  struct Segment {
    std::function<Vec(double)> position;
    std::function<Vec(double)> velocity;
  };

  static Path straight(const Vec& from, const Vec& to);
  static Path polyline(const std::vector<Vec>& vertices);
  /// Moves coordinate 0 first, then coordinate 1, and so on.
  static Path staircase(const Vec& from, const Vec& to);

  Path& add_segment(Segment segment);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  /// Vertices of polyline and staircase paths (empty for custom segments).
  const std::vector<Vec>& vertices() const noexcept { return vertices_; }

 private:
  std::vector<Segment> segments_;
  std::vector<Vec> vertices_;
};

/// Sum over segments of the integral of F(gamma(s)) gamma'(s) ds.
Vec path_line_integral(const MatrixField& F, const Path& path, int quad_points);

/// Sum over segments of the integral of <F(gamma(s)), gamma'(s)> ds.
double path_line_integral_scalar(const VectorField& F, const Path& path, int quad_points);

/// Per-coordinate finite-difference step for `x`.
Vec fd_steps(const Vec& x, const Tolerances& tol);

}  // namespace geo
