#include "geo/numerics.hpp"

#include "geo/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace geo {

void Tolerances::validate() const {
  auto bad = [](const char* field, double value) {
    std::ostringstream os;
    os << "tolerance field '" << field << "' must be positive, got " << value;
    throw GeoError(ErrorKind::invalid_argument, os.str());
  };
  if (!(fd_step > 0)) bad("fd_step", fd_step);
  if (!(newton_tol > 0)) bad("newton_tol", newton_tol);
  if (!(spd_eig_floor > 0)) bad("spd_eig_floor", spd_eig_floor);
  if (newton_max_iter < 1) bad("newton_max_iter", newton_max_iter);
  if (ode_steps < 1) bad("ode_steps", ode_steps);
  if (quad_points < 1) bad("quad_points", quad_points);
}

const char* to_string(SquareRootKind kind) noexcept {
  return kind == SquareRootKind::cholesky_transpose ? "cholesky_transpose" : "symmetric_psd";
}

SquareRootKind square_root_kind_from_string(const std::string& name) {
  if (name == "cholesky_transpose" || name == "cholesky") return SquareRootKind::cholesky_transpose;
  if (name == "symmetric_psd" || name == "symmetric") return SquareRootKind::symmetric_psd;
  throw GeoError(ErrorKind::invalid_argument, "unknown square root kind '" + name + "'");
}

Vec fd_steps(const Vec& x, const Tolerances& tol) {
  return tol.fd_step * (1.0 + x.array().abs()).matrix();
}

namespace {

void check_stencil(const Membership& inside, const Vec& p, const char* who) {
  if (inside && !inside(p)) {
    std::ostringstream os;
    os << who << ": stencil point (" << p.transpose() << ") leaves the domain";
    throw GeoError(ErrorKind::domain, os.str());
  }
}

double eval_at(const ScalarField& f, const Membership& inside, const Vec& p, const char* who) {
  check_stencil(inside, p, who);
  return f(p);
}

}  // namespace

Vec fd_gradient(const ScalarField& f, const Vec& x, const Tolerances& tol,
                const Membership& inside) {
  const Vec h = fd_steps(x, tol);
  Vec grad(x.size());
  Vec p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h[i];
    const double fp = eval_at(f, inside, p, "fd_gradient");
    p[i] = x[i] - h[i];
    const double fm = eval_at(f, inside, p, "fd_gradient");
    p[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h[i]);
  }
  return grad;
}

Mat fd_hessian(const ScalarField& f, const Vec& x, const Tolerances& tol,
               const Membership& inside) {
  const Eigen::Index n = x.size();
  const Vec h = fd_steps(x, tol);
  const double f0 = eval_at(f, inside, x, "fd_hessian");
  Mat H(n, n);
  Vec p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = x[i] + h[i];
    const double fp = eval_at(f, inside, p, "fd_hessian");
    p[i] = x[i] - h[i];
    const double fm = eval_at(f, inside, p, "fd_hessian");
    p[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      auto corner = [&](double si, double sj) {
        Vec q = x;
        q[i] += si * h[i];
        q[j] += sj * h[j];
        return eval_at(f, inside, q, "fd_hessian");
      };
      const double v = (corner(1, 1) - corner(1, -1) - corner(-1, 1) + corner(-1, -1)) /
                       (4.0 * h[i] * h[j]);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

Mat fd_jacobian(const VectorField& f, const Vec& x, const Tolerances& tol,
                const Membership& inside) {
  const Vec h = fd_steps(x, tol);
  Mat J;
  Vec p = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    p[j] = x[j] + h[j];
    check_stencil(inside, p, "fd_jacobian");
    const Vec fp = f(p);
    p[j] = x[j] - h[j];
    check_stencil(inside, p, "fd_jacobian");
    const Vec fm = f(p);
    p[j] = x[j];
    if (j == 0) J.resize(fp.size(), x.size());
    J.col(j) = (fp - fm) / (2.0 * h[j]);
  }
  return J;
}

std::vector<Mat> fd_matrix_partials(const MatrixField& f, const Vec& x, const Tolerances& tol,
                                    const Membership& inside, int order) {
  if (order != 2 && order != 4) {
    throw GeoError(ErrorKind::invalid_argument, "fd_matrix_partials: order must be 2 or 4");
  }
  const Vec h = fd_steps(x, tol);
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  Vec p = x;
  auto at = [&](Eigen::Index j, double offset) {
    p[j] = x[j] + offset;
    check_stencil(inside, p, "fd_matrix_partials");
    Mat m = f(p);
    p[j] = x[j];
    return m;
  };
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const Mat d1 = at(j, h[j]) - at(j, -h[j]);
    if (order == 2) {
      out.push_back(d1 / (2.0 * h[j]));
    } else {
      const Mat d2 = at(j, 2.0 * h[j]) - at(j, -2.0 * h[j]);
      out.push_back((8.0 * d1 - d2) / (12.0 * h[j]));
    }
  }
  return out;
}

Trajectory rk4_integrate(const StateField& field, const Vec& y0,
                         std::pair<double, double> t_span, int steps,
                         const Membership& admissible) {
  if (steps < 1) {
    throw GeoError(ErrorKind::invalid_argument, "rk4_integrate requires steps >= 1");
  }
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);

  const auto [t0, t1] = t_span;
  const double dt = (t1 - t0) / steps;
  Vec y = y0;
  traj.times.push_back(t0);
  traj.states.push_back(y);

  auto stop = [&](int step, const std::string& why) {
    std::ostringstream os;
    os << "integration stopped at step " << step << " (t = " << t0 + step * dt << "): " << why;
    traj.complete = false;
    traj.diagnostic = os.str();
  };

  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    Vec next;
    try {
      const Vec k1 = field(t, y);
      const Vec k2 = field(t + 0.5 * dt, y + 0.5 * dt * k1);
      const Vec k3 = field(t + 0.5 * dt, y + 0.5 * dt * k2);
      const Vec k4 = field(t + dt, y + dt * k3);
      next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const std::exception& e) {
      stop(s, std::string("field evaluation failed: ") + e.what());
      return traj;
    }
    if (!next.allFinite()) {
      stop(s + 1, "non-finite state");
      return traj;
    }
    if (admissible && !admissible(next)) {
      stop(s + 1, "state left the admissible set");
      return traj;
    }
    y = std::move(next);
    // The last time is pinned to t1 so both endpoints appear exactly.
    traj.times.push_back(s + 1 == steps ? t1 : t0 + (s + 1) * dt);
    traj.states.push_back(y);
  }
  return traj;
}

NewtonResult newton_solve(const VectorField& F, const MatrixField& J, const Vec& x0,
                          const Tolerances& tol, const Membership& inside) {
  constexpr int kMaxHalvings = 30;
  Vec x = x0;
  Vec fx = F(x);
  double res = fx.norm();
  for (int iter = 0; iter < tol.newton_max_iter; ++iter) {
    if (res <= tol.newton_tol) return {x, res, iter};

    const Eigen::FullPivLU<Mat> lu(J(x));
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= tol.spd_eig_floor)) {
      std::ostringstream os;
      os << "newton_solve: singular Jacobian at (" << x.transpose() << "), pivot " << min_pivot;
      throw GeoError(ErrorKind::numerical, os.str());
    }
    const Vec step = lu.solve(-fx);

    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h, lambda *= 0.5) {
      const Vec trial = x + lambda * step;
      if (inside && !inside(trial)) continue;
      const Vec ft = F(trial);
      const double rt = ft.norm();
      if (std::isfinite(rt) && rt < res) {
        x = trial;
        fx = ft;
        res = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "newton_solve: no decreasing step after " << kMaxHalvings
         << " halvings, residual " << res;
      throw GeoError(ErrorKind::numerical, os.str());
    }
  }
  if (res <= tol.newton_tol) return {x, res, tol.newton_max_iter};
  std::ostringstream os;
  os << "newton_solve: " << tol.newton_max_iter << " iterations exhausted, residual " << res;
  throw GeoError(ErrorKind::numerical, os.str());
}

Mat spd_sqrt(const Mat& A, SquareRootKind kind, double eig_floor) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw GeoError(ErrorKind::invalid_argument, "spd_sqrt requires a non-empty square matrix");
  }
  const Mat sym = 0.5 * (A + A.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmin >= eig_floor)) {
    std::ostringstream os;
    os << "spd_sqrt: matrix is not positive definite, smallest eigenvalue " << lmin;
    throw GeoError(ErrorKind::numerical, os.str());
  }
  if (kind == SquareRootKind::symmetric_psd) {
    const Mat& V = eig.eigenvectors();
    return V * eig.eigenvalues().cwiseSqrt().asDiagonal() * V.transpose();
  }
  const Eigen::LLT<Mat> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw GeoError(ErrorKind::numerical, "spd_sqrt: Cholesky factorization failed");
  }
  return llt.matrixU();
}

QuadratureRule gauss_legendre(int points) {
  if (points < 1) {
    throw GeoError(ErrorKind::invalid_argument, "gauss_legendre requires at least one point");
  }
  const int n = points;
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // Newton on P_n from the Chebyshev-like initial guesses; roots are
  // symmetric so only half are computed.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + z);
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
  return rule;
}

Path Path::straight(const Vec& from, const Vec& to) { return polyline({from, to}); }

Path Path::polyline(const std::vector<Vec>& vertices) {
  if (vertices.size() < 2) {
    throw GeoError(ErrorKind::invalid_argument, "a polyline needs at least two vertices");
  }
  Path path;
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    const Vec a = vertices[k];
    const Vec d = vertices[k + 1] - vertices[k];
    path.add_segment({[a, d](double s) -> Vec { return a + s * d; },
                      [d](double) -> Vec { return d; }});
  }
  path.vertices_ = vertices;
  return path;
}

Path Path::staircase(const Vec& from, const Vec& to) {
  std::vector<Vec> vertices{from};
  Vec corner = from;
  for (Eigen::Index k = 0; k < from.size(); ++k) {
    if (corner[k] == to[k]) continue;
    corner[k] = to[k];
    vertices.push_back(corner);
  }
  if (vertices.size() == 1) vertices.push_back(to);
  return polyline(vertices);
}

Path& Path::add_segment(Segment segment) {
  segments_.push_back(std::move(segment));
  vertices_.clear();
  return *this;
}

Vec path_line_integral(const MatrixField& F, const Path& path, int quad_points) {
  const QuadratureRule rule = gauss_legendre(quad_points);
  Vec total;
  for (const auto& seg : path.segments()) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = rule.nodes[q];
      const Vec term = rule.weights[q] * (F(seg.position(s)) * seg.velocity(s));
      if (total.size() == 0) total = Vec::Zero(term.size());
      total += term;
    }
  }
  return total;
}

double path_line_integral_scalar(const VectorField& F, const Path& path, int quad_points) {
  const QuadratureRule rule = gauss_legendre(quad_points);
  double total = 0.0;
  for (const auto& seg : path.segments()) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = rule.nodes[q];
      total += rule.weights[q] * F(seg.position(s)).dot(seg.velocity(s));
    }
  }
  return total;
}

}  // namespace geo
