#include "geo/geometry.hpp"

#include "geo/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace geo {

Mat MetricTensor::inverse() const { return g.ldlt().solve(Mat::Identity(g.rows(), g.cols())); }

MetricTensor pullback_metric(const DiffeoMap& map, const Vec& x) {
  const Mat J = map.jacobian(x);
  const Eigen::FullPivLU<Mat> lu(J);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "pullback_metric: singular Jacobian of " << map.name() << " at (" << x.transpose() << ")";
    throw GeoError(ErrorKind::numerical, os.str());
  }
  return {x, J.transpose() * J};
}

double geodesic_distance(const DiffeoMap& map, const Vec& x, const Vec& y) {
  for (const Vec* p : {&x, &y}) {
    if (!map.domain().contains(*p)) {
      std::ostringstream os;
      os << "geodesic_distance: (" << p->transpose() << ") is outside " << map.domain().describe();
      throw GeoError(ErrorKind::domain, os.str());
    }
  }
  return (map.forward(y) - map.forward(x)).norm();
}

Vec geodesic_flow(const DiffeoMap& map, const Vec& x, const Vec& xi, double t) {
  if (!map.domain().contains(x)) {
    std::ostringstream os;
    os << "geodesic_flow: start (" << x.transpose() << ") is outside " << map.domain().describe();
    throw GeoError(ErrorKind::domain, os.str());
  }
  if (t == 0.0) return x;
  const Vec target = map.forward(x) + t * xi;
  if (auto p = map.try_pull_back(target)) return *p;
  std::ostringstream os;
  os << "geodesic_flow: image point (" << target.transpose() << ") at t = " << t
     << " is not in U(M)";
  throw GeoError(ErrorKind::domain, os.str());
}

GeodesicPath geodesic_closed_form(const DiffeoMap& map, const Vec& x, const Vec& y,
                                  int n_samples) {
  if (n_samples < 2) {
    throw GeoError(ErrorKind::invalid_argument, "geodesic_closed_form needs >= 2 samples");
  }
  if (!map.domain().contains(x) || !map.domain().contains(y)) {
    throw GeoError(ErrorKind::domain, "geodesic_closed_form: endpoint outside the domain");
  }
  const Vec ux = map.forward(x);
  const Vec C = map.forward(y) - ux;
  GeodesicPath path{map, x, y, {}, {}, C, 0.0, true, {}};
  path.times.reserve(static_cast<std::size_t>(n_samples));
  path.points.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    const double t = static_cast<double>(s) / (n_samples - 1);
    auto p = map.try_pull_back(ux + t * C);
    if (!p) {
      std::ostringstream os;
      os << "geodesic_closed_form: image segment leaves U(M) at t = " << t;
      throw GeoError(ErrorKind::domain, os.str());
    }
    path.times.push_back(t);
    path.points.push_back(s == 0 ? x : (s == n_samples - 1 ? y : *p));
  }
  return path;
}

GeodesicPath geodesic_euler_lagrange(const DiffeoMap& map, const Vec& x, const Vec& y,
                                     const Tolerances& tol) {
  if (!map.domain().contains(x) || !map.domain().contains(y)) {
    throw GeoError(ErrorKind::domain, "geodesic_euler_lagrange: endpoint outside the domain");
  }
  const Eigen::Index n = x.size();
  const Vec C = map.forward(y) - map.forward(x);
  const Vec v0 = map.jacobian(x).fullPivLu().solve(C);

  const StateField field = [&map, n](double, const Vec& state) -> Vec {
    const Vec q = state.head(n);
    const Vec v = state.tail(n);
    const Tensor3 H = map.second_derivatives(q);
    Vec rhs(n);
    for (Eigen::Index k = 0; k < n; ++k) rhs[k] = -v.dot(H[static_cast<std::size_t>(k)] * v);
    Vec out(2 * n);
    out.head(n) = v;
    out.tail(n) = map.jacobian(q).fullPivLu().solve(rhs);
    return out;
  };
  Vec state0(2 * n);
  state0 << x, v0;
  const Domain& dom = map.domain();
  const Trajectory traj = rk4_integrate(field, state0, {0.0, 1.0}, tol.ode_steps,
                                        [&dom, n](const Vec& s) { return dom.contains(s.head(n)); });

  GeodesicPath path{map, x, y, traj.times, {}, C, 0.0, true, {}};
  path.points.reserve(traj.states.size());
  for (const Vec& s : traj.states) path.points.push_back(s.head(n));
  path.complete = traj.complete;
  path.diagnostic = traj.diagnostic;
  path.endpoint_error = traj.complete ? (path.points.back() - y).norm()
                                      : std::numeric_limits<double>::infinity();
  if (traj.complete && path.endpoint_error > 1e-4) {
    std::ostringstream os;
    os << "endpoint error " << path.endpoint_error << " exceeds 1e-4";
    path.diagnostic = os.str();
  }
  return path;
}

double HamiltonianTrajectory::energy_drift() const {
  if (energy.empty()) return 0.0;
  double drift = 0.0;
  for (double e : energy) drift = std::max(drift, std::abs(e - energy.front()));
  return drift;
}

namespace {

Mat inverse_metric(const DiffeoMap& map, const Vec& x) {
  const Mat V = map.inverse_jacobian(x);
  return V * V.transpose();
}

}  // namespace

double hamiltonian(const DiffeoMap& map, const PhaseState& state) {
  return 0.5 * state.p.dot(inverse_metric(map, state.x) * state.p);
}

HamiltonianTrajectory hamiltonian_flow(const DiffeoMap& map, const PhaseState& state0,
                                       std::pair<double, double> t_span, const Tolerances& tol) {
  if (!map.domain().contains(state0.x)) {
    throw GeoError(ErrorKind::domain, "hamiltonian_flow: initial position outside the domain");
  }
  const Eigen::Index n = state0.x.size();
  const Membership inside = map.domain().membership();
  const MatrixField ginv = [&map](const Vec& x) { return inverse_metric(map, x); };

  const StateField field = [&](double, const Vec& s) -> Vec {
    const Vec x = s.head(n);
    const Vec p = s.tail(n);
    const std::vector<Mat> dginv = fd_matrix_partials(ginv, x, tol, inside, 4);
    Vec out(2 * n);
    out.head(n) = ginv(x) * p;
    for (Eigen::Index k = 0; k < n; ++k) {
      out[n + k] = -0.5 * p.dot(dginv[static_cast<std::size_t>(k)] * p);
    }
    return out;
  };
  Vec y0(2 * n);
  y0 << state0.x, state0.p;
  const Trajectory traj = rk4_integrate(field, y0, t_span, tol.ode_steps,
                                        [&inside, n](const Vec& s) { return inside(s.head(n)); });

  HamiltonianTrajectory out;
  out.times = traj.times;
  out.complete = traj.complete;
  out.diagnostic = traj.diagnostic;
  out.states.reserve(traj.states.size());
  out.energy.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    PhaseState ps{traj.states[i].head(n), traj.states[i].tail(n)};
    double energy = 0.0;
    try {
      energy = hamiltonian(map, ps);
    } catch (const GeoError& e) {
      // state is finite but the metric degenerated there
      std::ostringstream os;
      os << "integration stopped at t = " << traj.times[i] << ": " << e.what();
      out.times.resize(i);
      out.complete = false;
      out.diagnostic = os.str();
      break;
    }
    out.energy.push_back(energy);
    out.states.push_back(std::move(ps));
  }
  return out;
}

Vec initial_momentum(const DiffeoMap& map, const Vec& x, const Vec& y) {
  const Vec C = map.forward(y) - map.forward(x);
  return map.jacobian(x).transpose() * C;
}

TransformedState transformed_momenta(const DiffeoMap& map, const PhaseState& state) {
  return {map.forward(state.x), map.inverse_jacobian(state.x).transpose() * state.p};
}

double BracketReport::max_deviation() const { return std::max({max_yy, max_pipi, max_ypi}); }

BracketReport check_canonical(const DiffeoMap& map, const Vec& x, const Tolerances& tol,
                              int momentum_draws, std::uint64_t seed) {
  if (!map.domain().contains(x)) {
    throw GeoError(ErrorKind::domain, "check_canonical: point outside the domain");
  }
  const Eigen::Index n = x.size();
  const Domain& dom = map.domain();
  // Phase-space function w = (x, p) -> (y, pi).
  const VectorField Z = [&map, n](const Vec& w) -> Vec {
    const TransformedState t = transformed_momenta(map, {w.head(n), w.tail(n)});
    Vec out(2 * n);
    out << t.y, t.pi;
    return out;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  BracketReport report;
  for (int draw = 0; draw < momentum_draws; ++draw) {
    Vec w(2 * n);
    w.head(n) = x;
    for (Eigen::Index k = 0; k < n; ++k) w[n + k] = unit(rng);
    const Mat D = fd_jacobian(Z, w, tol, [&dom, n](const Vec& v) { return dom.contains(v.head(n)); });
    const Mat Dx = D.leftCols(n);
    const Mat Dp = D.rightCols(n);
    const Mat B = Dx * Dp.transpose() - Dp * Dx.transpose();
    report.max_yy = std::max(report.max_yy, B.topLeftCorner(n, n).cwiseAbs().maxCoeff());
    report.max_pipi = std::max(report.max_pipi, B.bottomRightCorner(n, n).cwiseAbs().maxCoeff());
    report.max_ypi = std::max(
        report.max_ypi, (B.topRightCorner(n, n) - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
    ++report.phase_points;
  }
  return report;
}

MomentumReport verify_momentum_constancy(const GeodesicPath& path, const Tolerances&) {
  if (path.points.size() < 3) {
    throw GeoError(ErrorKind::invalid_argument, "verify_momentum_constancy needs >= 3 samples");
  }
  std::vector<Vec> images;
  images.reserve(path.points.size());
  for (const Vec& p : path.points) images.push_back(path.map.forward(p));

  MomentumReport report;
  for (std::size_t s = 1; s + 1 < images.size(); ++s) {
    const Vec rate = (images[s + 1] - images[s - 1]) / (path.times[s + 1] - path.times[s - 1]);
    report.max_rate_deviation =
        std::max(report.max_rate_deviation, (rate - path.momenta).cwiseAbs().maxCoeff());
  }
  report.endpoint_deviation =
      (images.back() - images.front() - path.momenta).cwiseAbs().maxCoeff();
  return report;
}

ArclengthReport closed_form_arclength(const DiffeoMap& map, const Vec& x, const Vec& y,
                                      int quad_points) {
  const Vec C = map.forward(y) - map.forward(x);
  const QuadratureRule rule = gauss_legendre(quad_points);
  constexpr double h = 1e-5;
  ArclengthReport report;
  report.distance = C.norm();
  report.min_speed = std::numeric_limits<double>::infinity();
  report.max_speed = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = rule.nodes[q];
    const Vec xt = geodesic_flow(map, x, C, t);
    const Vec vel = (geodesic_flow(map, x, C, t + h) - geodesic_flow(map, x, C, t - h)) / (2.0 * h);
    const double speed = std::sqrt(vel.dot(pullback_metric(map, xt).g * vel));
    report.arclength += rule.weights[q] * speed;
    report.min_speed = std::min(report.min_speed, speed);
    report.max_speed = std::max(report.max_speed, speed);
  }
  return report;
}

FlowReport flow_semigroup_check(const DiffeoMap& map, const Vec& x, const Vec& xi, double t,
                                double s) {
  FlowReport r;
  r.direct = geodesic_flow(map, x, xi, t + s);
  r.composed = geodesic_flow(map, geodesic_flow(map, x, xi, t), xi, s);
  r.deviation = (r.direct - r.composed).cwiseAbs().maxCoeff();
  return r;
}

PredictorReport kernel_predictor_check(const DiffeoMap& map, const Vec& x, const Vec& xi,
                                       double t, double s) {
  PredictorReport r;
  r.current = geodesic_flow(map, x, xi, t);
  r.predictor = geodesic_flow(map, r.current, xi, s);
  r.realized = s == 0.0 ? r.current : geodesic_flow(map, x, xi, t + s);
  r.deviation = (r.predictor - r.realized).cwiseAbs().maxCoeff();
  return r;
}

double sup_distance(const std::vector<double>& ta, const std::vector<Vec>& a,
                    const std::vector<double>& tb, const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = ta[i];
    while (j + 2 < tb.size() && tb[j + 1] < t) ++j;
    Vec bt;
    if (tb.size() == 1) {
      bt = b.front();
    } else {
      const double span = tb[j + 1] - tb[j];
      const double w = span > 0 ? std::clamp((t - tb[j]) / span, 0.0, 1.0) : 0.0;
      bt = (1.0 - w) * b[j] + w * b[j + 1];
    }
    worst = std::max(worst, (a[i] - bt).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace geo
