#pragma once

#include "geo/maps.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace geo {

/// Pullback of the Euclidean metric at a point: g = J^T J.
struct MetricTensor {
  Vec at;
  Mat g;

  Mat inverse() const;
};

/// Sampled curve on [0, 1] together with its image-space momenta
/// C = U(end) - U(start).
struct GeodesicPath {
  DiffeoMap map;
  Vec start;
  Vec end;
  std::vector<double> times;
  std::vector<Vec> points;
  Vec momenta;
  double endpoint_error = 0.0;  // |x(1) - end|
  bool complete = true;
  std::string diagnostic;
};

/// Canonical coordinates (x, p) on the cotangent bundle.
struct PhaseState {
  Vec x;
  Vec p;
};

MetricTensor pullback_metric(const DiffeoMap& map, const Vec& x);

/// |U(y) - U(x)|.
double geodesic_distance(const DiffeoMap& map, const Vec& x, const Vec& y);

/// Geodesic flow U^{-1}(U(x) + t xi) with xi an image-space velocity. Throws
/// domain when the image point does not pull back.
Vec geodesic_flow(const DiffeoMap& map, const Vec& x, const Vec& xi, double t);

/// x(t) = U^{-1}(U(x) + t C), t = s / (n_samples - 1). Throws domain with the
/// offending t when the image segment leaves U(M).
GeodesicPath geodesic_closed_form(const DiffeoMap& map, const Vec& x, const Vec& y,
                                  int n_samples);

/// Integrates J(x) x'' + sum_{n,l} U_{,nl} x'_n x'_l = 0 by RK4 from x with
/// J(x) x'(0) = C. Samples are the tol.ode_steps + 1 integrator states.
/// `endpoint_error` above 1e-4 is flagged in `diagnostic`.
GeodesicPath geodesic_euler_lagrange(const DiffeoMap& map, const Vec& x, const Vec& y,
                                     const Tolerances& tol);

struct HamiltonianTrajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<double> energy;
  bool complete = true;
  std::string diagnostic;

  double energy_drift() const;
};

/// H(x, p) = p^T g^{-1}(x) p / 2.
double hamiltonian(const DiffeoMap& map, const PhaseState& state);

/// RK4 on Hamilton's equations with dH/dx by fourth-order central differences
/// of g^{-1}.
HamiltonianTrajectory hamiltonian_flow(const DiffeoMap& map, const PhaseState& state0,
                                       std::pair<double, double> t_span, const Tolerances& tol);

/// Momentum p = g(x) x'(0) that sends the Hamiltonian flow from x to y at t=1.
Vec initial_momentum(const DiffeoMap& map, const Vec& x, const Vec& y);

struct TransformedState {
  Vec y;
  Vec pi;
};

/// y = U(x), pi_i = sum_j p_j V^j_i.
TransformedState transformed_momenta(const DiffeoMap& map, const PhaseState& state);

struct BracketReport {
  double max_yy = 0.0;     // max |[y^i, y^j]|
  double max_pipi = 0.0;   // max |[pi_i, pi_j]|
  double max_ypi = 0.0;    // max |[y^i, pi_j] - delta_ij|
  int phase_points = 0;

  double max_deviation() const;
};

/// Poisson brackets of (y, pi) by central differences at `x` and
/// `momentum_draws` random momenta in [-1, 1]^n.
BracketReport check_canonical(const DiffeoMap& map, const Vec& x, const Tolerances& tol,
                              int momentum_draws = 10, std::uint64_t seed = kDefaultSeed);

struct MomentumReport {
  double max_rate_deviation = 0.0;  // max |d/dt U(x(t)) - C| at interior samples
  double endpoint_deviation = 0.0;  // |U(x(1)) - U(x(0)) - C|
};

/// Central differences of U(x(t)) along the samples. Needs >= 3 samples.
MomentumReport verify_momentum_constancy(const GeodesicPath& path, const Tolerances& tol);

struct ArclengthReport {
  double arclength = 0.0;
  double distance = 0.0;
  double min_speed = 0.0;
  double max_speed = 0.0;

  double speed_spread() const { return max_speed - min_speed; }
};

/// Gauss-Legendre quadrature of sqrt(x'^T g x') along the closed-form
/// geodesic, with x' taken by central differences in t.
ArclengthReport closed_form_arclength(const DiffeoMap& map, const Vec& x, const Vec& y,
                                      int quad_points);

struct FlowReport {
  Vec direct;    // U(t + s, x)
  Vec composed;  // U(s, U(t, x))
  double deviation = 0.0;
};

FlowReport flow_semigroup_check(const DiffeoMap& map, const Vec& x, const Vec& xi, double t,
                                double s);

/// The transition kernel is a point mass at the flow, so E[X(t+s) | X_t] is
/// the flow from X_t. `predictor` is U(s, X_t), `realized` is X(t+s).
struct PredictorReport {
  Vec current;    // X_t
  Vec predictor;  // U(s, X_t)
  Vec realized;   // U(t + s, x)
  double deviation = 0.0;
};

PredictorReport kernel_predictor_check(const DiffeoMap& map, const Vec& x, const Vec& xi,
                                       double t, double s);

/// Sup-norm distance between two sampled paths on the same time grid, by
/// linear interpolation of `b` at the times of `a`.
double sup_distance(const std::vector<double>& ta, const std::vector<Vec>& a,
                    const std::vector<double>& tb, const std::vector<Vec>& b);

}  // namespace geo
