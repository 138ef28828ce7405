#pragma once

#include <vector>

#include "porb/action.hpp"
#include "porb/plane.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace porb {

/// One energy sample h = |v|^2/2 - U at a segment midpoint.
struct EnergySample {
  double t = 0.0;
  double h = 0.0;
};

struct EnergyStats {
  double mean = 0.0;
  double spread = 0.0;  // max |h - mean| over the window
  int count = 0;        // samples inside the window
};

/// Energy at every segment midpoint of the positive-time half, using the
/// segment difference quotient as velocity. Throws CollisionError when a
/// midpoint is within `delta` of a center.
std::vector<EnergySample> energy_profile(
    const ProblemSpec& spec, const OddTrajectory& traj,
    double delta = kDefaultCollisionDelta);

/// Mean and spread of the energy samples whose times fall in the centered
/// window covering `window_fraction` of [0, n]. The excluded end segments
/// carry the largest discretization error. window_fraction in (0, 1].
EnergyStats energy_stats(const ProblemSpec& spec, const OddTrajectory& traj,
                         double window_fraction = 0.8,
                         double delta = kDefaultCollisionDelta);

/// Max over nodes of |second difference / step^2 - grad U| with odd
/// reflection closing the stencil at the origin. Zero exactly when the nodes
/// solve the central-difference scheme; second order in step on minimizers
/// of the discrete action. Needs at least 3 free nodes.
double el_residual(const ProblemSpec& spec, const OddTrajectory& traj,
                   double delta = kDefaultCollisionDelta);

/// Margin of the pointwise zero-energy bound U(p) >= (2|p|^2 + 1/2)^(-a/2)
/// at a single feasible point (positive means the bound holds strictly).
double kinetic_bound_margin(const ProblemSpec& spec, Vec2 point,
                            double delta = kDefaultCollisionDelta);

/// kinetic_bound_margin at the anchor and every node of the trajectory.
std::vector<double> zero_energy_kinetic_bound(
    const ProblemSpec& spec, const OddTrajectory& traj,
    double delta = kDefaultCollisionDelta);

/// One row of a continuation sweep. Margins are filled in against the
/// certificate constants after the row's minimization run.
struct SweepRow {
  double n = 0.0;
  int node_count = 0;
  double a_n = 0.0;
  double h_n = 0.0;
  double energy_spread = 0.0;
  double sup_norm = 0.0;
  double min_speed = 0.0;
  double el_residual = 0.0;
  double terminal_speed = 0.0;
  bool converged = false;
  int iterations = 0;
  double action_margin = 0.0;
  double energy_margin = 0.0;
  double supnorm_margin = 0.0;
  bool supnorm_vacuous = true;
};

/// Assembled continuation sweep: certificate constants, per-horizon rows in
/// increasing n, and the fitted log-log growth slope of a_n (NaN when fewer
/// than 3 converged rows are available).
struct ContinuationReport {
  double alpha = 0.0;
  double beta = 0.0;  // exponent the certificate constants are evaluated at
  double theta = 0.0;
  double c = 0.0;
  std::vector<SweepRow> rows;
  double fitted_theta = 0.0;
};

/// Margin of one certified inequality at horizon n. `vacuous` marks rows
/// where the bound has no content (e.g. a nonpositive sup-norm floor).
struct BoundMargin {
  double n = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool vacuous = false;
};

/// margin = c n^theta - a_n per row. The certificate requires margins
/// above -0.01 * threshold (1% quadrature allowance).
std::vector<BoundMargin> certify_action_bound(const std::vector<SweepRow>& rows,
                                              const BoundConstants& k);

/// margin = (c/2) n^(theta-1) - h_n per row; h_n itself must be negative,
/// which the caller checks from the rows.
std::vector<BoundMargin> certify_energy_bound(const std::vector<SweepRow>& rows,
                                              const BoundConstants& k);

/// threshold = ((2 n^(1-theta) / c)^(2/alpha) - 5/4) / 2, a floor for
/// sup_norm^2; margin = sup_norm^2 - threshold. Rows where the floor is not
/// positive are marked vacuous.
std::vector<BoundMargin> certify_supnorm_growth(
    const std::vector<SweepRow>& rows, const BoundConstants& k, double alpha);

/// True when each consecutive value is at least (1 - slack) times its
/// predecessor. Used for the sup-norm trend (slack 0.01) and, applied to
/// reversed |h_n|, the energy trend (slack 0.05).
bool nondecreasing_within(const std::vector<double>& values, double slack);

/// Sup over a fixed grid in [a, b] (samples_per_unit per unit time) of the
/// pointwise distance between consecutive trajectories. Throws WindowError
/// when [a, b] sticks out of some trajectory's time range.
std::vector<double> window_convergence(const std::vector<OddTrajectory>& trajs,
                                       double a, double b,
                                       int samples_per_unit = 64);

/// Fourth-order one-step integration of q'' = grad U(q).
struct OdePath {
  std::vector<double> t;
  std::vector<Vec2> q;
  std::vector<Vec2> v;
  double energy_drift = 0.0;  // |h(T) - h(0)|
};

OdePath integrate_ode(const ProblemSpec& spec, Vec2 q0, Vec2 v0, double total,
                      double dt, double delta = kDefaultCollisionDelta);

/// Least-squares slope of log(value) against log(n). Needs >= 3 points with
/// positive entries; InsufficientDataError otherwise.
double fit_growth_exponent(const std::vector<double>& horizons,
                           const std::vector<double>& values);
double fit_growth_exponent(const std::vector<SweepRow>& rows);

}  // namespace porb
