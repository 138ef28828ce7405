#pragma once

#include <vector>

#include "porb/plane.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace porb {

/// Discrete action of an odd trajectory together with its exact gradient.
struct ActionEvaluation {
  double value = 0.0;      // kinetic + potential
  double kinetic = 0.0;    // integral of |q'|^2 / 2 over [-n,n], exact for
                           // the polygonal path
  double potential = 0.0;  // integral of U(q), segment-midpoint quadrature
  std::vector<Vec2> gradient;  // d(value)/d(p_k), one entry per free node
  double min_center_distance = 0.0;  // over anchor, nodes, and midpoints
};

/// Growth certificate constants for the y-axis power test family.
struct BoundConstants {
  double beta = 0.0;
  double theta = 0.0;  // max(2*beta - 1, 1 - alpha*beta)
  double c = 0.0;      // beta^2/(2*beta - 1) + 2/(1 - alpha*beta)
};

/// Evaluates the action functional over [-n, n] and its gradient with
/// respect to the free nodes. Kinetic part is exact for the polygonal
/// interpolant; the potential part uses the midpoint of each segment, doubled
/// from [0, n] by oddness. The gradient is the exact derivative of the
/// returned discrete value. Requires mu = 1/2 (SymmetryError otherwise);
/// throws CollisionError when a node or segment midpoint comes within
/// `delta` of a center.
ActionEvaluation action(const ProblemSpec& spec, const OddTrajectory& traj,
                        double delta = kDefaultCollisionDelta);

/// The y-axis power path q(t) = (0, t^beta) sampled on a uniform grid.
/// Requires beta > 1/2; the alpha-dependent admissibility ceiling is
/// enforced by bound_constants, not here.
OddTrajectory test_trajectory_y_axis(double horizon, double beta,
                                     int node_count);

/// Certificate constants for exponent beta. Requires 0 < alpha < 2 and
/// 1/2 < beta < min(1, 1/alpha) so that theta lands in (0, 1);
/// ParameterRangeError otherwise.
BoundConstants bound_constants(double alpha, double beta);

/// The exponent balancing 2*beta - 1 = 1 - alpha*beta, i.e. 2/(2 + alpha).
/// Minimizes theta over the admissible interval; theta = (2-alpha)/(2+alpha).
double optimal_beta(double alpha);

/// True when beta is within 1e-12 of p/q with p, q odd and q <= max_den.
/// Such exponents make t^beta odd symbolically; others rely on the
/// sign(t)|t|^beta convention and are reported as informational.
bool is_odd_rational(double beta, int max_den = 99);

}  // namespace porb
