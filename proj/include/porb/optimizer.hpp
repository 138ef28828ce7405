#pragma once

#include <vector>

#include "porb/action.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace porb {

struct MinimizeOptions {
  double grad_tol = 1e-8;
  int max_iters = 50000;
  double armijo_c = 1e-4;        // sufficient-decrease constant, in (0, 1/2)
  double backtrack_ratio = 0.5;  // step shrink factor, in (0, 1)
  int memory = 10;               // quasi-Newton history length
  double collision_delta = kDefaultCollisionDelta;
  bool record_iterations = false;
};

/// One accepted iterate. iter = 0 is the starting point (step_size 0).
struct IterationRecord {
  int iter = 0;
  double action = 0.0;
  double grad_norm = 0.0;
  double step_size = 0.0;
  double min_center_distance = 0.0;
};

struct MinimizeReport {
  OddTrajectory trajectory;
  double action_value = 0.0;  // a_n when converged
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double min_center_distance = 0.0;  // over anchor, nodes, and midpoints
  double terminal_speed = 0.0;       // |p_M - p_{M-1}| / step
  double energy_mean = 0.0;
  double energy_spread = 0.0;
  std::vector<IterationRecord> history;  // filled when record_iterations
};

enum class MinimizeStatus { Converged, MaxIters, Stalled, CollisionTrap };

struct MinimizeOutcome {
  MinimizeStatus status = MinimizeStatus::Converged;
  MinimizeReport report;
};

/// Descent on the discrete action over the free nodes: limited-memory
/// quasi-Newton directions preconditioned by the inverse of the (constant)
/// kinetic part of the Hessian, Armijo backtracking, steepest-descent
/// fallback. Steps that would put a node or midpoint inside the collision
/// ball are rejected as if the action were +inf there, so every accepted
/// iterate is feasible. The recorded action sequence is non-increasing up to
/// a few ulps: once the true decrement per step falls below the spacing of
/// doubles near f, a trial that reduces the gradient norm may round to f or
/// one ulp above it, and such steps are still accepted.
///
/// Returns instead of throwing when the run ends without convergence:
/// MaxIters (budget exhausted), Stalled (no measurable Armijo decrease in
/// any fallback direction), CollisionTrap (every trial step down to the
/// floor entered the collision ball). Invalid options or an infeasible
/// start still throw (ParameterRangeError, SymmetryError, CollisionError).
MinimizeOutcome try_minimize(const ProblemSpec& spec,
                             const OddTrajectory& start,
                             const MinimizeOptions& opts = {});

/// try_minimize that throws MaxItersError, StalledError, or
/// CollisionTrapError when the corresponding status is hit.
MinimizeReport minimize(const ProblemSpec& spec, const OddTrajectory& start,
                        const MinimizeOptions& opts = {});

/// Terminal difference quotient of a converged run; values near zero
/// corroborate the free-endpoint stationarity condition q'(n) = 0.
inline double natural_boundary_check(const MinimizeReport& report) {
  return report.terminal_speed;
}

/// Writes the iteration history as CSV
/// `iter,action,grad_norm,step_size,min_center_distance`.
void write_iteration_log(const std::vector<IterationRecord>& history,
                         const std::string& path);

}  // namespace porb
