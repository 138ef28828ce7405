#pragma once

#include <string>
#include <vector>

#include "porb/plane.hpp"
#include "porb/problem.hpp"

namespace porb {

/// Initial shape for make_uniform.
struct Initializer {
  enum class Kind { ZeroOffset, YPower, LinearRay };

  Kind kind = Kind::ZeroOffset;
  double beta = 0.0;  // YPower exponent, nodes (0, t^beta)
  Vec2 velocity{};    // LinearRay slope, nodes t * velocity

  static Initializer zero_offset() { return {Kind::ZeroOffset, 0.0, {}}; }
  static Initializer y_power(double beta) { return {Kind::YPower, beta, {}}; }
  static Initializer linear_ray(Vec2 v) { return {Kind::LinearRay, 0.0, v}; }
};

/// Odd trajectory on [-n, n], piecewise linear on a uniform grid.
///
/// Only the free nodes p_1..p_M at t = k*step, k = 1..M are stored. The
/// anchor p_0 = (0,0) at t = 0 and the reflection p_{-k} = -p_k are implicit,
/// so the trajectory satisfies q(-t) = -q(t) exactly. No condition is imposed
/// at t = n: p_M is a free unknown.
class OddTrajectory {
 public:
  OddTrajectory(double horizon, std::vector<Vec2> nodes);

  double horizon() const { return horizon_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double step() const { return step_; }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  /// Node p_k for k = 0..M; k = 0 is the anchor (0,0).
  Vec2 node(int k) const;

  /// Piecewise-linear value with odd reflection. Throws OutOfRangeError for
  /// |t| > horizon. value_at(-t) == -value_at(t) holds bit-exactly.
  Vec2 value_at(double t) const;

  /// (integral of |q'|^2 over [-n,n])^(1/2), exact for the interpolant:
  /// sqrt(2 * sum_k |p_{k+1}-p_k|^2 / step).
  double sobolev_norm() const;

  /// Largest node magnitude.
  double sup_norm() const;

  /// Smallest segment difference quotient |p_{k+1}-p_k| / step, including
  /// the segment leaving the origin.
  double min_node_speed() const;

  /// Index of the segment attaining min_node_speed (0 = segment leaving 0).
  int min_node_speed_segment() const;

  /// Difference quotient of the last segment, |p_M - p_{M-1}| / step.
  double terminal_speed() const;

  /// Same trajectory on a grid refined by an integer factor >= 2; new nodes
  /// interpolate linearly, old grid values are preserved exactly.
  OddTrajectory refine(int factor) const;

 private:
  double horizon_;
  double step_;
  std::vector<Vec2> nodes_;
};

/// Uniform-grid trajectory from a named initial shape. Throws
/// InfeasibleInitError if a node lands within `delta` of a center of `spec`,
/// and ParameterRangeError for invalid grid or initializer parameters.
OddTrajectory make_uniform(double horizon, int node_count,
                           const Initializer& init,
                           const ProblemSpec& spec = ProblemSpec(1.0, 0.5),
                           double delta = kDefaultCollisionDelta);

/// Smallest distance from any node (anchor included) to either center.
double min_center_distance(const ProblemSpec& spec, const OddTrajectory& traj);

/// Writes the trajectory as CSV with header `t,x,y`, one row per grid time
/// from -n to n (reflection materialized), 17 significant digits.
void write_trajectory_csv(const OddTrajectory& traj, const std::string& path);

/// Reads the CSV format written by write_trajectory_csv. Throws FormatError
/// on malformed input and SymmetryError when q(-t) + q(t) exceeds
/// `symmetry_tol` at any grid time.
OddTrajectory read_trajectory_csv(const std::string& path,
                                  double symmetry_tol = 1e-9);

}  // namespace porb
