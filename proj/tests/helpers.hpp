#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "porb/action.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace testutil {

inline double unit_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Random point in [-reach, reach]^2 at distance >= clearance from both
/// centers. Deterministic under a fixed generator state.
inline porb::Vec2 random_feasible_point(const porb::ProblemSpec& spec,
                                        std::mt19937_64& gen,
                                        double reach = 3.0,
                                        double clearance = 0.2) {
  for (;;) {
    porb::Vec2 p{reach * (2.0 * unit_double(gen) - 1.0),
                 reach * (2.0 * unit_double(gen) - 1.0)};
    if (porb::min_center_distance(spec, p) >= clearance) return p;
  }
}

/// Jagged but feasible trajectory: independent random nodes with a 0.2
/// clearance from the centers. Generic enough that it is nowhere near a
/// discrete solution.
inline porb::OddTrajectory random_feasible(const porb::ProblemSpec& spec,
                                           double horizon, int node_count,
                                           std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<porb::Vec2> nodes;
  nodes.reserve(static_cast<size_t>(node_count));
  while (static_cast<int>(nodes.size()) < node_count)
    nodes.push_back(random_feasible_point(spec, gen));
  return porb::OddTrajectory(horizon, std::move(nodes));
}

/// Central finite differences of the discrete action in every node
/// coordinate, step scaled by the coordinate magnitude.
inline std::vector<porb::Vec2> fd_gradient(const porb::ProblemSpec& spec,
                                           const porb::OddTrajectory& traj,
                                           double base_step = 1e-6) {
  std::vector<porb::Vec2> nodes = traj.nodes();
  std::vector<porb::Vec2> out(nodes.size());
  const double n = traj.horizon();
  for (size_t k = 0; k < nodes.size(); ++k) {
    for (int c = 0; c < 2; ++c) {
      double& coord = c == 0 ? nodes[k].x : nodes[k].y;
      const double saved = coord;
      const double s = base_step * std::max(1.0, std::fabs(saved));
      coord = saved + s;
      const double fp = porb::action(spec, porb::OddTrajectory(n, nodes)).value;
      coord = saved - s;
      const double fm = porb::action(spec, porb::OddTrajectory(n, nodes)).value;
      coord = saved;
      (c == 0 ? out[k].x : out[k].y) = (fp - fm) / (2.0 * s);
    }
  }
  return out;
}

inline double relative_gradient_error(const std::vector<porb::Vec2>& analytic,
                                      const std::vector<porb::Vec2>& fd) {
  double num = 0.0;
  double den = 0.0;
  for (size_t k = 0; k < analytic.size(); ++k) {
    num += porb::squared_norm(analytic[k] - fd[k]);
    den += porb::squared_norm(analytic[k]);
  }
  return std::sqrt(num / den);
}

}  // namespace testutil
