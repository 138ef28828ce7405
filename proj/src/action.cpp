#include "porb/action.hpp"

#include <algorithm>
#include <cmath>

#include "porb/errors.hpp"
#include "porb/format.hpp"

namespace porb {

namespace {

/// Neumaier-compensated accumulator. The action sums hundreds of terms and
/// plain left-to-right addition leaves ~10 ulp of order noise, enough to
/// trap a monotone line search in spurious pits near the minimum.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = s + v;
    c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double total() const { return s + c; }
};

}  // namespace

ActionEvaluation action(const ProblemSpec& spec, const OddTrajectory& traj,
                        double delta) {
  require_symmetric(spec);
  const int m = traj.node_count();
  const double h = traj.step();
  ActionEvaluation out;
  out.gradient.assign(static_cast<size_t>(m), Vec2{0.0, 0.0});
  out.min_center_distance = min_center_distance(spec, Vec2{0.0, 0.0});

  CompensatedSum kin;
  CompensatedSum pot;
  for (int k = 0; k < m; ++k) {
    const Vec2 a = traj.node(k);
    const Vec2 b = traj.node(k + 1);
    const double dist = min_center_distance(spec, b);
    if (dist < delta)
      throw CollisionError("node " + std::to_string(k + 1) + " is " +
                           fmt17(dist) + " from a center");
    out.min_center_distance = std::min(out.min_center_distance, dist);

    const Vec2 d = b - a;
    kin.add(squared_norm(d) / h);
    // Kinetic part of the gradient: each segment |p_{k+1}-p_k|^2/h pushes
    // (2/h)d onto its right node and -(2/h)d onto its left one.
    const Vec2 kg = (2.0 / h) * d;
    out.gradient[static_cast<size_t>(k)] += kg;
    if (k > 0) out.gradient[static_cast<size_t>(k - 1)] -= kg;

    const Vec2 mid = 0.5 * (a + b);
    out.min_center_distance =
        std::min(out.min_center_distance, min_center_distance(spec, mid));
    const PotentialEval pe = potential_with_gradient(spec, mid, delta);
    pot.add(pe.value);
    // Midpoint depends on both endpoints with weight 1/2; the segment
    // contributes 2h U(mid) to the doubled potential integral.
    const Vec2 pg = h * pe.gradient;
    out.gradient[static_cast<size_t>(k)] += pg;
    if (k > 0) out.gradient[static_cast<size_t>(k - 1)] += pg;
  }
  out.kinetic = kin.total();
  out.potential = 2.0 * h * pot.total();
  out.value = out.kinetic + out.potential;
  return out;
}

OddTrajectory test_trajectory_y_axis(double horizon, double beta,
                                     int node_count) {
  if (!(std::isfinite(beta) && beta > 0.5))
    throw ParameterRangeError("test exponent must exceed 1/2");
  return make_uniform(horizon, node_count, Initializer::y_power(beta));
}

BoundConstants bound_constants(double alpha, double beta) {
  if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 2.0))
    throw ParameterRangeError("alpha must lie in (0, 2)");
  const double ceiling = std::min(1.0, 1.0 / alpha);
  if (!(std::isfinite(beta) && beta > 0.5 && beta < ceiling))
    throw ParameterRangeError("beta must lie in (1/2, " + fmt17(ceiling) +
                              ") for alpha = " + fmt17(alpha));
  BoundConstants out;
  out.beta = beta;
  out.theta = std::max(2.0 * beta - 1.0, 1.0 - alpha * beta);
  out.c = beta * beta / (2.0 * beta - 1.0) + 2.0 / (1.0 - alpha * beta);
  return out;
}

double optimal_beta(double alpha) { return 2.0 / (2.0 + alpha); }

bool is_odd_rational(double beta, int max_den) {
  if (!std::isfinite(beta) || beta <= 0.0) return false;
  for (int q = 1; q <= max_den; q += 2) {
    const double scaled = beta * q;
    const long p = std::lround(scaled);
    if (p % 2 != 0 && p > 0 && std::fabs(scaled - static_cast<double>(p)) <=
                                   1e-12 * static_cast<double>(q))
      return true;
  }
  return false;
}

}  // namespace porb
