#include "porb/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace porb {

ProblemSpec::ProblemSpec(double alpha_, double mu_) : alpha(alpha_), mu(mu_) {
  if (!(alpha > 0.0) || !(alpha < 2.0)) {
    throw ParameterRangeError("alpha must lie in (0, 2), got " +
                              std::to_string(alpha_));
  }
  if (!(mu > 0.0) || !(mu < 1.0)) {
    throw ParameterRangeError("mu must lie in (0, 1), got " +
                              std::to_string(mu_));
  }
  center1 = {-mu, 0.0};
  center2 = {1.0 - mu, 0.0};
}

void require_symmetric(const ProblemSpec& spec) {
  if (!spec.symmetric()) {
    throw SymmetryError("operation requires mu = 1/2, got mu = " +
                        std::to_string(spec.mu));
  }
}

double min_center_distance(const ProblemSpec& spec, Vec2 point) {
  return std::min(norm(point - spec.center1), norm(point - spec.center2));
}

namespace {

void check_feasible(const ProblemSpec& spec, Vec2 point, double delta) {
  if (min_center_distance(spec, point) <= delta) {
    throw CollisionError("point (" + std::to_string(point.x) + ", " +
                         std::to_string(point.y) +
                         ") is within delta of a center");
  }
}

}  // namespace

double potential(const ProblemSpec& spec, Vec2 point, double delta) {
  check_feasible(spec, point, delta);
  const double d1sq = squared_norm(point - spec.center1);
  const double d2sq = squared_norm(point - spec.center2);
  const double e = -0.5 * spec.alpha;
  return (1.0 - spec.mu) * std::pow(d1sq, e) + spec.mu * std::pow(d2sq, e);
}

Vec2 potential_gradient(const ProblemSpec& spec, Vec2 point, double delta) {
  return potential_with_gradient(spec, point, delta).gradient;
}

PotentialEval potential_with_gradient(const ProblemSpec& spec, Vec2 point,
                                      double delta) {
  check_feasible(spec, point, delta);
  const Vec2 r1 = point - spec.center1;
  const Vec2 r2 = point - spec.center2;
  const double d1sq = squared_norm(r1);
  const double d2sq = squared_norm(r2);
  const double e = -0.5 * spec.alpha;
  const double u1 = (1.0 - spec.mu) * std::pow(d1sq, e);
  const double u2 = spec.mu * std::pow(d2sq, e);
  // d/dq [m |q-c|^-alpha] = -alpha m (q-c) |q-c|^-(alpha+2)
  const double g1 = -spec.alpha * u1 / d1sq;
  const double g2 = -spec.alpha * u2 / d2sq;
  return {u1 + u2, g1 * r1 + g2 * r2};
}

double energy(const ProblemSpec& spec, Vec2 point, Vec2 velocity,
              double delta) {
  return 0.5 * squared_norm(velocity) - potential(spec, point, delta);
}

double sitnikov_rhs(double alpha, double r, double z) {
  if (r == 0.0 && z == 0.0) {
    throw DegenerateError("sitnikov_rhs undefined at r = z = 0");
  }
  const double ssq = z * z + r * r;
  return -alpha * z * std::pow(ssq, -0.5 * alpha - 1.0);
}

}  // namespace porb
