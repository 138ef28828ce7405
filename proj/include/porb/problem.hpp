#pragma once

#include "porb/errors.hpp"
#include "porb/plane.hpp"

namespace porb {

/// Default radius of the collision balls around the centers. Evaluation
/// points at distance <= delta from a center are rejected.
inline constexpr double kDefaultCollisionDelta = 1e-6;

/// Two attracting centers fixed on the x-axis, one unit apart, with a
/// homogeneous r^-alpha potential in the weak-force range 0 < alpha < 2.
///
/// Mass 1-mu sits at center1 = (-mu, 0) and mass mu at center2 = (1-mu, 0).
/// mu = 1/2 puts equal masses at (-1/2, 0) and (1/2, 0); every odd-symmetry
/// operation downstream requires that case.
struct ProblemSpec {
  double alpha;
  double mu;
  Vec2 center1;
  Vec2 center2;

  explicit ProblemSpec(double alpha, double mu = 0.5);

  bool symmetric() const { return mu == 0.5; }
};

/// Throws SymmetryError unless spec.mu == 1/2.
void require_symmetric(const ProblemSpec& spec);

/// Distance from `point` to the nearer center.
double min_center_distance(const ProblemSpec& spec, Vec2 point);

/// Attractive potential U(q) = (1-mu)/|q-c1|^alpha + mu/|q-c2|^alpha, > 0.
/// Throws CollisionError when `point` is within `delta` of a center.
double potential(const ProblemSpec& spec, Vec2 point,
                 double delta = kDefaultCollisionDelta);

/// Analytic gradient of `potential` with respect to the point.
Vec2 potential_gradient(const ProblemSpec& spec, Vec2 point,
                        double delta = kDefaultCollisionDelta);

/// Potential and gradient in one evaluation (shares the pow calls).
struct PotentialEval {
  double value;
  Vec2 gradient;
};
PotentialEval potential_with_gradient(const ProblemSpec& spec, Vec2 point,
                                      double delta = kDefaultCollisionDelta);

/// Energy h = |velocity|^2 / 2 - U(point); conserved along solutions.
double energy(const ProblemSpec& spec, Vec2 point, Vec2 velocity,
              double delta = kDefaultCollisionDelta);

/// One-dimensional reference right-hand side
///   z'' = -alpha * z / (z^2 + r^2)^(alpha/2 + 1),
/// odd in z. Throws DegenerateError when r = 0 and z = 0.
double sitnikov_rhs(double alpha, double r, double z);

}  // namespace porb
