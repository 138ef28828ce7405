#include "porb/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "porb/errors.hpp"
#include "porb/format.hpp"

namespace porb {

std::vector<EnergySample> energy_profile(const ProblemSpec& spec,
                                         const OddTrajectory& traj,
                                         double delta) {
  const int m = traj.node_count();
  const double h = traj.step();
  std::vector<EnergySample> out;
  out.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Vec2 a = traj.node(k);
    const Vec2 b = traj.node(k + 1);
    const Vec2 v = (1.0 / h) * (b - a);
    const Vec2 mid = 0.5 * (a + b);
    out.push_back({(static_cast<double>(k) + 0.5) * h,
                   energy(spec, mid, v, delta)});
  }
  return out;
}

EnergyStats energy_stats(const ProblemSpec& spec, const OddTrajectory& traj,
                         double window_fraction, double delta) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw ParameterRangeError("window fraction must lie in (0, 1]");
  const std::vector<EnergySample> samples = energy_profile(spec, traj, delta);
  const double n = traj.horizon();
  const double lo = 0.5 * (1.0 - window_fraction) * n;
  const double hi = n - lo;
  EnergyStats stats;
  double sum = 0.0;
  for (const EnergySample& s : samples) {
    if (s.t < lo || s.t > hi) continue;
    sum += s.h;
    ++stats.count;
  }
  if (stats.count == 0)
    throw WindowError("energy window contains no midpoint samples");
  stats.mean = sum / stats.count;
  for (const EnergySample& s : samples) {
    if (s.t < lo || s.t > hi) continue;
    stats.spread = std::max(stats.spread, std::fabs(s.h - stats.mean));
  }
  return stats;
}

double el_residual(const ProblemSpec& spec, const OddTrajectory& traj,
                   double delta) {
  const int m = traj.node_count();
  if (m < 3)
    throw ParameterRangeError("residual stencil needs at least 3 free nodes");
  const double h = traj.step();
  double worst = 0.0;
  // k = 0 closes the stencil across the origin by oddness:
  // p_{-1} = -p_1, so the second difference there is -2 p_0 = 0.
  for (int k = 0; k < m; ++k) {
    const Vec2 prev = k == 0 ? -traj.node(1) : traj.node(k - 1);
    const Vec2 cur = traj.node(k);
    const Vec2 next = traj.node(k + 1);
    const Vec2 second = (1.0 / (h * h)) * (next - 2.0 * cur + prev);
    const Vec2 defect = second - potential_gradient(spec, cur, delta);
    worst = std::max(worst, norm(defect));
  }
  return worst;
}

double kinetic_bound_margin(const ProblemSpec& spec, Vec2 point, double delta) {
  const double u = potential(spec, point, delta);
  const double floor =
      std::pow(2.0 * squared_norm(point) + 0.5, -0.5 * spec.alpha);
  return u - floor;
}

std::vector<double> zero_energy_kinetic_bound(const ProblemSpec& spec,
                                              const OddTrajectory& traj,
                                              double delta) {
  std::vector<double> margins;
  margins.reserve(static_cast<size_t>(traj.node_count()) + 1);
  for (int k = 0; k <= traj.node_count(); ++k)
    margins.push_back(kinetic_bound_margin(spec, traj.node(k), delta));
  return margins;
}

std::vector<BoundMargin> certify_action_bound(const std::vector<SweepRow>& rows,
                                              const BoundConstants& k) {
  std::vector<BoundMargin> out;
  out.reserve(rows.size());
  for (const SweepRow& row : rows) {
    const double threshold = k.c * std::pow(row.n, k.theta);
    out.push_back({row.n, threshold, threshold - row.a_n, false});
  }
  return out;
}

std::vector<BoundMargin> certify_energy_bound(const std::vector<SweepRow>& rows,
                                              const BoundConstants& k) {
  std::vector<BoundMargin> out;
  out.reserve(rows.size());
  for (const SweepRow& row : rows) {
    const double threshold = 0.5 * k.c * std::pow(row.n, k.theta - 1.0);
    out.push_back({row.n, threshold, threshold - row.h_n, false});
  }
  return out;
}

std::vector<BoundMargin> certify_supnorm_growth(
    const std::vector<SweepRow>& rows, const BoundConstants& k, double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 2.0))
    throw ParameterRangeError("alpha must lie in (0, 2)");
  std::vector<BoundMargin> out;
  out.reserve(rows.size());
  for (const SweepRow& row : rows) {
    const double base = 2.0 * std::pow(row.n, 1.0 - k.theta) / k.c;
    const double floor = 0.5 * (std::pow(base, 2.0 / alpha) - 1.25);
    const double s2 = row.sup_norm * row.sup_norm;
    out.push_back({row.n, floor, s2 - floor, floor <= 0.0});
  }
  return out;
}

bool nondecreasing_within(const std::vector<double>& values, double slack) {
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1] * (1.0 - slack)) return false;
  return true;
}

std::vector<double> window_convergence(const std::vector<OddTrajectory>& trajs,
                                       double a, double b,
                                       int samples_per_unit) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    throw ParameterRangeError("window must satisfy a < b");
  if (samples_per_unit < 1)
    throw ParameterRangeError("need at least 1 sample per unit time");
  const double reach = std::max(std::fabs(a), std::fabs(b));
  for (const OddTrajectory& traj : trajs)
    if (traj.horizon() < reach)
      throw WindowError("window [" + fmt17(a) + ", " + fmt17(b) +
                        "] exceeds horizon " + fmt17(traj.horizon()));
  const int count =
      std::max(2, 1 + static_cast<int>(std::lround((b - a) * samples_per_unit)));
  std::vector<double> deltas;
  if (trajs.size() < 2) return deltas;
  deltas.reserve(trajs.size() - 1);
  for (size_t j = 0; j + 1 < trajs.size(); ++j) {
    double sup = 0.0;
    for (int i = 0; i < count; ++i) {
      const double t = a + (b - a) * static_cast<double>(i) /
                               static_cast<double>(count - 1);
      sup = std::max(
          sup, norm(trajs[j + 1].value_at(t) - trajs[j].value_at(t)));
    }
    deltas.push_back(sup);
  }
  return deltas;
}

namespace {

Vec2 force(const ProblemSpec& spec, Vec2 q, double delta) {
  return potential_gradient(spec, q, delta);
}

}  // namespace

OdePath integrate_ode(const ProblemSpec& spec, Vec2 q0, Vec2 v0, double total,
                      double dt, double delta) {
  if (!(std::isfinite(total) && total > 0.0))
    throw ParameterRangeError("integration time must be positive");
  if (!(std::isfinite(dt) && dt > 0.0))
    throw ParameterRangeError("time step must be positive");
  const long steps = std::max(1L, std::lround(total / dt));
  const double h = total / static_cast<double>(steps);
  OdePath path;
  path.t.reserve(static_cast<size_t>(steps) + 1);
  path.q.reserve(static_cast<size_t>(steps) + 1);
  path.v.reserve(static_cast<size_t>(steps) + 1);
  Vec2 q = q0;
  Vec2 v = v0;
  path.t.push_back(0.0);
  path.q.push_back(q);
  path.v.push_back(v);
  const double h0 = energy(spec, q, v, delta);
  for (long s = 0; s < steps; ++s) {
    const Vec2 k1q = v;
    const Vec2 k1v = force(spec, q, delta);
    const Vec2 k2q = v + (0.5 * h) * k1v;
    const Vec2 k2v = force(spec, q + (0.5 * h) * k1q, delta);
    const Vec2 k3q = v + (0.5 * h) * k2v;
    const Vec2 k3v = force(spec, q + (0.5 * h) * k2q, delta);
    const Vec2 k4q = v + h * k3v;
    const Vec2 k4v = force(spec, q + h * k3q, delta);
    q += (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    path.t.push_back(static_cast<double>(s + 1) * h);
    path.q.push_back(q);
    path.v.push_back(v);
  }
  path.energy_drift = std::fabs(energy(spec, q, v, delta) - h0);
  return path;
}

double fit_growth_exponent(const std::vector<double>& horizons,
                           const std::vector<double>& values) {
  if (horizons.size() != values.size())
    throw ParameterRangeError("horizon and value counts differ");
  if (horizons.size() < 3)
    throw InsufficientDataError("growth fit needs at least 3 points");
  const size_t m = horizons.size();
  std::vector<double> x(m), y(m);
  for (size_t i = 0; i < m; ++i) {
    if (!(horizons[i] > 0.0 && values[i] > 0.0))
      throw InsufficientDataError("growth fit needs positive data");
    x[i] = std::log(horizons[i]);
    y[i] = std::log(values[i]);
  }
  double xbar = 0.0, ybar = 0.0;
  for (size_t i = 0; i < m; ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= static_cast<double>(m);
  ybar /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw InsufficientDataError("horizons are all equal");
  return sxy / sxx;
}

double fit_growth_exponent(const std::vector<SweepRow>& rows) {
  std::vector<double> n, a;
  n.reserve(rows.size());
  a.reserve(rows.size());
  for (const SweepRow& row : rows) {
    n.push_back(row.n);
    a.push_back(row.a_n);
  }
  return fit_growth_exponent(n, a);
}

}  // namespace porb
