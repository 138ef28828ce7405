#include "porb/optimizer.hpp"

#include <cmath>
#include <cstddef>
#include <deque>
#include <fstream>
#include <limits>
#include <utility>

#include "porb/diagnostics.hpp"
#include "porb/errors.hpp"
#include "porb/format.hpp"

namespace porb {

namespace {

using Nodes = std::vector<Vec2>;

constexpr double kStepCap = 1.0;  // largest per-node move in a trial step
constexpr double kStepFloor = 1e-14;

double dot(const Nodes& a, const Nodes& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += porb::dot(a[i], b[i]);
  return s;
}

Nodes add_scaled(const Nodes& a, double t, const Nodes& b) {
  Nodes out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * b[i];
  return out;
}

void sub_scaled(Nodes& a, double t, const Nodes& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= t * b[i];
}

Nodes negated(Nodes a) {
  for (Vec2& v : a) v = -v;
  return a;
}

double max_component_norm(const Nodes& a) {
  double best = 0.0;
  for (const Vec2& v : a) best = std::max(best, norm(v));
  return best;
}

/// Solves (2/h) T z = q where T is the constant kinetic Hessian block:
/// tridiagonal, diagonal (2, ..., 2, 1), off-diagonal -1. T is SPD; the
/// factorization is computed once and reused every iteration, which keeps
/// the direction scaling mesh-independent.
class KineticSolver {
 public:
  KineticSolver(int m, double h) : half_h_(0.5 * h), denom_(m) {
    for (int i = 0; i < m; ++i) {
      const double diag = i + 1 < m ? 2.0 : 1.0;
      denom_[i] = i == 0 ? diag : diag - 1.0 / denom_[i - 1];
    }
  }

  Nodes solve(const Nodes& q) const {
    const int m = static_cast<int>(denom_.size());
    Nodes z(q.size());
    Vec2 carry{0.0, 0.0};
    for (int i = 0; i < m; ++i) {
      carry = (1.0 / denom_[i]) * (q[static_cast<size_t>(i)] + carry);
      z[static_cast<size_t>(i)] = carry;
    }
    for (int i = m - 2; i >= 0; --i)
      z[static_cast<size_t>(i)] +=
          (1.0 / denom_[i]) * z[static_cast<size_t>(i) + 1];
    for (Vec2& v : z) v = half_h_ * v;
    return z;
  }

 private:
  double half_h_;
  std::vector<double> denom_;
};

struct Pair {
  Nodes s;
  Nodes y;
  double rho;   // 1 / (s . y)
  double y_ky;  // y . K^{-1} y, for the initial scaling
};

/// Two-loop recursion with H0 = gamma K^{-1}, gamma = (s.y) / (y.K^{-1}y).
Nodes quasi_newton_direction(const Nodes& g, const std::deque<Pair>& pairs,
                             const KineticSolver& pre) {
  Nodes q = g;
  std::vector<double> alpha(pairs.size());
  for (size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * dot(pairs[i].s, q);
    sub_scaled(q, alpha[i], pairs[i].y);
  }
  Nodes r = pre.solve(q);
  if (!pairs.empty() && pairs.back().y_ky > 0.0) {
    const double gamma = 1.0 / (pairs.back().rho * pairs.back().y_ky);
    for (Vec2& v : r) v = gamma * v;
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * dot(pairs[i].y, r);
    sub_scaled(r, beta - alpha[i], pairs[i].s);
  }
  return negated(std::move(r));
}

struct Eval {
  bool feasible = false;
  double f = 0.0;
  Nodes grad;
  double mind = 0.0;
};

Eval evaluate(const ProblemSpec& spec, double horizon, Nodes x, double delta) {
  try {
    ActionEvaluation ae =
        action(spec, OddTrajectory(horizon, std::move(x)), delta);
    return {true, ae.value, std::move(ae.gradient), ae.min_center_distance};
  } catch (const CollisionError&) {
    return {};
  } catch (const ParameterRangeError&) {
    return {};  // non-finite trial nodes count as infeasible
  }
}

struct SearchResult {
  bool accepted = false;
  double t = 0.0;
  Nodes x_trial;
  Eval ev;
  bool all_collision = true;  // every trial down to the floor was infeasible
};

SearchResult line_search(const ProblemSpec& spec, double horizon,
                         const Nodes& x, const Nodes& d, double f, double gn,
                         double g_d, const MinimizeOptions& opts) {
  SearchResult out;
  const double dmax = max_component_norm(d);
  if (!(dmax > 0.0) || !std::isfinite(dmax)) return out;
  // Near the minimum the action hits its floating-point floor: no trial can
  // decrease f by a representable amount even though the gradient can still
  // shrink, and rounding may tick neighbouring values up by an ulp. A trial
  // with f unchanged at evaluation precision but a measurably smaller
  // gradient norm still makes progress, so track the best such candidate as
  // a fallback. The slack is two ulps of f, the evaluation noise scale.
  const double slack = 2.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::fabs(f));
  double lateral_gn = gn * (1.0 - 1e-3);
  for (double t = std::min(1.0, kStepCap / dmax); t >= kStepFloor;
       t *= opts.backtrack_ratio) {
    Nodes trial = add_scaled(x, t, d);
    Eval ev = evaluate(spec, horizon, trial, opts.collision_delta);
    if (!ev.feasible) continue;
    out.all_collision = false;
    if (ev.f < f && ev.f <= f + opts.armijo_c * t * g_d) {
      out.accepted = true;
      out.t = t;
      out.x_trial = std::move(trial);
      out.ev = std::move(ev);
      return out;
    }
    if (ev.f <= f + slack) {
      const double tgn = std::sqrt(dot(ev.grad, ev.grad));
      if (tgn < lateral_gn) {
        lateral_gn = tgn;
        out.accepted = true;
        out.t = t;
        out.x_trial = std::move(trial);
        out.ev = std::move(ev);
      }
    }
  }
  return out;
}

void validate(const MinimizeOptions& opts) {
  if (!(opts.grad_tol > 0.0))
    throw ParameterRangeError("grad_tol must be positive");
  if (opts.max_iters < 1)
    throw ParameterRangeError("max_iters must be at least 1");
  if (!(opts.armijo_c > 0.0 && opts.armijo_c < 0.5))
    throw ParameterRangeError("armijo_c must lie in (0, 1/2)");
  if (!(opts.backtrack_ratio > 0.0 && opts.backtrack_ratio < 1.0))
    throw ParameterRangeError("backtrack_ratio must lie in (0, 1)");
  if (opts.memory < 0) throw ParameterRangeError("memory must be >= 0");
  if (!(opts.collision_delta >= 0.0))
    throw ParameterRangeError("collision_delta must be >= 0");
}

}  // namespace

MinimizeOutcome try_minimize(const ProblemSpec& spec,
                             const OddTrajectory& start,
                             const MinimizeOptions& opts) {
  validate(opts);
  require_symmetric(spec);
  const double n = start.horizon();
  const int m = start.node_count();

  // An infeasible start throws CollisionError here instead of reporting.
  ActionEvaluation initial = action(spec, start, opts.collision_delta);
  Nodes x = start.nodes();
  double f = initial.value;
  Nodes g = std::move(initial.gradient);
  double gn = std::sqrt(dot(g, g));
  double mind = initial.min_center_distance;

  const KineticSolver pre(m, start.step());
  std::deque<Pair> pairs;
  std::vector<IterationRecord> history;
  if (opts.record_iterations) history.push_back({0, f, gn, 0.0, mind});

  int accepted = 0;
  MinimizeStatus status = MinimizeStatus::MaxIters;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    if (gn <= opts.grad_tol) {
      status = MinimizeStatus::Converged;
      break;
    }
    // Direction ladder: quasi-Newton, preconditioned steepest descent, raw
    // steepest descent. A fallback invalidates the curvature history.
    SearchResult best;
    Nodes step_dir;
    bool collision_blocked = true;
    for (int attempt = 0; attempt < 3; ++attempt) {
      Nodes d;
      if (attempt == 0) {
        if (pairs.empty()) continue;
        d = quasi_newton_direction(g, pairs, pre);
      } else if (attempt == 1) {
        d = negated(pre.solve(g));
      } else {
        d = negated(g);
      }
      const double g_d = dot(g, d);
      if (!(g_d < 0.0)) continue;
      SearchResult res = line_search(spec, n, x, d, f, gn, g_d, opts);
      collision_blocked = collision_blocked && res.all_collision;
      if (res.accepted) {
        best = std::move(res);
        step_dir = std::move(d);
        break;
      }
      if (attempt >= 1) pairs.clear();
    }
    if (!best.accepted) {
      status = collision_blocked ? MinimizeStatus::CollisionTrap
                                 : MinimizeStatus::Stalled;
      break;
    }

    Nodes s(step_dir.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = best.t * step_dir[i];
    Nodes y(g.size());
    for (size_t i = 0; i < y.size(); ++i) y[i] = best.ev.grad[i] - g[i];
    const double sy = dot(s, y);
    if (opts.memory > 0 &&
        sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      const Nodes ky = pre.solve(y);
      const double y_ky = dot(y, ky);
      pairs.push_back({std::move(s), std::move(y), 1.0 / sy, y_ky});
      while (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
    }

    x = std::move(best.x_trial);
    f = best.ev.f;
    g = std::move(best.ev.grad);
    gn = std::sqrt(dot(g, g));
    mind = best.ev.mind;
    ++accepted;
    if (opts.record_iterations)
      history.push_back({accepted, f, gn, best.t, mind});
  }
  if (status == MinimizeStatus::MaxIters && gn <= opts.grad_tol)
    status = MinimizeStatus::Converged;

  OddTrajectory traj(n, std::move(x));
  const EnergyStats estats =
      energy_stats(spec, traj, 0.8, opts.collision_delta);
  const double terminal = traj.terminal_speed();
  return MinimizeOutcome{status,
                         MinimizeReport{std::move(traj),
                                        f,
                                        gn,
                                        accepted,
                                        status == MinimizeStatus::Converged,
                                        mind,
                                        terminal,
                                        estats.mean,
                                        estats.spread,
                                        std::move(history)}};
}

MinimizeReport minimize(const ProblemSpec& spec, const OddTrajectory& start,
                        const MinimizeOptions& opts) {
  MinimizeOutcome out = try_minimize(spec, start, opts);
  const std::string detail = " after " + std::to_string(out.report.iterations) +
                             " iterations (gradient norm " +
                             fmt17(out.report.grad_norm) + ")";
  switch (out.status) {
    case MinimizeStatus::Converged:
      return std::move(out.report);
    case MinimizeStatus::MaxIters:
      throw MaxItersError("iteration budget exhausted" + detail);
    case MinimizeStatus::Stalled:
      throw StalledError("line search stalled" + detail);
    case MinimizeStatus::CollisionTrap:
      throw CollisionTrapError("every trial step hits the collision ball" +
                               detail);
  }
  throw StalledError("unreachable");
}

void write_iteration_log(const std::vector<IterationRecord>& history,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "iter,action,grad_norm,step_size,min_center_distance\n";
  for (const IterationRecord& r : history)
    out << r.iter << ',' << fmt17(r.action) << ',' << fmt17(r.grad_norm)
        << ',' << fmt17(r.step_size) << ',' << fmt17(r.min_center_distance)
        << '\n';
  if (!out.flush()) throw FormatError("failed writing " + path);
}

}  // namespace porb
