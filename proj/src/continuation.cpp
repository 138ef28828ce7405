#include "porb/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "porb/action.hpp"
#include "porb/errors.hpp"

namespace porb {

namespace {

struct RowOutput {
  SweepRow row;
  OddTrajectory trajectory;
};

RowOutput run_one(const ProblemSpec& spec, double n, const SweepConfig& cfg,
                  double start_beta) {
  const int m = std::max(1, static_cast<int>(std::lround(
                                cfg.nodes_per_unit * n)));
  const OddTrajectory start = make_uniform(
      n, m, Initializer::y_power(start_beta), spec, cfg.options.collision_delta);
  MinimizeOutcome out = try_minimize(spec, start, cfg.options);
  const MinimizeReport& rep = out.report;
  SweepRow row;
  row.n = n;
  row.node_count = m;
  row.a_n = rep.action_value;
  row.h_n = rep.energy_mean;
  row.energy_spread = rep.energy_spread;
  row.sup_norm = rep.trajectory.sup_norm();
  row.min_speed = rep.trajectory.min_node_speed();
  row.el_residual = m >= 3 ? el_residual(spec, rep.trajectory,
                                         cfg.options.collision_delta)
                           : std::numeric_limits<double>::quiet_NaN();
  row.terminal_speed = rep.terminal_speed;
  row.converged = rep.converged;
  row.iterations = rep.iterations;
  return RowOutput{row, rep.trajectory};
}

}  // namespace

int sweep_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PARABOLIC_ORBITS_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.horizons.empty())
    throw ParameterRangeError("sweep needs at least one horizon");
  if (config.nodes_per_unit < 1)
    throw ParameterRangeError("nodes per unit time must be >= 1");
  const ProblemSpec spec(config.alpha, config.mu);
  const double start_beta =
      config.beta > 0.0 ? config.beta : optimal_beta(config.alpha);

  std::vector<double> horizons = config.horizons;
  std::sort(horizons.begin(), horizons.end());
  for (double n : horizons)
    if (!(std::isfinite(n) && n > 0.0))
      throw ParameterRangeError("horizons must be positive and finite");

  const size_t count = horizons.size();
  std::vector<std::optional<RowOutput>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= count) return;
      try {
        slots[i] = run_one(spec, horizons[i], config, start_beta);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads =
      std::min<int>(sweep_thread_count(config.threads),
                    static_cast<int>(count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (size_t i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);

  // Certificate constants: the start exponent when admissible, else the
  // balanced exponent (always admissible).
  BoundConstants constants;
  try {
    constants = bound_constants(config.alpha, start_beta);
  } catch (const ParameterRangeError&) {
    constants = bound_constants(config.alpha, optimal_beta(config.alpha));
  }

  SweepResult result;
  result.start_beta = start_beta;
  result.report.alpha = config.alpha;
  result.report.beta = constants.beta;
  result.report.theta = constants.theta;
  result.report.c = constants.c;
  result.all_converged = true;
  for (size_t i = 0; i < count; ++i) {
    result.report.rows.push_back(slots[i]->row);
    result.trajectories.push_back(std::move(slots[i]->trajectory));
    result.all_converged = result.all_converged && slots[i]->row.converged;
  }

  std::vector<SweepRow>& rows = result.report.rows;
  const std::vector<BoundMargin> am = certify_action_bound(rows, constants);
  const std::vector<BoundMargin> em = certify_energy_bound(rows, constants);
  const std::vector<BoundMargin> sm =
      certify_supnorm_growth(rows, constants, config.alpha);
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].action_margin = am[i].margin;
    rows[i].energy_margin = em[i].margin;
    rows[i].supnorm_margin = sm[i].margin;
    rows[i].supnorm_vacuous = sm[i].vacuous;
  }

  std::vector<SweepRow> converged_rows;
  for (const SweepRow& row : rows)
    if (row.converged) converged_rows.push_back(row);
  result.report.fitted_theta =
      converged_rows.size() >= 3
          ? fit_growth_exponent(converged_rows)
          : std::numeric_limits<double>::quiet_NaN();

  const double smallest = horizons.front();
  const double w = std::min(config.window_halfwidth, smallest);
  result.window_halfwidth = w;
  if (w > 0.0 && result.trajectories.size() >= 2)
    result.window_deltas = window_convergence(result.trajectories, -w, w);
  return result;
}

}  // namespace porb
