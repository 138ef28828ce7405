#pragma once

#include <vector>

#include "porb/diagnostics.hpp"
#include "porb/optimizer.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace porb {

struct SweepConfig {
  double alpha = 1.0;
  double mu = 0.5;
  std::vector<double> horizons = {10.0, 20.0, 40.0, 80.0};
  int nodes_per_unit = 16;
  double beta = 0.0;  // start exponent; 0 means optimal_beta(alpha)
  MinimizeOptions options;
  double window_halfwidth = 5.0;  // convergence window [-w, w]
  int threads = 0;  // 0: PARABOLIC_ORBITS_THREADS, else hardware
};

struct SweepResult {
  ContinuationReport report;
  std::vector<OddTrajectory> trajectories;  // one per row, ascending n
  std::vector<double> window_deltas;        // between consecutive rows
  double window_halfwidth = 0.0;  // effective width, clamped to smallest n
  double start_beta = 0.0;
  bool all_converged = false;
};

/// Effective sweep parallelism: explicit request if positive, else the
/// PARABOLIC_ORBITS_THREADS environment variable, else the hardware count.
int sweep_thread_count(int requested);

/// Minimizes every horizon in config.horizons (ascending), certifies the
/// bounds row by row, fits the growth exponent over converged rows, and
/// measures window convergence between consecutive minimizers. Rows whose
/// run ends without convergence are kept with converged=false; hard errors
/// (bad parameters, infeasible starts) throw.
SweepResult run_sweep(const SweepConfig& config);

}  // namespace porb
