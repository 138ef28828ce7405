#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "porb/continuation.hpp"
#include "porb/diagnostics.hpp"
#include "porb/errors.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace porb {

inline constexpr const char* kSchemaTag = "parabolic-orbits/1";

/// Full diagnostic record for one trajectory. Every field is a pure
/// function of (spec, traj, beta, seed, samples), so re-running it on a
/// round-tripped CSV reproduces the record bit for bit. Top-level
/// "bound_margin" is the action-certificate margin c n^theta - value.
/// `beta` is the run's start exponent; when it is not admissible for the
/// certificate the constants fall back to the balanced exponent.
nlohmann::ordered_json diag_json(const ProblemSpec& spec,
                                 const OddTrajectory& traj, double beta,
                                 std::uint64_t seed, int samples);

/// Sweep record: ContinuationReport fields plus config, window deltas, and
/// convergence flags.
nlohmann::ordered_json sweep_json(const SweepResult& result,
                                  const SweepConfig& config);

/// Machine-readable failure record printed by the CLI before a nonzero exit.
std::string error_json(const std::string& kind, const std::string& message);

void write_json(const nlohmann::ordered_json& j, const std::string& path);

/// CSV with header n,M,a_n,h_n,energy_spread,sup_norm,min_speed,
/// el_residual,terminal_speed.
void write_sweep_csv(const ContinuationReport& report,
                     const std::string& path);

/// Gnuplot data: log10(n) vs log10(a_n), one line per row.
void write_loglog_dat(const ContinuationReport& report,
                      const std::string& path);

/// Gnuplot data: n, h_n, |h_n| per row.
void write_energy_dat(const ContinuationReport& report,
                      const std::string& path);

/// Gnuplot data: x y pairs of every trajectory over [-n, n], one block per
/// horizon separated by blank lines for use with `index`.
void write_overlay_dat(const std::vector<OddTrajectory>& trajectories,
                       const std::string& path);

/// "10" for 10.0, "2.5" for 2.5; used in output file names like
/// orbit_n10.csv.
std::string horizon_tag(double n);

}  // namespace porb
