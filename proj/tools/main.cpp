#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "porb/action.hpp"
#include "porb/continuation.hpp"
#include "porb/diagnostics.hpp"
#include "porb/errors.hpp"
#include "porb/format.hpp"
#include "porb/io.hpp"
#include "porb/optimizer.hpp"
#include "porb/problem.hpp"
#include "porb/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kRandomSamples = 10000;

struct Options {
  double alpha = 1.0;
  double mu = 0.5;
  double n = 10.0;
  std::vector<double> n_list = {10.0, 20.0, 40.0, 80.0};
  int nodes_per_unit = 16;
  double beta = 0.0;  // 0: balanced exponent 2/(2+alpha)
  double grad_tol = 1e-8;
  int max_iters = 50000;
  std::string out = ".";
  std::uint64_t seed = 12345;
  double window = 5.0;
  std::string trajectory_file;
};

int classify(const porb::Error& e) {
  const std::string& k = e.kind();
  if (k == "ParameterRangeError" || k == "WindowError" ||
      k == "InfeasibleInitError" || k == "OutOfRangeError")
    return 2;
  if (k == "MaxItersError" || k == "StalledError" ||
      k == "CollisionTrapError" || k == "CollisionError" ||
      k == "DegenerateError")
    return 3;
  return 4;  // FormatError, SymmetryError, InsufficientDataError
}

void ensure_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec)
    throw porb::FormatError("cannot create output directory " + out + ": " +
                            ec.message());
}

void require_symmetric_mu(double mu) {
  if (mu != 0.5)
    throw porb::ParameterRangeError(
        "only mu = 1/2 is supported: the odd-trajectory reduction needs "
        "centers symmetric about the origin");
}

porb::MinimizeOptions minimize_options(const Options& o,
                                       bool record_iterations) {
  porb::MinimizeOptions mo;
  mo.grad_tol = o.grad_tol;
  mo.max_iters = o.max_iters;
  mo.record_iterations = record_iterations;
  return mo;
}

int node_count_for(const Options& o, double n) {
  if (o.nodes_per_unit < 1)
    throw porb::ParameterRangeError("nodes per unit time must be >= 1");
  const int m = static_cast<int>(std::lround(o.nodes_per_unit * n));
  if (m < 1)
    throw porb::ParameterRangeError("horizon too small for the grid");
  return m;
}

int cmd_solve(const Options& o) {
  require_symmetric_mu(o.mu);
  const porb::ProblemSpec spec(o.alpha, o.mu);
  const double beta = o.beta > 0.0 ? o.beta : porb::optimal_beta(o.alpha);
  const int m = node_count_for(o, o.n);
  const porb::OddTrajectory start =
      porb::make_uniform(o.n, m, porb::Initializer::y_power(beta), spec);
  const porb::MinimizeReport rep =
      porb::minimize(spec, start, minimize_options(o, true));

  ensure_dir(o.out);
  const std::string tag = porb::horizon_tag(o.n);
  const std::string orbit_path = o.out + "/orbit_n" + tag + ".csv";
  const std::string iters_path = o.out + "/iters_n" + tag + ".csv";
  const std::string diag_path = o.out + "/diag_n" + tag + ".json";
  porb::write_trajectory_csv(rep.trajectory, orbit_path);
  porb::write_iteration_log(rep.history, iters_path);

  ordered_json diag =
      porb::diag_json(spec, rep.trajectory, beta, o.seed, kRandomSamples);
  diag["optimizer"] = ordered_json{{"iterations", rep.iterations},
                                   {"converged", rep.converged},
                                   {"grad_norm", rep.grad_norm},
                                   {"grad_tol", o.grad_tol},
                                   {"max_iters", o.max_iters}};
  porb::write_json(diag, diag_path);

  std::cout << "a_n = " << porb::fmt17(rep.action_value) << " at n = " << tag
            << " (" << rep.iterations << " iterations, grad norm "
            << porb::fmt17(rep.grad_norm) << ")\n"
            << "energy mean " << porb::fmt17(rep.energy_mean) << ", spread "
            << porb::fmt17(rep.energy_spread) << ", terminal speed "
            << porb::fmt17(rep.terminal_speed) << "\n"
            << "wrote " << orbit_path << ", " << iters_path << ", "
            << diag_path << "\n";
  return 0;
}

int cmd_sweep(const Options& o) {
  require_symmetric_mu(o.mu);
  if (o.n_list.size() < 2)
    throw porb::ParameterRangeError("sweep needs at least 2 horizons");
  porb::SweepConfig cfg;
  cfg.alpha = o.alpha;
  cfg.mu = o.mu;
  cfg.horizons = o.n_list;
  cfg.nodes_per_unit = o.nodes_per_unit;
  cfg.beta = o.beta;
  cfg.options = minimize_options(o, false);
  cfg.window_halfwidth = o.window;
  const porb::SweepResult res = porb::run_sweep(cfg);

  ensure_dir(o.out);
  porb::write_json(porb::sweep_json(res, cfg), o.out + "/sweep.json");
  porb::write_sweep_csv(res.report, o.out + "/sweep.csv");
  porb::write_loglog_dat(res.report, o.out + "/an_vs_n.dat");
  porb::write_energy_dat(res.report, o.out + "/h_vs_n.dat");
  porb::write_overlay_dat(res.trajectories, o.out + "/orbit_overlay.dat");

  for (const porb::SweepRow& row : res.report.rows)
    std::cout << "n = " << porb::horizon_tag(row.n) << ": a_n = "
              << porb::fmt17(row.a_n) << ", h_n = " << porb::fmt17(row.h_n)
              << ", sup = " << porb::fmt17(row.sup_norm)
              << (row.converged ? "" : "  [not converged]") << "\n";
  std::cout << "fitted growth exponent " << porb::fmt17(res.report.fitted_theta)
            << " against certificate theta " << porb::fmt17(res.report.theta)
            << "\n"
            << "wrote sweep.json, sweep.csv, an_vs_n.dat, h_vs_n.dat, "
               "orbit_overlay.dat in "
            << o.out << "\n";
  if (!res.all_converged) {
    std::cout << porb::error_json("ConvergenceFailure",
                                  "some sweep rows did not converge; see "
                                  "converged flags in sweep.json")
              << "\n";
    return 3;
  }
  return 0;
}

int cmd_testfn(const Options& o) {
  require_symmetric_mu(o.mu);
  const porb::ProblemSpec spec(o.alpha, o.mu);
  std::vector<double> betas;
  if (o.beta > 0.0) {
    betas.push_back(o.beta);
  } else {
    betas = {5.0 / 9.0, 3.0 / 5.0, 2.0 / 3.0, 5.0 / 7.0, 7.0 / 9.0,
             porb::optimal_beta(o.alpha)};
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end(),
                            [](double a, double b) {
                              return std::fabs(a - b) < 1e-12;
                            }),
                betas.end());
  }

  ordered_json rows = ordered_json::array();
  std::string csv =
      "beta,n,M,value,valid,theta,c,bound,within\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double beta : betas) {
    for (double n : o.n_list) {
      const int m = node_count_for(o, n);
      double value = nan;
      if (beta > 0.5) {
        const porb::OddTrajectory traj =
            porb::test_trajectory_y_axis(n, beta, m);
        value = porb::action(spec, traj).value;
      }
      bool valid = false;
      double theta = nan, c = nan, bound = nan;
      try {
        const porb::BoundConstants k = porb::bound_constants(o.alpha, beta);
        valid = true;
        theta = k.theta;
        c = k.c;
        bound = k.c * std::pow(n, k.theta);
      } catch (const porb::ParameterRangeError&) {
      }
      const bool within = valid && std::isfinite(value) &&
                          value <= bound * 1.01;
      rows.push_back(ordered_json{{"beta", beta},
                                  {"n", n},
                                  {"M", m},
                                  {"value", value},
                                  {"valid", valid},
                                  {"theta", theta},
                                  {"c", c},
                                  {"bound", bound},
                                  {"within", within}});
      csv += porb::fmt17(beta) + "," + porb::fmt17(n) + "," +
             std::to_string(m) + "," + porb::fmt17(value) + "," +
             (valid ? "1" : "0") + "," + porb::fmt17(theta) + "," +
             porb::fmt17(c) + "," + porb::fmt17(bound) + "," +
             (within ? "1" : "0") + "\n";
    }
  }

  ensure_dir(o.out);
  ordered_json j;
  j["schema"] = porb::kSchemaTag;
  j["config"] = ordered_json{{"alpha", o.alpha},
                             {"mu", o.mu},
                             {"horizons", o.n_list},
                             {"nodes_per_unit", o.nodes_per_unit}};
  j["rows"] = std::move(rows);
  porb::write_json(j, o.out + "/testfn.json");
  {
    std::ofstream f(o.out + "/testfn.csv");
    if (!f) throw porb::FormatError("cannot open testfn.csv for writing");
    f << csv;
    if (!f.flush()) throw porb::FormatError("failed writing testfn.csv");
  }
  std::cout << csv;
  return 0;
}

int cmd_verify(const Options& o) {
  require_symmetric_mu(o.mu);
  const porb::ProblemSpec spec(o.alpha, o.mu);
  const porb::OddTrajectory traj =
      porb::read_trajectory_csv(o.trajectory_file);
  const double beta = o.beta > 0.0 ? o.beta : porb::optimal_beta(o.alpha);
  const ordered_json diag =
      porb::diag_json(spec, traj, beta, o.seed, kRandomSamples);
  std::cout << diag.dump(2) << "\n";
  if (!o.out.empty()) {
    ensure_dir(o.out);
    porb::write_json(diag, o.out + "/verify_n" +
                               porb::horizon_tag(traj.horizon()) + ".json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{
      "direct-method solver for planar two-center escape orbits: minimizes "
      "the truncated action over odd polygonal trajectories and certifies "
      "growth, energy, and residual bounds"};
  app.require_subcommand(1);

  auto add_common = [&o](CLI::App* cmd, bool with_optimizer) {
    cmd->add_option("--alpha", o.alpha, "force exponent in (0, 2)")
        ->required();
    cmd->add_option("--mu", o.mu, "mass split; only 1/2 is supported");
    cmd->add_option("--beta", o.beta,
                    "start/test exponent (default: 2/(2+alpha))");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "seed for randomized spot checks");
    if (with_optimizer) {
      cmd->add_option("--grad-tol", o.grad_tol, "gradient norm stop");
      cmd->add_option("--max-iters", o.max_iters, "iteration cap");
    }
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "minimize the action for one horizon and write diagnostics");
  add_common(solve, true);
  solve->add_option("--n", o.n, "horizon (trajectory lives on [-n, n])");
  solve->add_option("--nodes-per-unit", o.nodes_per_unit,
                    "free nodes per unit time");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "continuation over a horizon list with certified bounds");
  add_common(sweep, true);
  sweep->add_option("--n-list", o.n_list, "horizons, comma separated")
      ->delimiter(',');
  sweep->add_option("--nodes-per-unit", o.nodes_per_unit,
                    "free nodes per unit time");
  sweep->add_option("--window", o.window,
                    "half width of the convergence comparison window");

  CLI::App* testfn = app.add_subcommand(
      "testfn", "tabulate the y-axis power test family against its bound");
  add_common(testfn, false);
  testfn->add_option("--n-list", o.n_list, "horizons, comma separated")
      ->delimiter(',');
  testfn->add_option("--nodes-per-unit", o.nodes_per_unit,
                     "free nodes per unit time");

  CLI::App* verify = app.add_subcommand(
      "verify", "recompute diagnostics from a stored trajectory CSV");
  add_common(verify, false);
  verify
      ->add_option("trajectory", o.trajectory_file,
                   "trajectory CSV written by solve")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cout << porb::error_json("ParameterRangeError", e.what()) << "\n";
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (testfn->parsed()) return cmd_testfn(o);
    return cmd_verify(o);
  } catch (const porb::Error& e) {
    std::cout << porb::error_json(e.kind(), e.what()) << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cout << porb::error_json("InternalError", e.what()) << "\n";
    return 1;
  }
}
