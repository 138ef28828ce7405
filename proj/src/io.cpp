#include "porb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "porb/action.hpp"
#include "porb/format.hpp"

namespace porb {

namespace {

using nlohmann::ordered_json;

// Top 53 bits of the (fully specified) mt19937_64 stream; portable across
// platforms, unlike uniform_real_distribution.
double unit_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

BoundConstants certificate_constants(double alpha, double beta) {
  try {
    return bound_constants(alpha, beta);
  } catch (const ParameterRangeError&) {
    return bound_constants(alpha, optimal_beta(alpha));
  }
}

ordered_json margin_block(const BoundMargin& m) {
  return ordered_json{{"threshold", m.threshold},
                      {"margin", m.margin},
                      {"vacuous", m.vacuous}};
}

}  // namespace

nlohmann::ordered_json diag_json(const ProblemSpec& spec,
                                 const OddTrajectory& traj, double beta,
                                 std::uint64_t seed, int samples) {
  const double n = traj.horizon();
  const int m = traj.node_count();
  const ActionEvaluation ae = action(spec, traj);
  const EnergyStats estats = energy_stats(spec, traj);
  const BoundConstants k = certificate_constants(spec.alpha, beta);

  SweepRow row;
  row.n = n;
  row.a_n = ae.value;
  row.h_n = estats.mean;
  row.sup_norm = traj.sup_norm();
  const BoundMargin am = certify_action_bound({row}, k).front();
  const BoundMargin em = certify_energy_bound({row}, k).front();
  const BoundMargin sm = certify_supnorm_growth({row}, k, spec.alpha).front();

  // Pointwise zero-energy kinetic bound, prefactor 1, over anchor and nodes;
  // the larger prefactor variant is recorded alongside for comparison but
  // fails at small |q| and is not certified.
  const std::vector<double> margins = zero_energy_kinetic_bound(spec, traj);
  double margin_min = std::numeric_limits<double>::infinity();
  for (double v : margins) margin_min = std::min(margin_min, v);
  const double alt_prefactor = std::pow(2.0, 0.5 * (spec.alpha + 2.0));
  double alt_margin_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= m; ++i) {
    const Vec2 p = traj.node(i);
    const double floor =
        alt_prefactor *
        std::pow(2.0 * squared_norm(p) + 0.5, -0.5 * spec.alpha);
    alt_margin_min =
        std::min(alt_margin_min, potential(spec, p) - floor);
  }

  // Random spot check of the same pointwise bound in a box covering the
  // trajectory; resamples points that land inside the collision ball.
  std::mt19937_64 gen(seed);
  const double reach = traj.sup_norm() + 1.0;
  double random_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Vec2 p;
    do {
      p = {reach * (2.0 * unit_double(gen) - 1.0),
           reach * (2.0 * unit_double(gen) - 1.0)};
    } while (min_center_distance(spec, p) < kDefaultCollisionDelta);
    random_min = std::min(random_min, kinetic_bound_margin(spec, p));
  }

  ordered_json j;
  j["schema"] = kSchemaTag;
  j["config"] = ordered_json{{"alpha", spec.alpha},
                             {"mu", spec.mu},
                             {"horizon", n},
                             {"node_count", m},
                             {"step", traj.step()},
                             {"beta", beta},
                             {"beta_is_odd_rational", is_odd_rational(beta)},
                             {"seed", seed},
                             {"samples", samples}};
  ordered_json sol;
  sol["action"] = ordered_json{{"value", ae.value},
                               {"kinetic", ae.kinetic},
                               {"potential", ae.potential}};
  sol["min_center_distance"] = ae.min_center_distance;
  sol["sup_norm"] = traj.sup_norm();
  sol["sobolev_norm"] = traj.sobolev_norm();
  sol["min_node_speed"] = traj.min_node_speed();
  sol["min_node_speed_segment"] = traj.min_node_speed_segment();
  sol["terminal_speed"] = traj.terminal_speed();
  sol["energy"] = ordered_json{{"mean", estats.mean},
                               {"spread", estats.spread},
                               {"count", estats.count},
                               {"window_fraction", 0.8}};
  sol["el_residual"] = m >= 3 ? el_residual(spec, traj)
                              : std::numeric_limits<double>::quiet_NaN();
  sol["bound"] = ordered_json{{"beta", k.beta},
                              {"theta", k.theta},
                              {"c", k.c},
                              {"threshold", am.threshold},
                              {"margin", am.margin}};
  ordered_json eb = margin_block(em);
  eb["negative_energy"] = estats.mean < 0.0;
  sol["energy_bound"] = eb;
  sol["supnorm_bound"] = margin_block(sm);
  sol["pointwise_kinetic_bound"] =
      ordered_json{{"prefactor", 1.0},
                   {"min_margin", margin_min},
                   {"alt_prefactor", alt_prefactor},
                   {"alt_min_margin", alt_margin_min},
                   {"alt_holds", alt_margin_min >= 0.0},
                   {"random_min_margin", random_min}};
  j["solution"] = sol;
  j["bound_margin"] = am.margin;
  return j;
}

nlohmann::ordered_json sweep_json(const SweepResult& result,
                                  const SweepConfig& config) {
  const ContinuationReport& rep = result.report;
  ordered_json j;
  j["schema"] = kSchemaTag;
  j["config"] =
      ordered_json{{"alpha", config.alpha},
                   {"mu", config.mu},
                   {"horizons", config.horizons},
                   {"nodes_per_unit", config.nodes_per_unit},
                   {"start_beta", result.start_beta},
                   {"beta_is_odd_rational", is_odd_rational(result.start_beta)},
                   {"grad_tol", config.options.grad_tol},
                   {"max_iters", config.options.max_iters},
                   {"window_halfwidth", config.window_halfwidth}};
  j["alpha"] = rep.alpha;
  j["beta"] = rep.beta;
  j["theta"] = rep.theta;
  j["c"] = rep.c;
  ordered_json rows = ordered_json::array();
  for (const SweepRow& row : rep.rows) {
    ordered_json r;
    r["n"] = row.n;
    r["M"] = row.node_count;
    r["a_n"] = row.a_n;
    r["h_n"] = row.h_n;
    r["energy_spread"] = row.energy_spread;
    r["sup_norm"] = row.sup_norm;
    r["min_speed"] = row.min_speed;
    r["el_residual"] = row.el_residual;
    r["terminal_speed"] = row.terminal_speed;
    r["converged"] = row.converged;
    r["iterations"] = row.iterations;
    r["bound_margins"] = ordered_json{{"action", row.action_margin},
                                      {"energy", row.energy_margin},
                                      {"supnorm", row.supnorm_margin},
                                      {"supnorm_vacuous", row.supnorm_vacuous}};
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["fitted_theta"] = rep.fitted_theta;
  j["window"] = ordered_json{{"halfwidth", result.window_halfwidth},
                             {"deltas", result.window_deltas}};
  j["all_converged"] = result.all_converged;
  return j;
}

std::string error_json(const std::string& kind, const std::string& message) {
  ordered_json j;
  j["schema"] = kSchemaTag;
  j["error"] = ordered_json{{"kind", kind}, {"message", message}};
  return j.dump(2);
}

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out.flush()) throw FormatError("failed writing " + path);
}

void write_sweep_csv(const ContinuationReport& report,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "n,M,a_n,h_n,energy_spread,sup_norm,min_speed,el_residual,"
         "terminal_speed\n";
  for (const SweepRow& row : report.rows)
    out << fmt17(row.n) << ',' << row.node_count << ',' << fmt17(row.a_n)
        << ',' << fmt17(row.h_n) << ',' << fmt17(row.energy_spread) << ','
        << fmt17(row.sup_norm) << ',' << fmt17(row.min_speed) << ','
        << fmt17(row.el_residual) << ',' << fmt17(row.terminal_speed) << '\n';
  if (!out.flush()) throw FormatError("failed writing " + path);
}

void write_loglog_dat(const ContinuationReport& report,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "# log10_n log10_a_n\n";
  for (const SweepRow& row : report.rows)
    out << fmt17(std::log10(row.n)) << ' ' << fmt17(std::log10(row.a_n))
        << '\n';
  if (!out.flush()) throw FormatError("failed writing " + path);
}

void write_energy_dat(const ContinuationReport& report,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "# n h_n abs_h_n\n";
  for (const SweepRow& row : report.rows)
    out << fmt17(row.n) << ' ' << fmt17(row.h_n) << ' '
        << fmt17(std::fabs(row.h_n)) << '\n';
  if (!out.flush()) throw FormatError("failed writing " + path);
}

void write_overlay_dat(const std::vector<OddTrajectory>& trajectories,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  bool first = true;
  for (const OddTrajectory& traj : trajectories) {
    if (!first) out << "\n\n";
    first = false;
    out << "# n = " << horizon_tag(traj.horizon()) << '\n';
    const int m = traj.node_count();
    for (int k = -m; k <= m; ++k) {
      const Vec2 p = k < 0 ? -traj.node(-k) : traj.node(k);
      out << fmt17(p.x) << ' ' << fmt17(p.y) << '\n';
    }
  }
  if (!out.flush()) throw FormatError("failed writing " + path);
}

std::string horizon_tag(double n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", n);
  return buf;
}

}  // namespace porb
