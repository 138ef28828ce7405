#include "porb/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "porb/errors.hpp"
#include "porb/format.hpp"

namespace porb {

namespace {

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

OddTrajectory::OddTrajectory(double horizon, std::vector<Vec2> nodes)
    : horizon_(horizon), step_(0.0), nodes_(std::move(nodes)) {
  if (!(std::isfinite(horizon_) && horizon_ > 0.0))
    throw ParameterRangeError("horizon must be positive and finite");
  if (nodes_.empty())
    throw ParameterRangeError("trajectory needs at least one free node");
  for (const Vec2& p : nodes_)
    if (!finite(p)) throw ParameterRangeError("trajectory node is not finite");
  step_ = horizon_ / static_cast<double>(nodes_.size());
}

Vec2 OddTrajectory::node(int k) const {
  if (k == 0) return {0.0, 0.0};
  return nodes_[static_cast<size_t>(k - 1)];
}

Vec2 OddTrajectory::value_at(double t) const {
  if (!(std::fabs(t) <= horizon_))
    throw OutOfRangeError("time " + fmt17(t) + " outside [-" + fmt17(horizon_) +
                          ", " + fmt17(horizon_) + "]");
  // Negative times go through exact negation so q(-t) == -q(t) bit for bit.
  if (t < 0.0) return -value_at(-t);
  const int last = node_count() - 1;
  const double u = t / step_;
  const int k = std::min(static_cast<int>(u), last);
  const double s = u - static_cast<double>(k);
  const Vec2 a = node(k);
  const Vec2 b = node(k + 1);
  return {(1.0 - s) * a.x + s * b.x, (1.0 - s) * a.y + s * b.y};
}

double OddTrajectory::sobolev_norm() const {
  double sum = 0.0;
  Vec2 prev{0.0, 0.0};
  for (const Vec2& p : nodes_) {
    sum += squared_norm(p - prev);
    prev = p;
  }
  return std::sqrt(2.0 * sum / step_);
}

double OddTrajectory::sup_norm() const {
  double best = 0.0;
  for (const Vec2& p : nodes_) best = std::max(best, norm(p));
  return best;
}

double OddTrajectory::min_node_speed() const {
  const int k = min_node_speed_segment();
  return norm(node(k + 1) - node(k)) / step_;
}

int OddTrajectory::min_node_speed_segment() const {
  int arg = 0;
  double best = squared_norm(node(1));
  for (int k = 1; k < node_count(); ++k) {
    const double d = squared_norm(node(k + 1) - node(k));
    if (d < best) {
      best = d;
      arg = k;
    }
  }
  return arg;
}

double OddTrajectory::terminal_speed() const {
  const int m = node_count();
  return norm(node(m) - node(m - 1)) / step_;
}

OddTrajectory OddTrajectory::refine(int factor) const {
  if (factor < 1) throw ParameterRangeError("refine factor must be >= 1");
  if (factor == 1) return *this;
  const int m = node_count();
  std::vector<Vec2> fine;
  fine.reserve(static_cast<size_t>(m) * factor);
  for (int j = 1; j <= m * factor; ++j) {
    const int k = j / factor;
    const int r = j % factor;
    if (r == 0) {
      fine.push_back(node(k));  // keep coarse nodes exact
    } else {
      const double s = static_cast<double>(r) / static_cast<double>(factor);
      const Vec2 a = node(k);
      const Vec2 b = node(k + 1);
      fine.push_back({(1.0 - s) * a.x + s * b.x, (1.0 - s) * a.y + s * b.y});
    }
  }
  return OddTrajectory(horizon_, std::move(fine));
}

OddTrajectory make_uniform(double horizon, int node_count,
                           const Initializer& init, const ProblemSpec& spec,
                           double delta) {
  if (!(std::isfinite(horizon) && horizon > 0.0))
    throw ParameterRangeError("horizon must be positive and finite");
  if (node_count < 1)
    throw ParameterRangeError("node count must be at least 1");
  const double h = horizon / static_cast<double>(node_count);
  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<size_t>(node_count));
  switch (init.kind) {
    case Initializer::Kind::ZeroOffset:
      nodes.assign(static_cast<size_t>(node_count), Vec2{0.0, 0.0});
      break;
    case Initializer::Kind::YPower:
      if (!(std::isfinite(init.beta) && init.beta > 0.0))
        throw ParameterRangeError("y_power exponent must be positive");
      for (int k = 1; k <= node_count; ++k)
        nodes.push_back({0.0, std::pow(h * k, init.beta)});
      break;
    case Initializer::Kind::LinearRay:
      if (!finite(init.velocity))
        throw ParameterRangeError("linear_ray velocity must be finite");
      for (int k = 1; k <= node_count; ++k)
        nodes.push_back((h * k) * init.velocity);
      break;
  }
  for (int k = 0; k <= node_count; ++k) {
    const Vec2 p = k == 0 ? Vec2{0.0, 0.0} : nodes[static_cast<size_t>(k - 1)];
    if (min_center_distance(spec, p) < delta)
      throw InfeasibleInitError("initial node " + std::to_string(k) +
                                " is within " + fmt17(delta) + " of a center");
  }
  return OddTrajectory(horizon, std::move(nodes));
}

double min_center_distance(const ProblemSpec& spec, const OddTrajectory& traj) {
  double best = min_center_distance(spec, Vec2{0.0, 0.0});
  for (const Vec2& p : traj.nodes())
    best = std::min(best, min_center_distance(spec, p));
  return best;
}

void write_trajectory_csv(const OddTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "t,x,y\n";
  const int m = traj.node_count();
  const double h = traj.step();
  for (int k = -m; k <= m; ++k) {
    const Vec2 p = k < 0 ? -traj.node(-k) : traj.node(k);
    out << fmt17(k * h) << ',' << fmt17(p.x) << ',' << fmt17(p.y) << '\n';
  }
  if (!out.flush()) throw FormatError("failed writing " + path);
}

namespace {

// One CSV row "a,b,c" of doubles; returns false on blank lines.
bool parse_row(const std::string& line, double out[3], const std::string& path,
               int lineno) {
  if (line.empty()) return false;
  std::stringstream ss(line);
  std::string field;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, field, ','))
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": expected 3 columns");
    const char* begin = field.c_str();
    char* end = nullptr;
    out[i] = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0' && *end != '\r'))
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": bad number '" + field + "'");
  }
  std::string extra;
  if (std::getline(ss, extra, ',') && !extra.empty() && extra != "\r")
    throw FormatError(path + ":" + std::to_string(lineno) +
                      ": expected 3 columns");
  return true;
}

}  // namespace

OddTrajectory read_trajectory_csv(const std::string& path,
                                  double symmetry_tol) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y") throw FormatError(path + ": header must be t,x,y");

  std::vector<double> times;
  std::vector<Vec2> points;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    double row[3];
    if (!parse_row(line, row, path, lineno)) continue;
    times.push_back(row[0]);
    points.push_back({row[1], row[2]});
  }
  const size_t count = times.size();
  if (count < 3 || count % 2 == 0)
    throw FormatError(path + ": expected an odd number of rows >= 3, got " +
                      std::to_string(count));
  const size_t m = count / 2;  // rows = 2m+1
  const double horizon = times.back();
  if (!(std::isfinite(horizon) && horizon > 0.0))
    throw FormatError(path + ": last time must be positive");
  const double h = horizon / static_cast<double>(m);
  const double time_tol = 1e-9 * std::max(1.0, horizon);
  for (size_t i = 0; i < count; ++i) {
    const double expected = (static_cast<double>(i) - static_cast<double>(m)) * h;
    if (std::fabs(times[i] - expected) > time_tol)
      throw FormatError(path + ": times are not a uniform grid over [-n, n]");
  }
  for (size_t k = 0; k <= m; ++k) {
    const Vec2 sum = points[m + k] + points[m - k];
    if (norm(sum) > symmetry_tol)
      throw SymmetryError(path + ": q(-t) + q(t) = " + fmt17(norm(sum)) +
                          " at t = " + fmt17(times[m + k]) + " exceeds " +
                          fmt17(symmetry_tol));
  }
  std::vector<Vec2> nodes(points.begin() + static_cast<long>(m) + 1,
                          points.end());
  return OddTrajectory(horizon, std::move(nodes));
}

}  // namespace porb
