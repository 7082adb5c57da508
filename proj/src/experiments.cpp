#include "qwalk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

#include "qwalk/errors.hpp"
#include "qwalk/fisher.hpp"
#include "qwalk/interference.hpp"
#include "qwalk/report.hpp"

namespace qwalk {

namespace {

constexpr const char* kUnitsInformation = "rad^-2";
constexpr const char* kUnitsKappa = "rad^-2 step^-2";
constexpr const char* kUnitsSites = "sites";
constexpr const char* kUnitsNone = "1";

constexpr double kRatioFloor = 1e-12;

struct GridPoint {
  double theta;
  std::optional<double> theta2;
};

/// Runs task(i) for i in [0, count) on up to `workers` threads. The first
/// failure by index is rethrown after all threads join.
template <class Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

std::string site_quantity(const char* name, int x) {
  return std::string(name) + "(x=" + std::to_string(x) + ")";
}

std::string window_name(const std::pair<int, int>& w) {
  return "F_xl[" + std::to_string(w.first) + ":" + std::to_string(w.second) + "]";
}

class RowSink {
 public:
  RowSink(const GridPoint& point, std::vector<ResultRow>& rows) : point_(point), rows_(rows) {}

  void add(int t, std::string quantity, double value, const char* units) {
    rows_.push_back(ResultRow{t, point_.theta, point_.theta2, std::move(quantity), value, units});
  }
  void add_ratio(int t, std::string quantity, double num, double den) {
    if (den > kRatioFloor) {
      add(t, std::move(quantity), num / den, kUnitsNone);
    }
  }

 private:
  const GridPoint& point_;
  std::vector<ResultRow>& rows_;
};

/// Scalar estimation rows for one trajectory; `suffix` tags split-step
/// quantities with the parameter they refer to.
void estimation_rows(const RunConfig& cfg, const WalkRecipe& recipe, const std::string& suffix,
                     bool with_sigma, RowSink& sink) {
  const std::vector<int> times = report_times(cfg.t_max, cfg.every, cfg.times);
  const bool qfi = cfg.wants(Output::Qfi);
  const bool fi = cfg.wants(Output::Fi);
  const bool dist_rows = cfg.wants(Output::Distribution) && suffix.empty();
  const bool sigma = with_sigma && cfg.wants(Output::StdDev);
  std::vector<DetectorWindow> windows;
  for (const auto& w : cfg.windows) {
    windows.push_back(DetectorWindow::range(w.first, w.second));
  }

  std::vector<int> fit_t;
  std::vector<double> fit_full, fit_pos;
  std::size_t next = 0;
  for_each_step(recipe, cfg.t_max, [&](const TangentState& ts) {
    if (next >= times.size() || ts.t() != times[next]) {
      return;
    }
    ++next;
    const int t = ts.t();
    const PositionDistribution dist = probability(ts.base());
    if (dist_rows) {
      for (int x = dist.min_site; x <= dist.max_site(); ++x) {
        sink.add(t, site_quantity("P", x), dist.at(x), kUnitsNone);
      }
    }
    if (sigma) {
      sink.add(t, "sigma", std_dev(dist), kUnitsSites);
    }
    if (!qfi && !fi) {
      return;
    }
    const double h_full = full_qfi(ts);
    const double h_pos = position_qfi_approx(ts);
    std::optional<double> h_exact;
    if (cfg.exact_qfi) {
      h_exact = position_qfi_exact(reduce_position(ts));
    }
    if (qfi) {
      sink.add(t, "H_f" + suffix, h_full, kUnitsInformation);
      sink.add(t, "H_w" + suffix, h_pos, kUnitsInformation);
      if (h_exact) {
        sink.add(t, "H_w_exact" + suffix, *h_exact, kUnitsInformation);
      }
      sink.add_ratio(t, "H_w/H_f" + suffix, h_pos, h_full);
      if (h_exact) {
        sink.add_ratio(t, "H_w_exact/H_f" + suffix, *h_exact, h_full);
      }
      if (t > 0 && 4 * t >= cfg.t_max) {
        fit_t.push_back(t);
        fit_full.push_back(h_full);
        fit_pos.push_back(h_pos);
      }
    }
    if (fi) {
      const std::vector<double> ddist = probability_derivative(ts);
      const double f_x = classical_fi(dist, ddist);
      sink.add(t, "F_x" + suffix, f_x, kUnitsInformation);
      for (std::size_t i = 0; i < windows.size(); ++i) {
        sink.add(t, window_name(cfg.windows[i]) + suffix, limited_fi(dist, ddist, windows[i]),
                 kUnitsInformation);
      }
      sink.add_ratio(t, "F_x/H_f" + suffix, f_x, h_full);
      sink.add_ratio(t, "F_x/H_w" + suffix, f_x, h_exact.value_or(h_pos));
    }
  });

  if (qfi && !fit_t.empty()) {
    sink.add(cfg.t_max, "kappa_f" + suffix, fit_t_squared(fit_t, fit_full).kappa, kUnitsKappa);
    sink.add(cfg.t_max, "kappa_w" + suffix, fit_t_squared(fit_t, fit_pos).kappa, kUnitsKappa);
  }
}

void interference_rows(const RunConfig& cfg, const WalkRecipe& recipe, RowSink& sink) {
  const InterferenceMap map = mu_map(recipe, cfg.t_max);
  for (int t : report_times(cfg.t_max, cfg.every, cfg.times)) {
    for (int x = map.min_site; x <= map.max_site(); ++x) {
      sink.add(t, site_quantity("mu", x), map.at(t, x), kUnitsNone);
    }
  }
}

std::vector<ResultRow> run_point(const RunConfig& cfg, const GridPoint& point) {
  std::vector<ResultRow> rows;
  RowSink sink(point, rows);
  const Topology topo = cfg.topology();
  if (cfg.kind == WalkKind::Standard) {
    WalkRecipe recipe = WalkRecipe::standard(point.theta, topo);
    recipe.init = cfg.init;
    recipe.start_site = cfg.start_site;
    estimation_rows(cfg, recipe, "", true, sink);
    if (cfg.wants(Output::Interference)) {
      interference_rows(cfg, recipe, sink);
    }
    return rows;
  }
  WalkRecipe r1 = WalkRecipe::split(point.theta, *point.theta2, ParameterTag::Theta1, topo);
  r1.init = cfg.init;
  r1.start_site = cfg.start_site;
  WalkRecipe r2 = r1;
  r2.tag = ParameterTag::Theta2;
  // Distribution and sigma do not depend on the tag; emit them once.
  {
    RunConfig plain = cfg;
    std::erase_if(plain.outputs, [](Output o) { return o == Output::Qfi || o == Output::Fi; });
    if (!plain.outputs.empty()) {
      estimation_rows(plain, r1, "", true, sink);
    }
  }
  if (cfg.wants(Output::Qfi) || cfg.wants(Output::Fi)) {
    RunConfig info = cfg;
    std::erase_if(info.outputs, [](Output o) { return o != Output::Qfi && o != Output::Fi; });
    estimation_rows(info, r1, "[theta1]", false, sink);
    estimation_rows(info, r2, "[theta2]", false, sink);
  }
  return rows;
}

bool strictly_increasing_in_range(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= std::numbers::pi)) {
      return false;
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(Output o) noexcept {
  switch (o) {
    case Output::Distribution:
      return "distribution";
    case Output::StdDev:
      return "stddev";
    case Output::Qfi:
      return "qfi";
    case Output::Fi:
      return "fi";
    case Output::Interference:
      return "interference";
  }
  return "?";
}

Output parse_output(const std::string& s) {
  for (Output o : {Output::Distribution, Output::StdDev, Output::Qfi, Output::Fi,
                   Output::Interference}) {
    if (s == to_string(o)) {
      return o;
    }
  }
  throw ConfigError("outputs", "unknown output '" + s + "'");
}

Topology RunConfig::topology() const {
  if (bounded) {
    return Topology::bounded(*bounded);
  }
  return Topology::unbounded(std::max(1, t_max + std::abs(start_site)));
}

bool RunConfig::wants(Output o) const {
  return std::find(outputs.begin(), outputs.end(), o) != outputs.end();
}

void RunConfig::validate() const {
  if (t_max < 1) {
    throw ConfigError("steps", "t_max must be at least 1");
  }
  if (thetas.empty()) {
    throw ConfigError(kind == WalkKind::SplitStep ? "theta1" : "theta", "grid is empty");
  }
  if (!strictly_increasing_in_range(thetas)) {
    throw ConfigError(kind == WalkKind::SplitStep ? "theta1" : "theta",
                      "grid must be strictly increasing within [0, pi]");
  }
  if (kind == WalkKind::SplitStep) {
    if (theta2s.empty()) {
      throw ConfigError("theta2", "grid is empty");
    }
    if (!strictly_increasing_in_range(theta2s)) {
      throw ConfigError("theta2", "grid must be strictly increasing within [0, pi]");
    }
    if (bounded) {
      throw ConfigError("bounded", "split-step walks support only unbounded lattices");
    }
    if (wants(Output::Interference)) {
      throw ConfigError("outputs", "interference maps need a standard walk");
    }
  } else if (!theta2s.empty()) {
    throw ConfigError("theta2", "only split-step walks take a second angle");
  }
  if (bounded && *bounded < 1) {
    throw ConfigError("bounded", "wall position must be at least 1");
  }
  if (every < 1) {
    throw ConfigError("every", "report stride must be at least 1");
  }
  for (int t : times) {
    if (t < 0 || t > t_max) {
      throw ConfigError("times", "report time " + std::to_string(t) + " outside [0, t_max]");
    }
  }
  if (outputs.empty()) {
    throw ConfigError("outputs", "no outputs requested");
  }
  if (workers < 1) {
    throw ConfigError("workers", "worker count must be at least 1");
  }
  try {
    init.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("initial", e.what());
  }
  const Topology topo = topology();
  if (!topo.contains(start_site)) {
    throw ConfigError("start_site", "start site is off the lattice");
  }
  for (const auto& [lo, hi] : windows) {
    if (hi < lo) {
      throw ConfigError("window", "window " + std::to_string(lo) + ":" + std::to_string(hi) +
                                      " is empty");
    }
    if (!topo.contains(lo) || !topo.contains(hi)) {
      throw ConfigError("window", "window " + std::to_string(lo) + ":" + std::to_string(hi) +
                                      " is not inside the lattice");
    }
  }
}

ResultTable run(const RunConfig& config) {
  config.validate();
  std::vector<GridPoint> points;
  if (config.kind == WalkKind::SplitStep) {
    for (double t1 : config.thetas) {
      for (double t2 : config.theta2s) {
        points.push_back({t1, t2});
      }
    }
  } else {
    for (double th : config.thetas) {
      points.push_back({th, std::nullopt});
    }
  }

  std::vector<std::vector<ResultRow>> per_point(points.size());
  parallel_for(points.size(), config.workers,
               [&](std::size_t i) { per_point[i] = run_point(config, points[i]); });

  ResultTable table;
  for (auto& rows : per_point) {
    table.rows.insert(table.rows.end(), std::make_move_iterator(rows.begin()),
                      std::make_move_iterator(rows.end()));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.t < b.t; });
  return table;
}

std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> out;
  if (count <= 0) {
    return out;
  }
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(start + (stop - start) * i / (count - 1));
  }
  return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig preset(std::string label, std::vector<Output> outputs, int t_max) {
  RunConfig c;
  c.label = std::move(label);
  c.outputs = std::move(outputs);
  c.t_max = t_max;
  return c;
}

const std::vector<double>& figure_thetas() {
  static const std::vector<double> v{kPi / 8, kPi / 4, 3 * kPi / 8};
  return v;
}

/// k pi / 128 for k = 1..63: the open interval (0, pi/2) with pi/8, pi/4 and
/// 3pi/8 on the grid.
std::vector<double> half_open_grid() {
  std::vector<double> v;
  for (int k = 1; k < 64; ++k) {
    v.push_back(k * kPi / 128);
  }
  return v;
}

std::string theta_label(int eighths) {
  return "theta" + std::to_string(eighths) + "pi8";
}

}  // namespace

std::vector<FigureRecipe> figure_recipes() {
  std::vector<FigureRecipe> figs;
  const int eighths[] = {1, 2, 3};

  {
    FigureRecipe f{"fig1", "position distributions after 200 steps, unbounded and [-50, 50]", {}};
    for (bool walls : {false, true}) {
      for (int k : eighths) {
        RunConfig c = preset(std::string(walls ? "bounded_" : "unbounded_") + theta_label(k),
                             {Output::Distribution, Output::StdDev}, 200);
        c.thetas = {k * kPi / 8};
        if (walls) c.bounded = 50;
        c.times = {200};
        f.panels.push_back(c);
      }
    }
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig2", "full QFI H_f versus t, unbounded and bounded", {}};
    for (bool walls : {false, true}) {
      RunConfig c = preset(walls ? "bounded" : "unbounded", {Output::Qfi}, 200);
      c.thetas = figure_thetas();
      if (walls) c.bounded = 50;
      f.panels.push_back(c);
    }
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig3", "position QFI H_w versus t on [-50, 50] and unbounded", {}};
    for (bool walls : {false, true}) {
      RunConfig c = preset(walls ? "bounded" : "unbounded", {Output::Qfi}, 200);
      c.thetas = figure_thetas();
      if (walls) c.bounded = 50;
      f.panels.push_back(c);
    }
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig4", "degree of interference maps, 3 angles x 2 topologies", {}};
    for (int k : eighths) {
      for (bool walls : {false, true}) {
        RunConfig c = preset(std::string(walls ? "bounded_" : "unbounded_") + theta_label(k),
                             {Output::Interference}, 200);
        c.thetas = {k * kPi / 8};
        if (walls) c.bounded = 50;
        f.panels.push_back(c);
      }
    }
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig5", "ratio H_w/H_f versus t, unbounded", {}};
    RunConfig c = preset("unbounded", {Output::Qfi}, 200);
    c.thetas = figure_thetas();
    f.panels.push_back(c);
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig6", "H_w versus theta at fixed t, unbounded and bounded", {}};
    for (bool walls : {false, true}) {
      RunConfig c = preset(walls ? "bounded" : "unbounded", {Output::Qfi}, 200);
      c.thetas = linspace(0.0, kPi, 64);
      c.times = {50, 100, 150, 200};
      if (walls) c.bounded = 50;
      f.panels.push_back(c);
    }
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig6b", "H_w over the (t, theta) plane, unbounded", {}};
    RunConfig c = preset("unbounded", {Output::Qfi}, 200);
    c.thetas = linspace(0.0, kPi, 64);
    f.panels.push_back(c);
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig7", "position FI F_x and windowed F_xl versus t, unbounded", {}};
    RunConfig c = preset("unbounded", {Output::Fi}, 200);
    c.thetas = figure_thetas();
    c.windows = {{-25, 25}, {-50, 50}, {-100, 100}};
    f.panels.push_back(c);
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig8", "split-step sigma versus theta1 after 100 steps", {}};
    RunConfig c = preset("unbounded", {Output::StdDev}, 100);
    c.kind = WalkKind::SplitStep;
    c.thetas = linspace(0.0, kPi / 2, 32);
    c.theta2s = figure_thetas();
    c.times = {100};
    f.panels.push_back(c);
    figs.push_back(f);
  }
  {
    FigureRecipe f{"fig9", "split-step H_w(theta2) and H_w(theta1) after 100 steps", {}};
    RunConfig by_theta2 = preset("vs_theta2", {Output::Qfi}, 100);
    by_theta2.kind = WalkKind::SplitStep;
    by_theta2.thetas = figure_thetas();
    by_theta2.theta2s = half_open_grid();
    by_theta2.times = {100};
    f.panels.push_back(by_theta2);
    RunConfig by_theta1 = preset("vs_theta1", {Output::Qfi}, 100);
    by_theta1.kind = WalkKind::SplitStep;
    by_theta1.thetas = half_open_grid();
    by_theta1.theta2s = figure_thetas();
    by_theta1.times = {100};
    f.panels.push_back(by_theta1);
    figs.push_back(f);
  }
  return figs;
}

FigureRecipe figure_recipe(const std::string& name) {
  for (auto& f : figure_recipes()) {
    if (f.name == name) {
      return f;
    }
  }
  throw ConfigError("figure", "unknown figure '" + name + "'");
}

}  // namespace qwalk
