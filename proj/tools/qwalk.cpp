// Command-line driver for walk simulations and estimation sweeps.
//
//   qwalk walk --theta 0.3927 --steps 200 --out dist.csv
//   qwalk qfi --grid 0.1:1.5:8 --steps 200 --bounded 50 --exact-qfi
//   qwalk figure fig7 --out results/
//
// Exit codes: 0 success, 2 configuration error, 3 capacity/invariant violation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "qwalk/errors.hpp"
#include "qwalk/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Flags {
  std::optional<double> theta;
  std::optional<double> theta1;
  std::optional<double> theta2;
  std::optional<int> steps;
  std::optional<int> bounded;
  std::vector<std::string> windows;
  std::optional<std::string> grid;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> workers;
  std::optional<int> every;
  std::optional<std::string> config;
  bool exact_qfi = false;
  std::string figure;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--theta", f.theta, "coin angle (rad)");
  cmd->add_option("--theta1", f.theta1, "split-step first coin angle (rad)");
  cmd->add_option("--theta2", f.theta2, "split-step second coin angle (rad)");
  cmd->add_option("--steps", f.steps, "number of time steps");
  cmd->add_option("--bounded", f.bounded, "reflecting walls at -a and a");
  cmd->add_option("--window", f.windows, "detector window lo:hi (repeatable)");
  cmd->add_option("--grid", f.grid, "angle grid start:stop:count");
  cmd->add_option("--out", f.out, "output file (directory for `figure`)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", f.workers, "parallel grid workers");
  cmd->add_option("--every", f.every, "report every n-th step");
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_flag("--exact-qfi", f.exact_qfi, "also report the spectral position QFI");
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw qwalk::ConfigError("config", "cannot open '" + path + "'");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw qwalk::ConfigError("config", e.what());
  }
  return doc;
}

qwalk::RunConfig apply_flags(qwalk::RunConfig cfg, const Flags& f, bool final_only) {
  if (f.config) {
    const nlohmann::json doc = load_config(*f.config);
    cfg = qwalk::apply_config_json(std::move(cfg), doc);
    if (doc.contains("every") || doc.contains("times")) final_only = false;
  }
  if (f.steps) cfg.t_max = *f.steps;
  if (f.bounded) cfg.bounded = *f.bounded;
  if (f.every) {
    cfg.every = *f.every;
    cfg.times.clear();
    final_only = false;
  }
  if (f.workers) cfg.workers = *f.workers;
  if (f.out) cfg.out = *f.out;
  if (f.format) cfg.format = *f.format == "json" ? qwalk::Format::Json : qwalk::Format::Csv;
  if (f.exact_qfi) cfg.exact_qfi = true;
  if (!f.windows.empty()) {
    cfg.windows.clear();
    for (const auto& w : f.windows) cfg.windows.push_back(qwalk::parse_window(w));
  }
  if (cfg.kind == qwalk::WalkKind::SplitStep) {
    if (f.theta) throw qwalk::ConfigError("theta", "split-step walks take --theta1/--theta2");
    if (f.theta1) cfg.thetas = {*f.theta1};
    if (f.grid) cfg.thetas = qwalk::parse_grid(*f.grid);
    if (f.theta2) cfg.theta2s = {*f.theta2};
  } else {
    if (f.theta1 || f.theta2) {
      throw qwalk::ConfigError("theta1", "only split-step walks take --theta1/--theta2");
    }
    if (f.theta) cfg.thetas = {*f.theta};
    if (f.grid) cfg.thetas = qwalk::parse_grid(*f.grid);
  }
  if (final_only) cfg.times = {cfg.t_max};
  return cfg;
}

void emit(const qwalk::ResultTable& table, const qwalk::RunConfig& cfg) {
  if (cfg.out.empty()) {
    qwalk::write_table(std::cout, table, cfg.format);
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) {
    throw qwalk::ConfigError("out", "cannot write '" + cfg.out + "'");
  }
  qwalk::write_table(os, table, cfg.format);
}

int run_figure(const Flags& f) {
  if (f.figure == "list") {
    for (const auto& fig : qwalk::figure_recipes()) {
      std::cout << fig.name << "\t" << fig.description << "\n";
    }
    return 0;
  }
  const qwalk::FigureRecipe fig = qwalk::figure_recipe(f.figure);
  const std::filesystem::path dir = f.out.value_or(".");
  std::filesystem::create_directories(dir);
  for (qwalk::RunConfig panel : fig.panels) {
    if (f.workers) panel.workers = *f.workers;
    if (f.format) panel.format = *f.format == "json" ? qwalk::Format::Json : qwalk::Format::Csv;
    if (f.exact_qfi) panel.exact_qfi = true;
    const char* ext = panel.format == qwalk::Format::Json ? ".json" : ".csv";
    panel.out = (dir / (fig.name + "_" + panel.label + ext)).string();
    emit(qwalk::run(panel), panel);
    std::cerr << "wrote " << panel.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time quantum walk simulation and coin-parameter estimation"};
  app.require_subcommand(1);
  Flags flags;

  struct Command {
    const char* name;
    const char* help;
    qwalk::RunConfig defaults;
    bool final_only;  // report only the last step unless asked otherwise
  };
  auto defaults = [](std::vector<qwalk::Output> outputs,
                     qwalk::WalkKind kind = qwalk::WalkKind::Standard) {
    qwalk::RunConfig c;
    c.outputs = std::move(outputs);
    c.kind = kind;
    return c;
  };
  using qwalk::Output;
  std::vector<Command> commands{
      {"walk", "position distribution and spread", defaults({Output::Distribution, Output::StdDev}), true},
      {"qfi", "full and position-space QFI time series", defaults({Output::Qfi}), false},
      {"fi", "position Fisher information, optionally windowed", defaults({Output::Fi}), false},
      {"interference", "degree-of-interference map", defaults({Output::Interference}), false},
      {"splitstep", "split-step spread and per-angle QFI",
       defaults({Output::StdDev, Output::Qfi}, qwalk::WalkKind::SplitStep), true},
      {"sweep", "run a configuration over an angle grid", defaults({Output::Qfi}), true},
  };

  std::vector<CLI::App*> subs;
  for (auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common_flags(sub, flags);
    subs.push_back(sub);
  }
  auto* figure = app.add_subcommand("figure", "run a named figure preset (or `list`)");
  figure->add_option("name", flags.figure, "preset name")->required();
  figure->add_option("--out", flags.out, "output directory");
  figure->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  figure->add_option("--workers", flags.workers, "parallel grid workers");
  figure->add_flag("--exact-qfi", flags.exact_qfi, "also report the spectral position QFI");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (figure->parsed()) {
      return run_figure(flags);
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const qwalk::RunConfig cfg = apply_flags(commands[i].defaults, flags, commands[i].final_only);
      emit(qwalk::run(cfg), cfg);
    }
    return 0;
  } catch (const qwalk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qwalk::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qwalk::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const qwalk::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  }
}
