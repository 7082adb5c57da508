#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qwalk/recipe.hpp"

namespace qwalk {

enum class Output { Distribution, StdDev, Qfi, Fi, Interference };
enum class Format { Csv, Json };

const char* to_string(Output o) noexcept;
Output parse_output(const std::string& s);

inline constexpr int kConfigSchemaVersion = 1;

/// One simulation pipeline: a walk, a parameter grid and what to report.
struct RunConfig {
  std::string label;
  WalkKind kind = WalkKind::Standard;
  std::optional<int> bounded;  // wall position a; unbounded when empty
  InitialSpin init = InitialSpin::plus();
  int start_site = 0;
  std::vector<double> thetas;   // theta, or theta1 for split-step walks
  std::vector<double> theta2s;  // split-step only
  int t_max = 100;
  int every = 1;
  std::vector<int> times;  // explicit report times; overrides `every`
  std::vector<std::pair<int, int>> windows;
  std::vector<Output> outputs;
  bool exact_qfi = false;
  std::string out;
  Format format = Format::Csv;
  int workers = 1;

  /// Bounded [-a, a], or an unbounded lattice just wide enough for t_max.
  Topology topology() const;
  /// Throws ConfigError naming the first bad field.
  void validate() const;
  bool wants(Output o) const;
};

/// One output record. Rows are ordered by t, then by grid point.
struct ResultRow {
  int t = 0;
  double theta = 0.0;
  std::optional<double> theta2;
  std::string quantity;
  double value = 0.0;
  std::string units;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

/// Executes the pipeline. Output is independent of the worker count.
ResultTable run(const RunConfig& config);

/// Fixed header t,theta,theta2,quantity,value,units; 17 significant digits.
void write_csv(std::ostream& os, const ResultTable& table);
void write_json(std::ostream& os, const ResultTable& table);
void write_table(std::ostream& os, const ResultTable& table, Format format);

/// Decimal rendering used by the CSV writer (%.17g).
std::string format_number(double v);

/// Inclusive uniform grid; "start:stop:count".
std::vector<double> parse_grid(const std::string& spec);
std::pair<int, int> parse_window(const std::string& spec);

/// Applies the fields present in `doc` on top of `base`. Throws ConfigError.
RunConfig apply_config_json(RunConfig base, const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);

struct FigureRecipe {
  std::string name;
  std::string description;
  std::vector<RunConfig> panels;
};

std::vector<FigureRecipe> figure_recipes();
/// Throws ConfigError for an unknown name.
FigureRecipe figure_recipe(const std::string& name);

/// Uniform grid of `count` points over [start, stop].
std::vector<double> linspace(double start, double stop, int count);

}  // namespace qwalk
