#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qwalk/fisher.hpp"
#include "qwalk/recipe.hpp"

namespace qwalk {

/// Per-time-step estimation figures. FI/QFI values are in rad^-2, sigma in sites.
struct EstimationPoint {
  int t = 0;
  double h_full = 0.0;
  double h_position_approx = 0.0;
  std::optional<double> h_position_exact;
  double f_position = 0.0;
  std::vector<double> f_limited;  // one entry per detector window
  double sigma = 0.0;

  /// Ratios are undefined (nullopt) while the denominator is still zero. The
  /// position QFI used is the exact one when available, else the approximate form.
  std::optional<double> position_to_full() const;
  std::optional<double> fisher_to_full() const;
  std::optional<double> fisher_to_position() const;
};

struct PowerLawFit {
  double kappa = 0.0;
  double max_relative_residual = 0.0;
};

/// Least-squares fit of values ~ kappa t^2 through the origin. The residual
/// is measured relative to each value.
PowerLawFit fit_t_squared(std::span<const int> t, std::span<const double> values);

struct EstimationOptions {
  bool exact_qfi = false;
  std::vector<DetectorWindow> windows;
  /// Report every `every`-th step; t_max is always reported.
  int every = 1;
  /// Explicit report times; overrides `every` when non-empty.
  std::vector<int> times;
};

struct EstimationReport {
  std::vector<EstimationPoint> points;
  /// t^2 coefficients fitted over the reported points with t >= t_max / 4.
  PowerLawFit kappa_full;
  PowerLawFit kappa_position;
};

EstimationReport estimate(const WalkRecipe& recipe, int t_max, const EstimationOptions& options);

/// Which steps a report with these options covers, ascending.
std::vector<int> report_times(int t_max, int every, const std::vector<int>& times);

}  // namespace qwalk
