#include "qwalk/report.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kZeroDenominator = 1e-12;

std::optional<double> safe_ratio(double num, std::optional<double> den) {
  if (!den || !(*den > kZeroDenominator)) {
    return std::nullopt;
  }
  return num / *den;
}

}  // namespace

std::optional<double> EstimationPoint::position_to_full() const {
  return safe_ratio(h_position_exact.value_or(h_position_approx), h_full);
}

std::optional<double> EstimationPoint::fisher_to_full() const {
  return safe_ratio(f_position, h_full);
}

std::optional<double> EstimationPoint::fisher_to_position() const {
  return safe_ratio(f_position, h_position_exact.value_or(h_position_approx));
}

PowerLawFit fit_t_squared(std::span<const int> t, std::span<const double> values) {
  if (t.size() != values.size() || t.empty()) {
    throw InvalidInput("t^2 fit needs matching, non-empty series");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double t2 = static_cast<double>(t[i]) * t[i];
    num += values[i] * t2;
    den += t2 * t2;
  }
  if (den <= 0.0) {
    throw InvalidInput("t^2 fit needs at least one t > 0");
  }
  PowerLawFit fit;
  fit.kappa = num / den;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double model = fit.kappa * t[i] * t[i];
    const double rel = std::abs(values[i] - model) / std::max(std::abs(values[i]), 1e-300);
    fit.max_relative_residual = std::max(fit.max_relative_residual, rel);
  }
  return fit;
}

std::vector<int> report_times(int t_max, int every, const std::vector<int>& times) {
  std::vector<int> out;
  if (!times.empty()) {
    out = times;
  } else {
    const int stride = std::max(every, 1);
    for (int t = 0; t <= t_max; t += stride) {
      out.push_back(t);
    }
    out.push_back(t_max);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove_if(out.begin(), out.end(), [&](int t) { return t < 0 || t > t_max; }),
            out.end());
  return out;
}

EstimationReport estimate(const WalkRecipe& recipe, int t_max, const EstimationOptions& options) {
  const std::vector<int> times = report_times(t_max, options.every, options.times);
  EstimationReport report;
  std::size_t next = 0;
  for_each_step(recipe, t_max, [&](const TangentState& ts) {
    if (next >= times.size() || ts.t() != times[next]) {
      return;
    }
    ++next;
    EstimationPoint pt;
    pt.t = ts.t();
    pt.h_full = full_qfi(ts);
    pt.h_position_approx = position_qfi_approx(ts);
    if (options.exact_qfi) {
      pt.h_position_exact = position_qfi_exact(reduce_position(ts));
    }
    const PositionDistribution dist = probability(ts.base());
    const std::vector<double> ddist = probability_derivative(ts);
    pt.f_position = classical_fi(dist, ddist);
    for (const auto& w : options.windows) {
      pt.f_limited.push_back(limited_fi(dist, ddist, w));
    }
    pt.sigma = std_dev(dist);
    report.points.push_back(std::move(pt));
  });

  std::vector<int> fit_t;
  std::vector<double> fit_full, fit_pos;
  for (const auto& p : report.points) {
    if (p.t > 0 && 4 * p.t >= t_max) {
      fit_t.push_back(p.t);
      fit_full.push_back(p.h_full);
      fit_pos.push_back(p.h_position_approx);
    }
  }
  if (!fit_t.empty()) {
    report.kappa_full = fit_t_squared(fit_t, fit_full);
    report.kappa_position = fit_t_squared(fit_t, fit_pos);
  }
  return report;
}

}  // namespace qwalk
