// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are fixed; nothing here is tuned to pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "matrix_oracle.hpp"
#include "qwalk/fisher.hpp"
#include "qwalk/interference.hpp"
#include "qwalk/recipe.hpp"
#include "qwalk/report.hpp"

using namespace qwalk;

namespace {

constexpr double pi = std::numbers::pi;
const std::vector<double> kFigureThetas{pi / 8, pi / 4, 3 * pi / 8};
const char* const kFigureNames[] = {"pi/8", "pi/4", "3pi/8"};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail_if(bool bad, const std::string& why) {
    if (bad) pass = false;
    note(bad ? why + " [miss]" : why);
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared sweep over theta = k pi / 16, unbounded, t <= 200.

struct SweepRow {
  double h_full = 0, h_approx = 0, h_exact = NAN, f_x = 0, f_xl = 0;
};
struct Sweep {
  double theta = 0;
  std::vector<SweepRow> rows;  // indexed by t
};

bool exact_wanted(int t) { return t >= 100 || (t >= 10 && t % 10 == 0); }

std::vector<Sweep> run_sweep() {
  std::vector<Sweep> out(7);
  std::vector<std::jthread> pool;
  for (int k = 1; k <= 7; ++k) {
    pool.emplace_back([&out, k] {
      Sweep& s = out[k - 1];
      s.theta = k * pi / 16;
      s.rows.resize(201);
      const DetectorWindow window = DetectorWindow::range(-25, 25);
      for_each_step(WalkRecipe::standard(s.theta, Topology::unbounded(200)), 200,
                    [&](const TangentState& ts) {
                      SweepRow& r = s.rows[ts.t()];
                      const auto dist = probability(ts.base());
                      const auto dd = probability_derivative(ts);
                      r.h_full = full_qfi(ts);
                      r.h_approx = position_qfi_approx(ts);
                      r.f_x = classical_fi(dist, dd);
                      r.f_xl = limited_fi(dist, dd, window);
                      if (exact_wanted(ts.t())) {
                        r.h_exact = position_qfi_exact(reduce_position(ts));
                      }
                    });
    });
  }
  pool.clear();
  return out;
}

// ---------------------------------------------------------------------------

Outcome unitarity() {
  Outcome o;
  double worst = 0.0;
  for (double th : kFigureThetas) {
    worst = std::max(worst, std::abs(probability(simulate(WalkRecipe::standard(th, Topology::unbounded(200)), 200).base()).total() - 1.0));
    worst = std::max(worst, std::abs(probability(simulate(WalkRecipe::standard(th, Topology::bounded(50)), 200).base()).total() - 1.0));
    for (double th2 : kFigureThetas) {
      const auto r = WalkRecipe::split(th, th2, ParameterTag::Theta1, Topology::unbounded(200));
      worst = std::max(worst, std::abs(probability(simulate(r, 200).base()).total() - 1.0));
    }
  }
  o.fail_if(!(worst <= 1e-10), fmt("worst |sum P - 1| = %.2e (tol 1e-10)", worst));
  return o;
}

Outcome tangent_fd() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t i = 0; i < kFigureThetas.size(); ++i) {
    const double th = kFigureThetas[i];
    const double other = pi / 2 - th;
    worst = std::max(worst, fd_check(WalkRecipe::standard(th, Topology::unbounded(100)), 100, 1e-5));
    worst = std::max(worst, fd_check(WalkRecipe::standard(th, Topology::bounded(50)), 100, 1e-5));
    worst = std::max(worst, fd_check(WalkRecipe::split(th, other, ParameterTag::Theta1, Topology::unbounded(100)), 100, 1e-5));
    worst = std::max(worst, fd_check(WalkRecipe::split(th, other, ParameterTag::Theta2, Topology::unbounded(100)), 100, 1e-5));
  }
  o.fail_if(!(worst <= 1e-5), fmt("worst max-norm discrepancy at t=100 = %.2e (tol 1e-5)", worst));
  return o;
}

Outcome global_phase_zeros() {
  Outcome o;
  double worst = 0.0;
  for (int k = 0; k <= 32; ++k) {
    const double th = k * pi / 32;
    const auto ts = simulate(WalkRecipe::standard(th, Topology::unbounded(2)), 1);
    const auto pd = reduce_position(ts);
    for (double v : {full_qfi(ts), position_qfi_approx(pd), position_qfi_exact(pd),
                     classical_fi(probability(ts.base()), probability_derivative(ts))}) {
      worst = std::max(worst, std::abs(v));
    }
  }
  o.fail_if(!(worst <= 1e-9), fmt("worst |value| at t=1 over 33 angles = %.2e (tol 1e-9)", worst));
  return o;
}

Outcome full_qfi_topology() {
  Outcome o;
  for (std::size_t i = 0; i < kFigureThetas.size(); ++i) {
    const double hu = full_qfi(simulate(WalkRecipe::standard(kFigureThetas[i], Topology::unbounded(200)), 200));
    const double hb = full_qfi(simulate(WalkRecipe::standard(kFigureThetas[i], Topology::bounded(50)), 200));
    const double r = std::abs(hb - hu) / hu;
    o.fail_if(!(r <= 1e-6), fmt("%s rel diff %.2e", kFigureNames[i], r));
  }
  return o;
}

Outcome t_squared(const std::vector<Sweep>& sweeps) {
  Outcome o;
  double worst_f = 0.0, worst_w = 0.0;
  for (const auto& s : sweeps) {
    std::vector<int> t;
    std::vector<double> hf, hw;
    for (int i = 50; i <= 200; ++i) {
      t.push_back(i);
      hf.push_back(s.rows[i].h_full);
      hw.push_back(s.rows[i].h_approx);
    }
    worst_f = std::max(worst_f, fit_t_squared(t, hf).max_relative_residual);
    worst_w = std::max(worst_w, fit_t_squared(t, hw).max_relative_residual);
  }
  o.fail_if(!(worst_f < 0.05), fmt("H_f worst residual %.2f%%", 100 * worst_f));
  o.fail_if(!(worst_w < 0.05), fmt("H_w worst residual %.2f%%", 100 * worst_w));
  return o;
}

Outcome ratio_saturation(const std::vector<Sweep>& sweeps) {
  Outcome o;
  double worst = 0.0;
  for (const auto& s : sweeps) {
    double lo = INFINITY, hi = -INFINITY;
    for (int t = 100; t <= 200; ++t) {
      const double r = s.rows[t].h_exact / s.rows[t].h_full;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    worst = std::max(worst, (hi - lo) / hi);
  }
  o.fail_if(!(worst < 0.05), fmt("worst relative variation of H_w_exact/H_f on [100,200] = %.2f%% (tol 5%%)", 100 * worst));
  return o;
}

Outcome inequality_chain(const std::vector<Sweep>& sweeps) {
  Outcome o;
  int violations = 0;
  double slack = INFINITY;
  for (const auto& s : sweeps) {
    for (int t : {10, 50, 100, 200}) {
      const auto& r = s.rows[t];
      if (!(r.f_xl <= r.f_x)) ++violations;
      if (!(r.f_x <= r.h_exact + 1e-8)) ++violations;
      if (!(r.h_exact + 1e-8 <= r.h_full + 1e-8)) ++violations;
      slack = std::min({slack, r.h_exact - r.f_x, r.h_full - r.h_exact});
    }
  }
  o.fail_if(violations > 0, fmt("%d violations over 28 points, tightest gap %.3g", violations, slack));
  return o;
}

Outcome window_turnover(const std::vector<Sweep>& sweeps) {
  Outcome o;
  const auto& s = sweeps[3];  // pi/4
  double worst = 0.0;
  for (int t = 0; t <= 25; ++t) worst = std::max(worst, std::abs(s.rows[t].f_xl - s.rows[t].f_x));
  o.fail_if(!(worst <= 1e-9), fmt("max |F_xl - F_x| for t<=25 = %.2e", worst));
  const double f50 = s.rows[50].f_xl, f175 = s.rows[175].f_xl;
  o.fail_if(!(f175 < f50), fmt("F_xl(50) = %.4g, F_xl(175) = %.4g", f50, f175));
  return o;
}

Outcome spread_ordering() {
  Outcome o;
  double sigma[3];
  for (int i = 0; i < 3; ++i) {
    sigma[i] = std_dev(probability(simulate(WalkRecipe::standard(kFigureThetas[i], Topology::unbounded(200)), 200).base()));
  }
  o.fail_if(!(sigma[0] > sigma[1] && sigma[1] > sigma[2]),
            fmt("sigma = %.3f, %.3f, %.3f", sigma[0], sigma[1], sigma[2]));
  return o;
}

Outcome divergence_timing() {
  Outcome o;
  const int a = 50, horizon = 300;
  for (std::size_t i = 0; i < kFigureThetas.size(); ++i) {
    const double th = kFigureThetas[i];
    const auto ur = WalkRecipe::standard(th, Topology::unbounded(horizon));
    const auto br = WalkRecipe::standard(th, Topology::bounded(a));
    int t_hw = -1;
    TangentState u = start(ur), b = start(br);
    for (int t = 1; t <= horizon && t_hw < 0; ++t) {
      u = advance(u, ur);
      b = advance(b, br);
      const double hu = position_qfi_approx(u), hb = position_qfi_approx(b);
      if (std::abs(hb - hu) > 1e-6 * std::abs(hu)) t_hw = t;
    }
    const auto mu_u = mu_map(ur, horizon);
    const auto mu_b = mu_map(br, horizon);
    int t_mu = -1;
    for (int t = 0; t <= horizon && t_mu < 0; ++t) {
      for (int x = -a; x <= a; ++x) {
        if (std::abs(mu_u.at(t, x) - mu_b.at(t, x)) > 1e-9) {
          t_mu = t;
          break;
        }
      }
    }
    const bool ok = t_hw > a && t_mu > a && std::abs(t_hw - t_mu) <= 1;
    o.fail_if(!ok, fmt("%s: H_w diverges at t=%d, mu at t=%d (walls reached at t=%d)", kFigureNames[i], t_hw, t_mu, a));
  }
  return o;
}

Outcome split_step_structure() {
  Outcome o;
  std::vector<double> grid;
  for (int k = 1; k < 64; ++k) grid.push_back(k * pi / 128);
  auto h_w = [](double t1, double t2, ParameterTag tag) {
    return position_qfi_approx(simulate(WalkRecipe::split(t1, t2, tag, Topology::unbounded(100)), 100));
  };
  for (std::size_t i = 0; i < kFigureThetas.size(); ++i) {
    const int on_grid = 16 * static_cast<int>(i + 1) - 1;  // index of k = 16 (i + 1)
    std::vector<double> by_t2, by_t1;
    for (double g : grid) {
      by_t2.push_back(h_w(kFigureThetas[i], g, ParameterTag::Theta2));
      by_t1.push_back(h_w(g, kFigureThetas[i], ParameterTag::Theta1));
    }
    const int arg_min = static_cast<int>(std::min_element(by_t2.begin(), by_t2.end()) - by_t2.begin());
    const int arg_max = static_cast<int>(std::max_element(by_t1.begin(), by_t1.end()) - by_t1.begin());
    o.fail_if(std::abs(arg_min - on_grid) > 1,
              fmt("theta1=%s: H_w(theta2) min at %dpi/128", kFigureNames[i], arg_min + 1));
    o.fail_if(std::abs(arg_max - on_grid) > 1,
              fmt("theta2=%s: H_w(theta1) max at %dpi/128", kFigureNames[i], arg_max + 1));
  }
  return o;
}

Outcome split_step_sigma() {
  Outcome o;
  std::map<double, double> single;
  auto single_sigma = [&](double th) {
    auto it = single.find(th);
    if (it == single.end()) {
      it = single.emplace(th, std_dev(probability(simulate(WalkRecipe::standard(th, Topology::unbounded(100)), 100).base()))).first;
    }
    return it->second;
  };
  double worst = 0.0;
  for (double th2 : kFigureThetas) {
    for (int k = 0; k < 32; ++k) {
      const double th1 = (pi / 2) * k / 31;
      const double s = std_dev(probability(simulate(WalkRecipe::split(th1, th2, ParameterTag::Theta1, Topology::unbounded(100)), 100).base()));
      worst = std::max(worst, s / single_sigma(std::min(th1, th2)));
    }
  }
  o.fail_if(!(worst <= 1.1), fmt("worst sigma_split / sigma_single(min) = %.4f (limit 1.10)", worst));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  double step_err = 0.0, qfi_err = 0.0;
  for (double th : {0.0, pi / 8, 0.9, 3 * pi / 8}) {
    for (auto topo : {Topology::unbounded(5), Topology::bounded(5), Topology::bounded(2)}) {
      const int n = static_cast<int>(topo.site_count());
      const oracle::Mat S = oracle::shift_op(n, topo.is_bounded());
      const oracle::Mat C = oracle::coin_op(n, th), dC = oracle::coin_op(n, th, true);
      const auto recipe = WalkRecipe::standard(th, topo);
      TangentState ts = start(recipe);
      oracle::Vec psi = oracle::to_vec(ts.base()), dpsi = oracle::Vec::Zero(2 * n);
      for (int t = 1; t <= 5; ++t) {
        ts = advance(ts, recipe);
        dpsi = S * (C * dpsi + dC * psi);
        psi = S * C * psi;
        step_err = std::max(step_err, oracle::max_abs_diff(oracle::to_vec(ts.base()), psi));
        if (n <= 7 && t <= 3) {
          const oracle::Mat rho = psi * psi.adjoint();
          const oracle::Mat drho = dpsi * psi.adjoint() + psi * dpsi.adjoint();
          qfi_err = std::max(qfi_err, std::abs(full_qfi(ts) - 4.0 * (rho * drho * drho).trace().real()));
        }
      }
    }
    const int n = 11;
    const oracle::Mat U = oracle::shift_plus_op(n) * oracle::coin_op(n, 0.7) *
                          oracle::shift_minus_op(n) * oracle::coin_op(n, th);
    const auto recipe = WalkRecipe::split(th, 0.7, ParameterTag::Theta1, Topology::unbounded(5));
    TangentState ts = start(recipe);
    oracle::Vec psi = oracle::to_vec(ts.base());
    for (int t = 1; t <= 5; ++t) {
      ts = advance(ts, recipe);
      psi = U * psi;
      step_err = std::max(step_err, oracle::max_abs_diff(oracle::to_vec(ts.base()), psi));
    }
  }
  o.fail_if(!(step_err <= 1e-12), fmt("step vs operator matrices %.2e (tol 1e-12)", step_err));
  o.fail_if(!(qfi_err <= 1e-10), fmt("H_f vs 4Tr[rho drho^2] %.2e (tol 1e-10)", qfi_err));
  return o;
}

Outcome gap_report(const std::vector<Sweep>& sweeps) {
  Outcome o;
  std::printf("  position QFI gap |H_w_approx - H_w_exact| / H_w_exact (unbounded):\n");
  std::printf("  %-8s", "theta");
  std::vector<int> times;
  for (int t = 10; t <= 200; t += 10) times.push_back(t);
  for (int t : times) std::printf(" %6d", t);
  std::printf("  monotone\n");
  int monotone = 0;
  for (const auto& s : sweeps) {
    std::printf("  %-8.4f", s.theta);
    std::vector<double> gaps;
    for (int t : times) {
      gaps.push_back(std::abs(s.rows[t].h_approx - s.rows[t].h_exact) / s.rows[t].h_exact);
      std::printf(" %6.4f", gaps.back());
    }
    const bool up = std::is_sorted(gaps.begin(), gaps.end());
    const bool down = std::is_sorted(gaps.rbegin(), gaps.rend());
    monotone += up || down;
    std::printf("  %s\n", up ? "increasing" : down ? "decreasing" : "no");
  }
  o.note(fmt("gap reported for 7 angles x %zu times; monotone in t for %d of 7", times.size(), monotone));
  return o;
}

}  // namespace

int main() {
  std::printf("running shared sweep (theta = k pi/16, t <= 200)...\n");
  std::fflush(stdout);
  const std::vector<Sweep> sweeps = run_sweep();

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "unitarity", unitarity},
      {2, "tangent vs finite differences", tangent_fd},
      {3, "global-phase zeros at t=1", global_phase_zeros},
      {4, "full QFI equal for bounded and unbounded walks", full_qfi_topology},
      {5, "t^2 scaling of H_f and H_w", [&] { return t_squared(sweeps); }},
      {6, "H_w_exact/H_f saturation", [&] { return ratio_saturation(sweeps); }},
      {7, "F_xl <= F_x <= H_w_exact <= H_f", [&] { return inequality_chain(sweeps); }},
      {8, "limited-window turnover", [&] { return window_turnover(sweeps); }},
      {9, "spread ordering", spread_ordering},
      {10, "bounded/unbounded H_w and mu divergence timing", divergence_timing},
      {11, "split-step H_w extrema", split_step_structure},
      {12, "split-step sigma bounded by single walk", split_step_sigma},
      {13, "fused updates vs explicit matrices", oracle_equivalence},
      {14, "approximate vs exact H_w gap report", [&] { return gap_report(sweeps); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const Outcome out = c.check();
    failed += !out.pass;
    std::printf("%s [%2d] %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
