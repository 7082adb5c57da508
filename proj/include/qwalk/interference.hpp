#pragma once

#include <vector>

#include "qwalk/recipe.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Degree of interference mu_{x,t+1} produced from the state at time t:
///   |sc [r_ud(x+1) - r_ud(x-1)] + sc [r_du(x+1) - r_du(x-1)]|,
/// with sc = sin(theta) cos(theta), r_ud(x) = A_x conj(B_x) and r_du its
/// conjugate. Sites off the lattice contribute zero.
double mu_at(const WalkState& state, double theta, int x);

/// mu over (t, x). Row t holds mu_{x,t}, built from the state at t-1; row 0
/// is identically zero.
struct InterferenceMap {
  double theta = 0.0;
  int min_site = 0;
  int sites = 0;
  int t_max = 0;
  std::vector<double> mu;  // (t_max + 1) x sites, row-major

  double at(int t, int x) const noexcept;
  int max_site() const noexcept { return min_site + sites - 1; }
  /// Largest mu over x at time t.
  double row_max(int t) const noexcept;
};

/// Standard walks only.
InterferenceMap mu_map(const WalkRecipe& recipe, int t_max);

}  // namespace qwalk
