#include "qwalk/interference.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

double mu_at(const WalkState& state, double theta, int x) {
  const double sc = std::sin(theta) * std::cos(theta);
  auto up_down = [&](int site) { return state.up_at(site) * std::conj(state.down_at(site)); };
  const Complex ud = up_down(x + 1) - up_down(x - 1);
  const Complex du = std::conj(up_down(x + 1)) - std::conj(up_down(x - 1));
  return std::abs(sc * ud + sc * du);
}

double InterferenceMap::at(int t, int x) const noexcept {
  if (t < 0 || t > t_max || x < min_site || x > max_site()) {
    return 0.0;
  }
  return mu[static_cast<std::size_t>(t) * static_cast<std::size_t>(sites) +
            static_cast<std::size_t>(x - min_site)];
}

double InterferenceMap::row_max(int t) const noexcept {
  double best = 0.0;
  for (int x = min_site; x <= max_site(); ++x) {
    best = std::max(best, at(t, x));
  }
  return best;
}

InterferenceMap mu_map(const WalkRecipe& recipe, int t_max) {
  if (recipe.kind != WalkKind::Standard) {
    throw InvalidInput("interference maps are defined for standard walks only");
  }
  if (t_max < 1) {
    throw InvalidInput("interference map needs t_max >= 1");
  }
  const Topology& topo = recipe.topology;
  InterferenceMap map;
  map.theta = recipe.theta;
  map.min_site = topo.min_site();
  map.sites = static_cast<int>(topo.site_count());
  map.t_max = t_max;
  map.mu.assign(static_cast<std::size_t>(t_max + 1) * topo.site_count(), 0.0);

  WalkState state = new_walk(recipe.init, topo, recipe.start_site);
  for (int t = 1; t <= t_max; ++t) {
    double* row = map.mu.data() + static_cast<std::size_t>(t) * topo.site_count();
    for (int x = topo.min_site(); x <= topo.max_site(); ++x) {
      row[topo.index(x)] = mu_at(state, recipe.theta, x);
    }
    if (t < t_max) {
      state = step(state, CoinSpec{recipe.theta}, topo);
    }
  }
  return map;
}

}  // namespace qwalk
