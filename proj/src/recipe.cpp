#include "qwalk/recipe.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

WalkRecipe WalkRecipe::standard(double theta, Topology topology) {
  WalkRecipe r;
  r.kind = WalkKind::Standard;
  r.topology = topology;
  r.theta = theta;
  r.tag = ParameterTag::Theta;
  return r;
}

WalkRecipe WalkRecipe::split(double theta1, double theta2, ParameterTag tag, Topology topology) {
  WalkRecipe r;
  r.kind = WalkKind::SplitStep;
  r.topology = topology;
  r.theta1 = theta1;
  r.theta2 = theta2;
  r.tag = tag;
  return r;
}

double WalkRecipe::parameter() const {
  switch (tag) {
    case ParameterTag::Theta:
      return theta;
    case ParameterTag::Theta1:
      return theta1;
    case ParameterTag::Theta2:
      return theta2;
  }
  return theta;
}

WalkRecipe WalkRecipe::with_parameter(double value) const {
  WalkRecipe r = *this;
  switch (tag) {
    case ParameterTag::Theta:
      r.theta = value;
      break;
    case ParameterTag::Theta1:
      r.theta1 = value;
      break;
    case ParameterTag::Theta2:
      r.theta2 = value;
      break;
  }
  return r;
}

TangentState start(const WalkRecipe& recipe) {
  const bool split = recipe.kind == WalkKind::SplitStep;
  if (split == (recipe.tag == ParameterTag::Theta)) {
    throw InvalidInput(std::string("parameter tag ") + to_string(recipe.tag) +
                       " does not fit this walk kind");
  }
  if (split && recipe.topology.is_bounded()) {
    throw InvalidInput("split-step walks are only defined on unbounded lattices");
  }
  return TangentState(new_walk(recipe.init, recipe.topology, recipe.start_site), recipe.tag);
}

TangentState advance(const TangentState& ts, const WalkRecipe& recipe) {
  if (recipe.kind == WalkKind::SplitStep) {
    return split_step_with_tangent(ts, SplitStepSpec{recipe.theta1, recipe.theta2},
                                   recipe.topology);
  }
  return step_with_tangent(ts, CoinSpec{recipe.theta}, recipe.topology);
}

TangentState simulate(const WalkRecipe& recipe, int steps) {
  TangentState ts = start(recipe);
  for (int i = 0; i < steps; ++i) {
    ts = advance(ts, recipe);
  }
  return ts;
}

void for_each_step(const WalkRecipe& recipe, int steps,
                   const std::function<void(const TangentState&)>& visit) {
  TangentState ts = start(recipe);
  visit(ts);
  for (int i = 0; i < steps; ++i) {
    ts = advance(ts, recipe);
    visit(ts);
  }
}

double fd_check(const WalkRecipe& recipe, int steps, double h) {
  if (!(h >= 1e-7)) {
    throw InvalidInput("finite-difference step must be at least 1e-7");
  }
  const double p = recipe.parameter();
  const TangentState exact = simulate(recipe, steps);
  const TangentState plus = simulate(recipe.with_parameter(p + h), steps);
  const TangentState minus = simulate(recipe.with_parameter(p - h), steps);

  double worst = 0.0;
  const auto n = exact.d_up().size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex fd_up = (plus.base().up()[i] - minus.base().up()[i]) / (2.0 * h);
    const Complex fd_down = (plus.base().down()[i] - minus.base().down()[i]) / (2.0 * h);
    worst = std::max(worst, std::abs(fd_up - exact.d_up()[i]));
    worst = std::max(worst, std::abs(fd_down - exact.d_down()[i]));
  }
  return worst;
}

}  // namespace qwalk
