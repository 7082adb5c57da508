#pragma once

#include <functional>

#include "qwalk/tangent.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class WalkKind { Standard, SplitStep };

/// Everything needed to replay one trajectory from t = 0.
struct WalkRecipe {
  WalkKind kind = WalkKind::Standard;
  Topology topology = Topology::unbounded(1);
  InitialSpin init = InitialSpin::plus();
  int start_site = 0;
  double theta = 0.0;   // standard coin
  double theta1 = 0.0;  // split-step first coin
  double theta2 = 0.0;  // split-step second coin
  ParameterTag tag = ParameterTag::Theta;

  static WalkRecipe standard(double theta, Topology topology);
  static WalkRecipe split(double theta1, double theta2, ParameterTag tag, Topology topology);

  /// Value of the tagged parameter.
  double parameter() const;
  /// Copy with the tagged parameter replaced.
  WalkRecipe with_parameter(double value) const;
};

TangentState start(const WalkRecipe& recipe);
TangentState advance(const TangentState& ts, const WalkRecipe& recipe);
TangentState simulate(const WalkRecipe& recipe, int steps);

/// Calls visit(ts) for every t in [0, steps].
void for_each_step(const WalkRecipe& recipe, int steps,
                   const std::function<void(const TangentState&)>& visit);

/// Central-difference oracle: max over sites of
/// |(Psi(p+h) - Psi(p-h)) / 2h - dPsi(p)| for the recipe's tagged parameter.
/// Requires h >= 1e-7.
double fd_check(const WalkRecipe& recipe, int steps, double h);

}  // namespace qwalk
