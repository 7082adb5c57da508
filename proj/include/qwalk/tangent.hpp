#pragma once

#include <span>

#include "qwalk/walk.hpp"

namespace qwalk {

/// Which coin angle a derivative field is taken with respect to.
enum class ParameterTag { Theta, Theta1, Theta2 };

const char* to_string(ParameterTag tag) noexcept;

/// A walk state paired with its derivative field d|Psi>/d(param).
class TangentState {
 public:
  /// Zero derivative field on top of base; requires base.t() == 0 or an
  /// explicitly supplied field.
  TangentState(WalkState base, ParameterTag tag);
  TangentState(WalkState base, Amplitudes d_up, Amplitudes d_down, ParameterTag tag);

  const WalkState& base() const noexcept { return base_; }
  ParameterTag tag() const noexcept { return tag_; }
  int t() const noexcept { return base_.t(); }

  std::span<const Complex> d_up() const noexcept { return d_up_; }
  std::span<const Complex> d_down() const noexcept { return d_down_; }

  /// <Psi|dPsi>
  Complex overlap() const noexcept;
  /// <dPsi|dPsi>
  double derivative_norm_squared() const noexcept;

 private:
  WalkState base_;
  Amplitudes d_up_;
  Amplitudes d_down_;
  ParameterTag tag_;
};

/// Advance state and derivative by one standard step:
///   dPsi(t) = S C dPsi(t-1) + S (dC) Psi(t-1)
TangentState step_with_tangent(const TangentState& ts, const CoinSpec& coin,
                               const Topology& topology);

/// Product-rule derivative of U = S+ C(theta2) S- C(theta1) for the tag's angle.
TangentState split_step_with_tangent(const TangentState& ts, const SplitStepSpec& spec,
                                     const Topology& topology);

namespace detail {

/// step_with_tangent with the (dC) Psi source term scaled by injection_scale.
TangentState step_with_tangent_scaled(const TangentState& ts, const CoinSpec& coin,
                                      const Topology& topology, double injection_scale);

}  // namespace detail

}  // namespace qwalk
