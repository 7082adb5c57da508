#include "qwalk/tangent.hpp"

#include "qwalk/errors.hpp"

namespace qwalk {

const char* to_string(ParameterTag tag) noexcept {
  switch (tag) {
    case ParameterTag::Theta:
      return "theta";
    case ParameterTag::Theta1:
      return "theta1";
    case ParameterTag::Theta2:
      return "theta2";
  }
  return "?";
}

TangentState::TangentState(WalkState base, ParameterTag tag)
    : base_(std::move(base)),
      d_up_(base_.topology().site_count()),
      d_down_(base_.topology().site_count()),
      tag_(tag) {
  if (base_.t() != 0) {
    throw InvalidInput("a zero derivative field is only consistent with t = 0");
  }
}

TangentState::TangentState(WalkState base, Amplitudes d_up, Amplitudes d_down, ParameterTag tag)
    : base_(std::move(base)), d_up_(std::move(d_up)), d_down_(std::move(d_down)), tag_(tag) {
  if (d_up_.size() != base_.topology().site_count() ||
      d_down_.size() != base_.topology().site_count()) {
    throw InvalidInput("derivative field does not match the lattice size");
  }
}

Complex TangentState::overlap() const noexcept {
  Complex acc{};
  const auto up = base_.up();
  const auto down = base_.down();
  for (std::size_t i = 0; i < up.size(); ++i) {
    acc += std::conj(up[i]) * d_up_[i] + std::conj(down[i]) * d_down_[i];
  }
  return acc;
}

double TangentState::derivative_norm_squared() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < d_up_.size(); ++i) {
    acc += std::norm(d_up_[i]) + std::norm(d_down_[i]);
  }
  return acc;
}

namespace detail {

TangentState step_with_tangent_scaled(const TangentState& ts, const CoinSpec& coin,
                                      const Topology& topology, double injection_scale) {
  if (ts.tag() != ParameterTag::Theta) {
    throw InvalidInput("standard steps propagate only theta derivatives");
  }
  WalkState next = step(ts.base(), coin, topology);

  const std::size_t n = topology.site_count();
  const auto& psi = ts.base();
  Amplitudes prop_up(n), prop_down(n), src_up(n), src_down(n);
  apply_coin(coin_matrix(coin.theta), ts.d_up(), ts.d_down(), prop_up, prop_down);
  apply_coin(coin_derivative(coin.theta), psi.up(), psi.down(), src_up, src_down);
  for (std::size_t i = 0; i < n; ++i) {
    prop_up[i] += injection_scale * src_up[i];
    prop_down[i] += injection_scale * src_down[i];
  }
  // The shift is theta-independent, so the derivative reflects at the walls
  // exactly like the state does.
  Amplitudes d_up(n), d_down(n);
  shift_standard(topology, prop_up, prop_down, d_up, d_down);
  return TangentState(std::move(next), std::move(d_up), std::move(d_down), ts.tag());
}

}  // namespace detail

TangentState step_with_tangent(const TangentState& ts, const CoinSpec& coin,
                               const Topology& topology) {
  return detail::step_with_tangent_scaled(ts, coin, topology, 1.0);
}

TangentState split_step_with_tangent(const TangentState& ts, const SplitStepSpec& spec,
                                     const Topology& topology) {
  if (ts.tag() == ParameterTag::Theta) {
    throw InvalidInput("split-step derivatives must be tagged theta1 or theta2");
  }
  WalkState next = split_step(ts.base(), spec, topology);

  const std::size_t n = topology.site_count();
  const auto& psi = ts.base();
  const CoinMatrix c1 = coin_matrix(spec.theta1);
  const CoinMatrix c2 = coin_matrix(spec.theta2);

  // Stage buffers: after C1, after S-, after C2.
  Amplitudes p1_up(n), p1_down(n), p2_up(n), p2_down(n);
  Amplitudes d1_up(n), d1_down(n), d2_up(n), d2_down(n);

  detail::apply_coin(c1, psi.up(), psi.down(), p1_up, p1_down);
  detail::apply_coin(c1, ts.d_up(), ts.d_down(), d1_up, d1_down);
  if (ts.tag() == ParameterTag::Theta1) {
    Amplitudes s_up(n), s_down(n);
    detail::apply_coin(coin_derivative(spec.theta1), psi.up(), psi.down(), s_up, s_down);
    for (std::size_t i = 0; i < n; ++i) {
      d1_up[i] += s_up[i];
      d1_down[i] += s_down[i];
    }
  }
  detail::shift_minus(p1_up, p1_down, p2_up, p2_down);
  detail::shift_minus(d1_up, d1_down, d2_up, d2_down);

  detail::apply_coin(c2, d2_up, d2_down, d1_up, d1_down);
  if (ts.tag() == ParameterTag::Theta2) {
    Amplitudes s_up(n), s_down(n);
    detail::apply_coin(coin_derivative(spec.theta2), p2_up, p2_down, s_up, s_down);
    for (std::size_t i = 0; i < n; ++i) {
      d1_up[i] += s_up[i];
      d1_down[i] += s_down[i];
    }
  }
  Amplitudes d_up(n), d_down(n);
  detail::shift_plus(d1_up, d1_down, d_up, d_down);
  return TangentState(std::move(next), std::move(d_up), std::move(d_down), ts.tag());
}

}  // namespace qwalk
