#include "qwalk/walk.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kInitNormTolerance = 1e-12;
constexpr double kStepNormTolerance = 1e-9;

const Complex kI{0.0, 1.0};

}  // namespace

InitialSpin InitialSpin::plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Complex{s, 0.0}, Complex{s, 0.0}};
}

void InitialSpin::validate() const {
  const double n = std::norm(alpha) + std::norm(beta);
  if (!(std::abs(n - 1.0) <= kInitNormTolerance)) {
    throw InvalidInput("initial spin is not normalized: |alpha|^2 + |beta|^2 = " +
                       std::to_string(n));
  }
}

CoinMatrix coin_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {Complex{c, 0.0}, -kI * s, -kI * s, Complex{c, 0.0}};
}

CoinMatrix coin_derivative(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {Complex{-s, 0.0}, -kI * c, -kI * c, Complex{-s, 0.0}};
}

Topology Topology::unbounded(int halfwidth) {
  if (halfwidth < 1) {
    throw InvalidInput("unbounded lattice needs halfwidth >= 1, got " + std::to_string(halfwidth));
  }
  return Topology(Kind::Unbounded, halfwidth);
}

Topology Topology::bounded(int a) {
  if (a < 1) {
    throw InvalidInput("bounded lattice needs a >= 1, got " + std::to_string(a));
  }
  return Topology(Kind::Bounded, a);
}

WalkState::WalkState(Topology topology, int t, int origin, Amplitudes up, Amplitudes down)
    : topology_(topology), t_(t), origin_(origin), up_(std::move(up)), down_(std::move(down)) {
  if (t_ < 0) {
    throw InvalidInput("negative step index");
  }
  if (up_.size() != topology_.site_count() || down_.size() != topology_.site_count()) {
    throw InvalidInput("amplitude arrays do not match the lattice size");
  }
  if (!topology_.contains(origin_)) {
    throw InvalidInput("origin site " + std::to_string(origin_) + " is off the lattice");
  }
}

Complex WalkState::up_at(int x) const noexcept {
  return topology_.contains(x) ? up_[topology_.index(x)] : Complex{};
}

Complex WalkState::down_at(int x) const noexcept {
  return topology_.contains(x) ? down_[topology_.index(x)] : Complex{};
}

double WalkState::norm_squared() const noexcept {
  double n = 0.0;
  for (std::size_t i = 0; i < up_.size(); ++i) {
    n += std::norm(up_[i]) + std::norm(down_[i]);
  }
  return n;
}

double PositionDistribution::at(int x) const noexcept {
  if (x < min_site || x > max_site()) {
    return 0.0;
  }
  return probs[static_cast<std::size_t>(x - min_site)];
}

double PositionDistribution::total() const noexcept {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

WalkState new_walk(const InitialSpin& init, const Topology& topology, int start_site) {
  init.validate();
  if (!topology.contains(start_site)) {
    throw InvalidInput("start site " + std::to_string(start_site) + " is off the lattice");
  }
  Amplitudes up(topology.site_count());
  Amplitudes down(topology.site_count());
  up[topology.index(start_site)] = init.alpha;
  down[topology.index(start_site)] = init.beta;
  return WalkState(topology, 0, start_site, std::move(up), std::move(down));
}

namespace detail {

void apply_coin(const CoinMatrix& m, std::span<const Complex> up, std::span<const Complex> down,
                std::span<Complex> out_up, std::span<Complex> out_down) {
  for (std::size_t i = 0; i < up.size(); ++i) {
    const Complex a = up[i];
    const Complex b = down[i];
    out_up[i] = m.m00 * a + m.m01 * b;
    out_down[i] = m.m10 * a + m.m11 * b;
  }
}

void shift_standard(const Topology& topology, std::span<const Complex> up,
                    std::span<const Complex> down, std::span<Complex> out_up,
                    std::span<Complex> out_down) {
  const std::size_t n = up.size();
  // up-movers: x -> x-1; down-movers: x -> x+1
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out_up[i] = up[i + 1];
  }
  for (std::size_t i = 1; i < n; ++i) {
    out_down[i] = down[i - 1];
  }
  if (topology.is_bounded()) {
    // |down><up| at -a and |up><down| at +a
    out_down[0] = up[0];
    out_up[n - 1] = down[n - 1];
  } else {
    // Edge amplitudes are zero whenever the capacity check passed.
    out_up[n - 1] = Complex{};
    out_down[0] = Complex{};
  }
}

void shift_minus(std::span<const Complex> up, std::span<const Complex> down,
                 std::span<Complex> out_up, std::span<Complex> out_down) {
  const std::size_t n = up.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out_up[i] = up[i + 1];
  }
  out_up[n - 1] = Complex{};
  std::copy(down.begin(), down.end(), out_down.begin());
}

void shift_plus(std::span<const Complex> up, std::span<const Complex> down,
                std::span<Complex> out_up, std::span<Complex> out_down) {
  const std::size_t n = up.size();
  std::copy(up.begin(), up.end(), out_up.begin());
  for (std::size_t i = 1; i < n; ++i) {
    out_down[i] = down[i - 1];
  }
  out_down[0] = Complex{};
}

void check_step_preconditions(const WalkState& state, const Topology& topology) {
  if (!(state.topology() == topology)) {
    throw InvalidInput("state lattice does not match the requested topology");
  }
  const double n = state.norm_squared();
  if (!(std::abs(n - 1.0) <= kStepNormTolerance)) {
    throw InvariantError("state is not normalized before step: norm^2 = " + std::to_string(n));
  }
  if (!topology.is_bounded()) {
    const int reach = std::abs(state.origin()) + state.t() + 1;
    if (reach > topology.halfwidth()) {
      throw CapacityError("step " + std::to_string(state.t() + 1) +
                          " would leave the unbounded lattice of halfwidth " +
                          std::to_string(topology.halfwidth()));
    }
  }
}

}  // namespace detail

WalkState step(const WalkState& state, const CoinSpec& coin, const Topology& topology) {
  detail::check_step_preconditions(state, topology);
  const std::size_t n = topology.site_count();
  Amplitudes rot_up(n), rot_down(n);
  detail::apply_coin(coin_matrix(coin.theta), state.up(), state.down(), rot_up, rot_down);
  Amplitudes up(n), down(n);
  detail::shift_standard(topology, rot_up, rot_down, up, down);
  return WalkState(topology, state.t() + 1, state.origin(), std::move(up), std::move(down));
}

WalkState split_step(const WalkState& state, const SplitStepSpec& spec, const Topology& topology) {
  if (topology.is_bounded()) {
    throw InvalidInput("split-step walks are only defined on unbounded lattices");
  }
  detail::check_step_preconditions(state, topology);
  const std::size_t n = topology.site_count();
  Amplitudes a_up(n), a_down(n), b_up(n), b_down(n);
  detail::apply_coin(coin_matrix(spec.theta1), state.up(), state.down(), a_up, a_down);
  detail::shift_minus(a_up, a_down, b_up, b_down);
  detail::apply_coin(coin_matrix(spec.theta2), b_up, b_down, a_up, a_down);
  detail::shift_plus(a_up, a_down, b_up, b_down);
  return WalkState(topology, state.t() + 1, state.origin(), std::move(b_up), std::move(b_down));
}

PositionDistribution probability(const WalkState& state) {
  const auto& topo = state.topology();
  PositionDistribution dist;
  dist.t = state.t();
  dist.min_site = topo.min_site();
  dist.probs.resize(topo.site_count());
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    dist.probs[i] = std::norm(state.up()[i]) + std::norm(state.down()[i]);
  }
  if (dist.total() <= 0.0) {
    throw InvariantError("walk state carries no probability");
  }
  return dist;
}

double std_dev(const PositionDistribution& dist) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    const double x = dist.min_site + static_cast<double>(i);
    mean += x * dist.probs[i];
    second += x * x * dist.probs[i];
  }
  return std::sqrt(std::max(0.0, second - mean * mean));
}

}  // namespace qwalk
