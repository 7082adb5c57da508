#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Coin-space part of the initial state, alpha|up> + beta|down>.
struct InitialSpin {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  /// (|up> + |down>)/sqrt(2), the initial state of every figure.
  static InitialSpin plus();
  /// Throws InvalidInput unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  void validate() const;
};

struct CoinSpec {
  double theta = 0.0;
};

struct SplitStepSpec {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// Row-major 2x2 operator on the coin space.
struct CoinMatrix {
  Complex m00, m01, m10, m11;
};

/// [[cos, -i sin], [-i sin, cos]]
CoinMatrix coin_matrix(double theta);
/// Elementwise theta-derivative of coin_matrix.
CoinMatrix coin_derivative(double theta);

/// Lattice shape. Unbounded lattices are finite arrays of 2L+1 sites that are
/// exact as long as the light cone never reaches the edge; bounded lattices
/// span [-a, a] with spin-flip reflection at both walls.
class Topology {
 public:
  enum class Kind { Unbounded, Bounded };

  static Topology unbounded(int halfwidth);
  static Topology bounded(int a);

  Kind kind() const noexcept { return kind_; }
  bool is_bounded() const noexcept { return kind_ == Kind::Bounded; }
  int halfwidth() const noexcept { return halfwidth_; }
  int min_site() const noexcept { return -halfwidth_; }
  int max_site() const noexcept { return halfwidth_; }
  std::size_t site_count() const noexcept { return 2 * static_cast<std::size_t>(halfwidth_) + 1; }
  bool contains(int x) const noexcept { return x >= -halfwidth_ && x <= halfwidth_; }
  std::size_t index(int x) const noexcept { return static_cast<std::size_t>(x + halfwidth_); }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Topology(Kind kind, int halfwidth) : kind_(kind), halfwidth_(halfwidth) {}
  Kind kind_;
  int halfwidth_;
};

/// Coin-resolved amplitude field at time t. Immutable once built.
class WalkState {
 public:
  WalkState(Topology topology, int t, int origin, Amplitudes up, Amplitudes down);

  const Topology& topology() const noexcept { return topology_; }
  int t() const noexcept { return t_; }
  /// Starting site; the unbounded light cone is [origin - t, origin + t].
  int origin() const noexcept { return origin_; }

  std::span<const Complex> up() const noexcept { return up_; }
  std::span<const Complex> down() const noexcept { return down_; }
  /// Amplitude at site x, zero off the lattice.
  Complex up_at(int x) const noexcept;
  Complex down_at(int x) const noexcept;

  double norm_squared() const noexcept;

 private:
  Topology topology_;
  int t_;
  int origin_;
  Amplitudes up_;
  Amplitudes down_;
};

struct PositionDistribution {
  int t = 0;
  int min_site = 0;
  std::vector<double> probs;

  int max_site() const noexcept { return min_site + static_cast<int>(probs.size()) - 1; }
  double at(int x) const noexcept;
  double total() const noexcept;
};

WalkState new_walk(const InitialSpin& init, const Topology& topology, int start_site = 0);

/// One coin-then-shift step. Throws CapacityError when an unbounded lattice
/// is too small to hold the next light cone.
WalkState step(const WalkState& state, const CoinSpec& coin, const Topology& topology);

/// One split step, U = S+ C(theta2) S- C(theta1). Unbounded lattices only.
WalkState split_step(const WalkState& state, const SplitStepSpec& spec, const Topology& topology);

PositionDistribution probability(const WalkState& state);

/// Standard deviation of the position, in lattice sites.
double std_dev(const PositionDistribution& dist);

namespace detail {

/// Coin applied sitewise: (up, down) <- M (up, down).
void apply_coin(const CoinMatrix& m, std::span<const Complex> up, std::span<const Complex> down,
                std::span<Complex> out_up, std::span<Complex> out_down);

/// Conditional shift of a standard step, including the reflecting walls of a
/// bounded topology. Inputs are the coin-rotated components.
void shift_standard(const Topology& topology, std::span<const Complex> up,
                    std::span<const Complex> down, std::span<Complex> out_up,
                    std::span<Complex> out_down);

/// S-: up moves x -> x-1, down stays.
void shift_minus(std::span<const Complex> up, std::span<const Complex> down,
                 std::span<Complex> out_up, std::span<Complex> out_down);
/// S+: down moves x -> x+1, up stays.
void shift_plus(std::span<const Complex> up, std::span<const Complex> down,
                std::span<Complex> out_up, std::span<Complex> out_down);

/// Throws if the state cannot take one more unit of light cone on topology.
void check_step_preconditions(const WalkState& state, const Topology& topology);

}  // namespace detail

}  // namespace qwalk
