#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/tangent.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Full (coin + position) QFI of the pure state,
/// 4 (<dPsi|dPsi> - |<Psi|dPsi>|^2). Throws InvariantError on a
/// non-normalized state.
double full_qfi(const TangentState& ts);

/// Coin-traced position state and its derivative, restricted to the sites
/// [min_site, min_site + dim) that carry amplitude.
struct PositionDensity {
  int t = 0;
  int min_site = 0;
  Eigen::MatrixXcd rho;
  Eigen::MatrixXcd drho;

  int dim() const noexcept { return static_cast<int>(rho.rows()); }
};

PositionDensity reduce_position(const TangentState& ts);

/// Trace, hermiticity and positivity checks; throws InvariantError.
void validate(const PositionDensity& pd);

/// 4 Tr[(drho)^2 (I - rho)], the approximate mixed-state QFI.
double position_qfi_approx(const PositionDensity& pd);

/// Same quantity evaluated through the 4x4 Gram matrix of
/// (psi_up, psi_down, dpsi_up, dpsi_down) in O(N) without forming matrices.
double position_qfi_approx(const TangentState& ts);

/// Spectral QFI, sum over eigenpairs with l_i + l_j > eps of
/// 2 |<i|drho|j>|^2 / (l_i + l_j).
double position_qfi_exact(const PositionDensity& pd, double eps = 1e-12);

/// dP(x)/d(param) = 2 Re(conj(A) dA + conj(B) dB), aligned with probability().
std::vector<double> probability_derivative(const TangentState& ts);

/// Sorted set of lattice sites a detector can see.
class DetectorWindow {
 public:
  explicit DetectorWindow(std::vector<int> sites);
  /// Inclusive range [lo, hi].
  static DetectorWindow range(int lo, int hi);

  const std::vector<int>& sites() const noexcept { return sites_; }

 private:
  std::vector<int> sites_;
};

inline constexpr double kDefaultProbabilityCutoff = 1e-15;

/// Sum over sites with p > p_cutoff of (dp)^2 / p.
double classical_fi(const PositionDistribution& dist, const std::vector<double>& ddist,
                    double p_cutoff = kDefaultProbabilityCutoff);

/// classical_fi restricted to the window's sites.
double limited_fi(const PositionDistribution& dist, const std::vector<double>& ddist,
                  const DetectorWindow& window, double p_cutoff = kDefaultProbabilityCutoff);

/// Variance lower bound 1/(M F) for M repetitions; nullopt when F <= 0
/// (the measurement carries no information).
std::optional<double> cramer_rao_bound(double fisher, long long repetitions);

}  // namespace qwalk
