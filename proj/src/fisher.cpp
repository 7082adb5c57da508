#include "qwalk/fisher.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kTraceTolerance = 1e-10;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kPsdTolerance = 1e-10;
constexpr double kNegativeProbability = 1e-12;
constexpr double kScoreSumTolerance = 1e-9;

void require_normalized(const TangentState& ts) {
  const double n = ts.base().norm_squared();
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    throw InvariantError("state is not normalized: norm^2 = " + std::to_string(n));
  }
}

struct Support {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

Support amplitude_support(const TangentState& ts) {
  const auto up = ts.base().up();
  const auto down = ts.base().down();
  const auto dup = ts.d_up();
  const auto ddown = ts.d_down();
  const Complex zero{};
  auto occupied = [&](std::size_t i) {
    return up[i] != zero || down[i] != zero || dup[i] != zero || ddown[i] != zero;
  };
  std::size_t first = 0;
  while (first < up.size() && !occupied(first)) {
    ++first;
  }
  if (first == up.size()) {
    throw InvariantError("walk state carries no amplitude");
  }
  std::size_t last = up.size() - 1;
  while (!occupied(last)) {
    --last;
  }
  return {first, last};
}

Eigen::Map<const Eigen::VectorXcd> slice(std::span<const Complex> v, const Support& s) {
  return {v.data() + s.first, static_cast<Eigen::Index>(s.last - s.first + 1)};
}

void check_probability_inputs(const PositionDistribution& dist, const std::vector<double>& ddist) {
  if (ddist.size() != dist.probs.size()) {
    throw InvalidInput("probability derivative does not match the distribution size");
  }
  double score_sum = 0.0;
  for (double d : ddist) {
    score_sum += d;
  }
  if (!(std::abs(score_sum) <= kScoreSumTolerance)) {
    throw InvariantError("probability derivative does not sum to zero: " +
                         std::to_string(score_sum));
  }
}

double fisher_term(double p, double dp, double p_cutoff) {
  if (p < -kNegativeProbability) {
    throw InvalidInput("negative probability " + std::to_string(p));
  }
  return p > p_cutoff ? dp * dp / p : 0.0;
}

}  // namespace

double full_qfi(const TangentState& ts) {
  require_normalized(ts);
  return 4.0 * (ts.derivative_norm_squared() - std::norm(ts.overlap()));
}

PositionDensity reduce_position(const TangentState& ts) {
  const Support s = amplitude_support(ts);
  const auto up = slice(ts.base().up(), s);
  const auto down = slice(ts.base().down(), s);
  const auto dup = slice(ts.d_up(), s);
  const auto ddown = slice(ts.d_down(), s);

  PositionDensity pd;
  pd.t = ts.t();
  pd.min_site = ts.base().topology().min_site() + static_cast<int>(s.first);
  pd.rho = up * up.adjoint() + down * down.adjoint();
  pd.drho = dup * up.adjoint() + up * dup.adjoint() + ddown * down.adjoint() +
            down * ddown.adjoint();

  const double tr = pd.rho.trace().real();
  if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
    throw InvariantError("reduced state has trace " + std::to_string(tr));
  }
  const double dtr = pd.drho.trace().real();
  if (!(std::abs(dtr) <= kTraceTolerance)) {
    throw InvariantError("reduced derivative has trace " + std::to_string(dtr));
  }
  return pd;
}

void validate(const PositionDensity& pd) {
  if (pd.rho.rows() != pd.rho.cols() || pd.drho.rows() != pd.rho.rows() ||
      pd.drho.cols() != pd.rho.cols()) {
    throw InvariantError("density matrices are not square and equally sized");
  }
  if (!(std::abs(pd.rho.trace().real() - 1.0) <= kTraceTolerance)) {
    throw InvariantError("trace(rho) != 1");
  }
  if (!(std::abs(pd.drho.trace()) <= kTraceTolerance)) {
    throw InvariantError("trace(drho) != 0");
  }
  if (!((pd.rho - pd.rho.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTolerance)) {
    throw InvariantError("rho is not Hermitian");
  }
  if (!((pd.drho - pd.drho.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTolerance)) {
    throw InvariantError("drho is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(pd.rho, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw InvariantError("eigendecomposition of rho failed");
  }
  if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw InvariantError("rho has a negative eigenvalue");
  }
}

double position_qfi_approx(const PositionDensity& pd) {
  const Eigen::MatrixXcd d2 = pd.drho * pd.drho;
  const Complex tr = d2.trace() - (d2 * pd.rho).trace();
  return 4.0 * tr.real();
}

double position_qfi_approx(const TangentState& ts) {
  const Support s = amplitude_support(ts);
  Eigen::MatrixXcd basis(static_cast<Eigen::Index>(s.last - s.first + 1), 4);
  basis.col(0) = slice(ts.base().up(), s);
  basis.col(1) = slice(ts.base().down(), s);
  basis.col(2) = slice(ts.d_up(), s);
  basis.col(3) = slice(ts.d_down(), s);

  // rho = V P V^H and drho = V Q V^H in the basis V above.
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 0) = p(1, 1) = 1.0;
  Eigen::Matrix4cd q = Eigen::Matrix4cd::Zero();
  q(2, 0) = q(0, 2) = q(3, 1) = q(1, 3) = 1.0;
  const Eigen::Matrix4cd gram = basis.adjoint() * basis;

  const Eigen::Matrix4cd qg = q * gram;
  const Eigen::Matrix4cd qgqg = qg * qg;
  const Complex tr = qgqg.trace() - (qgqg * p * gram).trace();
  return 4.0 * tr.real();
}

double position_qfi_exact(const PositionDensity& pd, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(pd.rho);
  if (eig.info() != Eigen::Success) {
    throw InvariantError("eigendecomposition of rho failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXcd& vecs = eig.eigenvectors();
  const Eigen::MatrixXcd d = vecs.adjoint() * pd.drho * vecs;

  double h = 0.0;
  const Eigen::Index n = lambda.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = lambda(i) + lambda(j);
      if (denom > eps) {
        h += 2.0 * std::norm(d(i, j)) / denom;
      }
    }
  }
  return h;
}

std::vector<double> probability_derivative(const TangentState& ts) {
  const auto up = ts.base().up();
  const auto down = ts.base().down();
  const auto dup = ts.d_up();
  const auto ddown = ts.d_down();
  std::vector<double> out(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) {
    out[i] = 2.0 * (std::conj(up[i]) * dup[i] + std::conj(down[i]) * ddown[i]).real();
  }
  return out;
}

DetectorWindow::DetectorWindow(std::vector<int> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  if (sites_.empty()) {
    throw InvalidInput("detector window is empty");
  }
}

DetectorWindow DetectorWindow::range(int lo, int hi) {
  if (hi < lo) {
    throw InvalidInput("detector window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] is empty");
  }
  std::vector<int> sites;
  sites.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int x = lo; x <= hi; ++x) {
    sites.push_back(x);
  }
  return DetectorWindow(std::move(sites));
}

double classical_fi(const PositionDistribution& dist, const std::vector<double>& ddist,
                    double p_cutoff) {
  check_probability_inputs(dist, ddist);
  double f = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    f += fisher_term(dist.probs[i], ddist[i], p_cutoff);
  }
  return f;
}

double limited_fi(const PositionDistribution& dist, const std::vector<double>& ddist,
                  const DetectorWindow& window, double p_cutoff) {
  check_probability_inputs(dist, ddist);
  double f = 0.0;
  for (int x : window.sites()) {
    if (x < dist.min_site || x > dist.max_site()) {
      throw InvalidInput("detector site " + std::to_string(x) + " is off the lattice");
    }
    const auto i = static_cast<std::size_t>(x - dist.min_site);
    f += fisher_term(dist.probs[i], ddist[i], p_cutoff);
  }
  return f;
}

std::optional<double> cramer_rao_bound(double fisher, long long repetitions) {
  if (repetitions < 1) {
    throw InvalidInput("repetition count must be positive");
  }
  if (!(fisher > 0.0)) {
    return std::nullopt;
  }
  return 1.0 / (static_cast<double>(repetitions) * fisher);
}

}  // namespace qwalk
