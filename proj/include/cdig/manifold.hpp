#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "cdig/cdmath.hpp"
#include "cdig/tensor.hpp"

namespace cdig {

/// Interior point (p_0, ..., p_n) of the n-dimensional probability simplex.
/// The chart is (p_1, ..., p_n) with p_0 = 1 - sum_{i>=1} p_i.
class Simplex {
 public:
  static constexpr double kDefaultMin = 1e-8;

  /// All n+1 probabilities; must sum to 1 within 1e-12 and be >= p_min.
  static Simplex from_probabilities(std::vector<double> p, double p_min = kDefaultMin);
  /// Chart coordinates (p_1, ..., p_n); p_0 is derived.
  static Simplex from_chart(std::span<const double> coords, double p_min = kDefaultMin);
  /// p_i = 1/(n+1).
  static Simplex uniform(int n);

  int dim() const { return static_cast<int>(p_.size()) - 1; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probabilities() const { return p_; }
  std::vector<double> chart() const { return {p_.begin() + 1, p_.end()}; }
  double min_probability() const;

 private:
  explicit Simplex(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

/// theta^i and the potential psi of the (c, d)-exponential family.
struct NaturalCoords {
  std::vector<double> theta;
  double psi = 0.0;
};

/// Symmetric positive-definite n x n matrix attached to a simplex point.
class MetricTensor {
 public:
  /// Throws SingularMetric if g is not symmetric to 1e-12 (relative).
  explicit MetricTensor(Eigen::MatrixXd g);

  int dim() const { return static_cast<int>(g_.rows()); }
  double operator()(int i, int j) const { return g_(i, j); }
  const Eigen::MatrixXd& matrix() const { return g_; }
  bool positive_definite() const;
  /// Inverse via Cholesky; throws SingularMetric when factorization fails.
  Eigen::MatrixXd inverse() const;

 private:
  Eigen::MatrixXd g_;
};

struct EscortDistribution {
  std::vector<double> P;
  double N = 0.0;
};

/// Natural coordinates theta^i = Lambda(p_i) - Lambda(p_0), psi = -Lambda(p_0).
NaturalCoords to_natural(const CdParams& params, const Simplex& p);

/// Inverse of to_natural: solves E(-psi) + sum_i E(theta^i - psi) = 1 for psi.
Simplex from_natural(const CdParams& params, std::span<const double> theta);

/// The point with natural coordinates theta_p + delta. Solved relative to p
/// (sum_i E(Lambda(p_i) + delta_i - dpsi) = 1, delta_0 = 0), so precision is
/// kept when theta_p itself is huge and only its offsets are moderate.
Simplex natural_shift(const CdParams& params, const Simplex& p, std::span<const double> delta);

/// d psi / d theta^i = Delta(Lambda(p_i)) / h(p), i = 1..n.
std::vector<double> psi_gradient(const CdParams& params, const Simplex& p);

/// h(p) = sum_i p_i W/(1+W) K^-d(p_i) / (r (1-c)).
double h_norm(const CdParams& params, const Simplex& p);

/// Canonical (c, d)-divergence D(p, q) in closed form.
double divergence(const CdParams& params, const Simplex& p, const Simplex& q);

/// g_ij = (H(p_0) + delta_ij H(p_j)) / ((1-c) h(p)). Throws SingularMetric
/// naming (c, d, p) when the result is not positive definite.
MetricTensor metric(const CdParams& params, const Simplex& p);

/// g_ij = 1/p_0 + delta_ij / p_i.
MetricTensor fisher_metric(const Simplex& p);

/// P_i proportional to (1-c) h(p) / H(p_i); N(p) is the normalization.
EscortDistribution escort(const CdParams& params, const Simplex& p);

/// d^2 D(p, q) / dq_i dq_j at q = p by central differences in the p chart,
/// at `step` and `step / 2`, Richardson-combined.
Eigen::MatrixXd divergence_hessian(const CdParams& params, const Simplex& p, double step = 1e-4);

struct ConnectionEstimate {
  Tensor3 coefficients;     ///< Richardson-extrapolated Gamma_{ij,k}
  Tensor3 coarse;           ///< estimate at `step`
  Tensor3 fine;             ///< estimate at `step / 2`
  double halving_gap = 0.0; ///< max |coarse - fine|
};

/// Gamma_{ij,k} = -d_i d_j d'_k D(p || p') at p' = p, with the canonical
/// ordering D(p || p') = psi(theta_p) + phi(eta_p') - theta_p . eta_p'
/// (that is divergence(p', p)). Derivatives are taken in the natural chart
/// rescaled per axis, u^i = theta^i / s_i with s_i fixed at p so that a unit
/// step in u^i moves p by at most one unit; the rescaling is affine, and it
/// keeps magnitudes comparable to the p chart when theta spans many orders
/// of magnitude (large d). Central differences at `step` and `step / 2`,
/// Richardson-combined. Stencil points are solved through natural_shift.
/// Throws BoundaryError when some p_i < 10 * step.
ConnectionEstimate divergence_connection(const CdParams& params, const Simplex& p,
                                         double step = 1e-3);

/// "(c, d) = (...), p = (...)" for error messages and reports.
std::string describe_point(const CdParams& params, const Simplex& p);

}  // namespace cdig
