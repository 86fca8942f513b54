#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdig/manifold.hpp"
#include "cdig/tensor.hpp"

namespace cdig {

/// A metric tensor field over the simplex chart (p_1, ..., p_n).
struct MetricField {
  std::function<MetricTensor(const Simplex&)> evaluate;
  std::string label;
};

MetricField cd_metric_field(const CdParams& params);
MetricField fisher_metric_field();

/// 1e-3 / (n + 1).
double default_curvature_step(int n);

/// Gamma^k_ij as out(k, i, j), central differences at `step`.
/// Throws BoundaryError without a 10 * step margin to the simplex boundary.
Tensor3 christoffels(const MetricField& field, const Simplex& p, double step);

/// max |d_k g_ij - Gamma_{ki,j} - Gamma_{kj,i}| over all index triples.
double metric_compatibility_residual(const MetricField& field, const Simplex& p, double step);

/// Levi-Civita scalar curvature g^{bd} R^a_{bad}; 0 for n = 1.
double scalar_curvature(const MetricField& field, const Simplex& p, double step);

struct CurvatureReport {
  int n = 0;
  std::vector<double> point;  ///< all n+1 probabilities
  double R = 0.0;             ///< at step
  double R_half = 0.0;        ///< at step / 2
  double R_fisher = 0.0;
  double R_fisher_half = 0.0;
  double ratio = 0.0;         ///< R / R_fisher, NaN if R_fisher == 0
  bool step_ok = false;       ///< both fields pass the step-halving test
  std::string error;          ///< set when the dimension failed; values are NaN
};

/// |R(step) - R(step/2)| <= 1e-3 |R(step/2)| + 1e-6.
bool step_halving_ok(double r_step, double r_half);

/// R of `field` and of the Fisher field at p_i = 1/(n+1) for n = 2..n_max.
std::vector<CurvatureReport> curvature_ratio_scan(const MetricField& field, int n_max);
std::vector<CurvatureReport> curvature_ratio_scan(const CdParams& params, int n_max);

}  // namespace cdig
