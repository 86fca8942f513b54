#include "cdig/curvature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cdig/error.hpp"

namespace cdig {

namespace {

void require_margin(const Simplex& p, double step) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  if (p.min_probability() < 10.0 * step) {
    throw BoundaryError("point within 10 * step of the simplex boundary");
  }
}

Simplex shifted(const std::vector<double>& chart, int l, double delta) {
  std::vector<double> x = chart;
  x[l] += delta;
  return Simplex::from_chart(x, 0.0);
}

// dg[l] = d_l g at the point.
std::vector<Eigen::MatrixXd> metric_derivatives(const MetricField& field,
                                                const std::vector<double>& chart, double step) {
  const int n = static_cast<int>(chart.size());
  std::vector<Eigen::MatrixXd> dg(n);
  for (int l = 0; l < n; ++l) {
    const Eigen::MatrixXd gp = field.evaluate(shifted(chart, l, step)).matrix();
    const Eigen::MatrixXd gm = field.evaluate(shifted(chart, l, -step)).matrix();
    dg[l] = (gp - gm) / (2.0 * step);
  }
  return dg;
}

// Gamma_{ij,l} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij) as out(i, j, l).
Tensor3 first_kind(const std::vector<Eigen::MatrixXd>& dg) {
  const int n = static_cast<int>(dg.size());
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int l = 0; l < n; ++l) {
        const double v = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out(i, j, l) = v;
        out(j, i, l) = v;
      }
  return out;
}

Tensor3 christoffels_at(const MetricField& field, const std::vector<double>& chart,
                        double step) {
  const int n = static_cast<int>(chart.size());
  const Eigen::MatrixXd ginv = field.evaluate(Simplex::from_chart(chart, 0.0)).inverse();
  const Tensor3 g1 = first_kind(metric_derivatives(field, chart, step));
  Tensor3 out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * g1(i, j, l);
        out(k, i, j) = s;
        out(k, j, i) = s;
      }
  return out;
}

}  // namespace

MetricField cd_metric_field(const CdParams& params) {
  std::ostringstream label;
  label.precision(10);
  label << "cd(" << params.c() << "," << params.d() << ")";
  return {[params](const Simplex& p) { return metric(params, p); }, label.str()};
}

MetricField fisher_metric_field() {
  return {[](const Simplex& p) { return fisher_metric(p); }, "fisher"};
}

double default_curvature_step(int n) { return 1e-3 / (n + 1); }

Tensor3 christoffels(const MetricField& field, const Simplex& p, double step) {
  require_margin(p, step);
  return christoffels_at(field, p.chart(), step);
}

double metric_compatibility_residual(const MetricField& field, const Simplex& p, double step) {
  require_margin(p, step);
  const std::vector<double> chart = p.chart();
  const int n = p.dim();
  const Eigen::MatrixXd g = field.evaluate(p).matrix();
  const std::vector<Eigen::MatrixXd> dg = metric_derivatives(field, chart, step);
  const Tensor3 gamma = christoffels_at(field, chart, step);
  // Gamma_{ki,j} = g_{jl} Gamma^l_{ki}
  auto lowered = [&](int k, int i, int j) {
    double s = 0.0;
    for (int l = 0; l < n; ++l) s += g(j, l) * gamma(l, k, i);
    return s;
  };
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(dg[k](i, j) - lowered(k, i, j) - lowered(k, j, i)));
      }
  return worst;
}

double scalar_curvature(const MetricField& field, const Simplex& p, double step) {
  require_margin(p, step);
  const int n = p.dim();
  if (n == 1) return 0.0;
  const std::vector<double> chart = p.chart();
  const Eigen::MatrixXd ginv = field.evaluate(p).inverse();
  const Tensor3 gamma = christoffels_at(field, chart, step);

  // dgamma[c](a, b, e) = d_c Gamma^a_be
  std::vector<Tensor3> dgamma(n);
  for (int c = 0; c < n; ++c) {
    std::vector<double> xp = chart, xm = chart;
    xp[c] += step;
    xm[c] -= step;
    const Tensor3 gp = christoffels_at(field, xp, step);
    const Tensor3 gm = christoffels_at(field, xm, step);
    dgamma[c] = Tensor3(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) dgamma[c](a, b, e) = (gp(a, b, e) - gm(a, b, e)) / (2.0 * step);
  }

  // Ric_bd = R^a_bad = d_a Gamma^a_db - d_d Gamma^a_ab + Gamma^a_ae Gamma^e_db - Gamma^a_de Gamma^e_ab
  double scalar = 0.0;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double ric = 0.0;
      for (int a = 0; a < n; ++a) {
        ric += dgamma[a](a, d, b) - dgamma[d](a, a, b);
        for (int e = 0; e < n; ++e) {
          ric += gamma(a, a, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, a, b);
        }
      }
      scalar += ginv(b, d) * ric;
    }
  return scalar;
}

bool step_halving_ok(double r_step, double r_half) {
  return std::abs(r_step - r_half) <= 1e-3 * std::abs(r_half) + 1e-6;
}

std::vector<CurvatureReport> curvature_ratio_scan(const MetricField& field, int n_max) {
  if (n_max < 2) throw DomainError("curvature scan needs n_max >= 2");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const MetricField fisher = fisher_metric_field();
  std::vector<CurvatureReport> out;
  for (int n = 2; n <= n_max; ++n) {
    const Simplex p = Simplex::uniform(n);
    CurvatureReport rep;
    rep.n = n;
    rep.point.assign(p.probabilities().begin(), p.probabilities().end());
    const double step = default_curvature_step(n);
    try {
      rep.R = scalar_curvature(field, p, step);
      rep.R_half = scalar_curvature(field, p, step / 2.0);
      rep.R_fisher = scalar_curvature(fisher, p, step);
      rep.R_fisher_half = scalar_curvature(fisher, p, step / 2.0);
      rep.ratio = rep.R_fisher != 0.0 ? rep.R / rep.R_fisher : nan;
      rep.step_ok =
          step_halving_ok(rep.R, rep.R_half) && step_halving_ok(rep.R_fisher, rep.R_fisher_half);
    } catch (const Error& e) {
      rep.R = rep.R_half = rep.R_fisher = rep.R_fisher_half = rep.ratio = nan;
      rep.step_ok = false;
      rep.error = e.what();
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<CurvatureReport> curvature_ratio_scan(const CdParams& params, int n_max) {
  return curvature_ratio_scan(cd_metric_field(params), n_max);
}

}  // namespace cdig
