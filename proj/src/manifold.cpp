#include "cdig/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "cdig/error.hpp"

namespace cdig {

namespace {

struct Atom {
  double log_l;  // ln K^d(p_i)
  double phi;    // W / (1 + W)
};

Atom atom(const CdParams& reg, double x) { return {log_kernel(reg, x), w_ratio(reg, x)}; }

double h_norm_regular(const CdParams& reg, std::span<const double> p) {
  double s = 0.0;
  for (double x : p) {
    const Atom a = atom(reg, x);
    s += x * a.phi * std::exp(-a.log_l);
  }
  return s / (reg.r() * (1.0 - reg.c()));
}

void require_same_dim(const Simplex& p, const Simplex& q) {
  if (p.dim() != q.dim()) throw DomainError("simplex points of different dimension");
}

}  // namespace

Simplex Simplex::from_probabilities(std::vector<double> p, double p_min) {
  if (p.size() < 2) throw DomainError("simplex point needs at least two probabilities");
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < p_min) {
      throw DomainError("probability " + std::to_string(x) + " below the admissible minimum");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("probabilities do not sum to 1");
  return Simplex(std::move(p));
}

Simplex Simplex::from_chart(std::span<const double> coords, double p_min) {
  std::vector<double> p(coords.size() + 1);
  std::copy(coords.begin(), coords.end(), p.begin() + 1);
  p[0] = 1.0 - std::accumulate(coords.begin(), coords.end(), 0.0);
  return from_probabilities(std::move(p), p_min);
}

Simplex Simplex::uniform(int n) {
  if (n < 1) throw DomainError("simplex dimension must be >= 1");
  return Simplex(std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0 / (n + 1)));
}

double Simplex::min_probability() const { return *std::min_element(p_.begin(), p_.end()); }

MetricTensor::MetricTensor(Eigen::MatrixXd g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols()) throw SingularMetric("metric is not square");
  const double scale = std::max(1.0, g_.cwiseAbs().maxCoeff());
  if (!g_.allFinite()) throw SingularMetric("metric has non-finite entries");
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SingularMetric("metric is not symmetric");
  }
}

bool MetricTensor::positive_definite() const {
  Eigen::LLT<Eigen::MatrixXd> llt(g_);
  return llt.info() == Eigen::Success;
}

Eigen::MatrixXd MetricTensor::inverse() const {
  Eigen::LLT<Eigen::MatrixXd> llt(g_);
  if (llt.info() != Eigen::Success) throw SingularMetric("metric is not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(g_.rows(), g_.cols()));
}

std::string describe_point(const CdParams& params, const Simplex& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(c, d) = (" << params.c() << ", " << params.d() << "), p = (";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

NaturalCoords to_natural(const CdParams& params, const Simplex& p) {
  const CdParams reg = params.regularized();
  const double r = reg.r();
  const double l0 = std::expm1(log_kernel(reg, p[0]));
  NaturalCoords nc;
  nc.psi = r * l0;
  nc.theta.resize(p.dim());
  for (int i = 1; i <= p.dim(); ++i) {
    nc.theta[i - 1] = r * (l0 - std::expm1(log_kernel(reg, p[i])));
    if (!std::isfinite(nc.theta[i - 1])) {
      throw ComputationError("natural coordinates overflow at " + describe_point(params, p));
    }
  }
  if (!std::isfinite(nc.psi)) {
    throw ComputationError("natural coordinates overflow at " + describe_point(params, p));
  }
  return nc;
}

namespace {

// Solves sum_i E(a_i - s) = 1 for s >= max_i a_i and returns the chart part
// (E(a_1 - s), ..., E(a_n - s)). The sum is decreasing in s.
Simplex normalize_exponential(const CdParams& reg, std::span<const double> a) {
  auto excess = [&](double s) {
    double total = -1.0;
    for (double v : a) total += gen_exp(reg, v - s);
    return total;
  };
  double lo = *std::max_element(a.begin(), a.end());
  // The potential can be astronomically large when E decays slowly (large d).
  double width = std::max(1.0, std::abs(lo));
  double hi = lo + width;
  while (excess(hi) > 0.0) {
    width *= 2.0;
    hi = lo + width;
    if (!std::isfinite(hi)) throw ComputationError("no bracket for the potential");
  }
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  std::vector<double> coords(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) coords[i - 1] = gen_exp(reg, a[i] - s);
  return Simplex::from_chart(coords, 0.0);
}

}  // namespace

Simplex from_natural(const CdParams& params, std::span<const double> theta) {
  std::vector<double> a(theta.size() + 1, 0.0);
  std::copy(theta.begin(), theta.end(), a.begin() + 1);
  return normalize_exponential(params.regularized(), a);
}

Simplex natural_shift(const CdParams& params, const Simplex& p, std::span<const double> delta) {
  if (delta.size() != static_cast<std::size_t>(p.dim())) {
    throw DomainError("natural_shift: offset has the wrong dimension");
  }
  const CdParams reg = params.regularized();
  const int n = p.dim();
  // First-order potential shift dpsi = sum_j rho_j delta_j. Forming
  // delta_i - dpsi directly cancels catastrophically when the delta_j span
  // many orders of magnitude; with sum_{j>=0} rho_j = 1 it equals
  // rho_0 delta_i + sum_{j != i} rho_j (delta_i - delta_j).
  const std::vector<double> rho = psi_gradient(params, p);
  const Atom a0 = atom(reg, p[0]);
  const double rho0 = p[0] * a0.phi * std::exp(-a0.log_l) / (reg.r() * (1.0 - reg.c())) /
                      h_norm_regular(reg, p.probabilities());
  std::vector<double> a(p.size());
  double lin0 = 0.0;
  for (int j = 0; j < n; ++j) lin0 -= rho[j] * delta[j];
  a[0] = gen_log(reg, p[0]) + lin0;
  for (int i = 0; i < n; ++i) {
    double lin = rho0 * delta[i];
    for (int j = 0; j < n; ++j) {
      if (j != i) lin += rho[j] * (delta[i] - delta[j]);
    }
    a[i + 1] = gen_log(reg, p[i + 1]) + lin;
  }
  return normalize_exponential(reg, a);
}

std::vector<double> psi_gradient(const CdParams& params, const Simplex& p) {
  const CdParams reg = params.regularized();
  const double h = h_norm_regular(reg, p.probabilities());
  std::vector<double> rho(p.dim());
  for (int i = 1; i <= p.dim(); ++i) {
    const Atom a = atom(reg, p[i]);
    rho[i - 1] = p[i] * a.phi * std::exp(-a.log_l) / (reg.r() * (1.0 - reg.c())) / h;
  }
  return rho;
}

double h_norm(const CdParams& params, const Simplex& p) {
  return h_norm_regular(params.regularized(), p.probabilities());
}

double divergence(const CdParams& params, const Simplex& p, const Simplex& q) {
  require_same_dim(p, q);
  const CdParams reg = params.regularized();
  const double h = h_norm_regular(reg, p.probabilities());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Atom a = atom(reg, p[i]);
    s += p[i] * a.phi * std::expm1(log_kernel(reg, q[i]) - a.log_l);
  }
  return s / ((1.0 - reg.c()) * h);
}

MetricTensor metric(const CdParams& params, const Simplex& p) {
  const CdParams reg = params.regularized();
  const int n = p.dim();
  const double scale = 1.0 / ((1.0 - reg.c()) * h_norm_regular(reg, p.probabilities()));
  const double h0 = detail::h_cap_regular(reg, p[0]);
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, h0 * scale);
  for (int j = 0; j < n; ++j) g(j, j) += detail::h_cap_regular(reg, p[j + 1]) * scale;
  MetricTensor m(std::move(g));
  if (!m.positive_definite()) {
    throw SingularMetric("metric is not positive definite at " + describe_point(params, p));
  }
  return m;
}

MetricTensor fisher_metric(const Simplex& p) {
  const int n = p.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, 1.0 / p[0]);
  for (int j = 0; j < n; ++j) g(j, j) += 1.0 / p[j + 1];
  return MetricTensor(std::move(g));
}

EscortDistribution escort(const CdParams& params, const Simplex& p) {
  const CdParams reg = params.regularized();
  const double num = (1.0 - reg.c()) * h_norm_regular(reg, p.probabilities());
  EscortDistribution e;
  e.P.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double hi = detail::h_cap_regular(reg, p[i]);
    if (!(hi > 0.0) || !std::isfinite(hi)) {
      throw DomainError("escort undefined: H vanishes at " + describe_point(params, p));
    }
    e.P[i] = num / hi;
    e.N += e.P[i];
  }
  for (double& v : e.P) v /= e.N;
  return e;
}

namespace {

Eigen::MatrixXd hessian_at_step(const CdParams& params, const Simplex& p, double step) {
  const int n = p.dim();
  const std::vector<double> base = p.chart();
  auto f = [&](int i, double si, int j, double sj) {
    std::vector<double> q = base;
    q[i] += si * step;
    q[j] += sj * step;
    return divergence(params, p, Simplex::from_chart(q, 0.0));
  };
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> qp = base, qm = base;
    qp[i] += step;
    qm[i] -= step;
    const double fp = divergence(params, p, Simplex::from_chart(qp, 0.0));
    const double fm = divergence(params, p, Simplex::from_chart(qm, 0.0));
    hess(i, i) = (fp + fm) / (step * step);  // D(p, p) = 0
    for (int j = 0; j < i; ++j) {
      const double v = (f(i, 1, j, 1) - f(i, 1, j, -1) - f(i, -1, j, 1) + f(i, -1, j, -1)) /
                       (4.0 * step * step);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

}  // namespace

Eigen::MatrixXd divergence_hessian(const CdParams& params, const Simplex& p, double step) {
  if (!(step > 0.0)) throw DomainError("divergence_hessian: step must be positive");
  if (p.min_probability() < 10.0 * step) {
    throw BoundaryError("too close to the simplex boundary for step " + std::to_string(step));
  }
  const Eigen::MatrixXd coarse = hessian_at_step(params, p, step);
  const Eigen::MatrixXd fine = hessian_at_step(params, p, step / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

namespace {

// Third mixed derivative -d_i d_j d'_k D(p || p') in the chart u^m = theta^m / scale[m].
Tensor3 connection_at_step(const CdParams& params, const Simplex& base,
                           const std::vector<double>& scale, double h) {
  const int n = base.dim();
  std::map<std::vector<long>, Simplex> cache;
  // Stencil offsets are integer multiples of h; key on them to reuse solves.
  auto point = [&](const std::vector<long>& offs) -> const Simplex& {
    auto it = cache.find(offs);
    if (it == cache.end()) {
      std::vector<double> delta(n);
      for (int m = 0; m < n; ++m) delta[m] = static_cast<double>(offs[m]) * h * scale[m];
      it = cache.emplace(offs, natural_shift(params, base, delta)).first;
    }
    return it->second;
  };
  auto offset = [&](std::initializer_list<std::pair<int, long>> moves) {
    std::vector<long> o(n, 0);
    for (auto [idx, s] : moves) o[idx] += s;
    return o;
  };
  // dk(x) = d'_k D(x || p') at p' = p, as a function of x offsets.
  auto dk = [&](int k, const std::vector<long>& xo) {
    const Simplex& x = point(xo);
    const double plus = divergence(params, point(offset({{k, 1}})), x);
    const double minus = divergence(params, point(offset({{k, -1}})), x);
    return (plus - minus) / (2.0 * h);
  };

  Tensor3 out(n);
  for (int k = 0; k < n; ++k) {
    const double centre = dk(k, offset({}));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        double v;
        if (i == j) {
          v = (dk(k, offset({{i, 1}})) - 2.0 * centre + dk(k, offset({{i, -1}}))) / (h * h);
        } else {
          v = (dk(k, offset({{i, 1}, {j, 1}})) - dk(k, offset({{i, 1}, {j, -1}})) -
               dk(k, offset({{i, -1}, {j, 1}})) + dk(k, offset({{i, -1}, {j, -1}}))) /
              (4.0 * h * h);
        }
        out(i, j, k) = -v;
        out(j, i, k) = -v;
      }
    }
  }
  return out;
}

}  // namespace

ConnectionEstimate divergence_connection(const CdParams& params, const Simplex& p, double step) {
  if (!(step > 0.0)) throw DomainError("divergence_connection: step must be positive");
  if (p.min_probability() < 10.0 * step) {
    throw BoundaryError("too close to the simplex boundary for step " + std::to_string(step) +
                        ": " + describe_point(params, p));
  }
  const CdParams reg = params.regularized();
  // Axis scales from the Jacobian d theta / d p_chart (Lambda'(p_i) delta_ij +
  // Lambda'(p_0)): a unit step in u^i moves p by at most one unit.
  const int n = p.dim();
  const double l0 = gen_log_derivative(reg, p[0]);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Constant(n, n, l0);
  for (int i = 0; i < n; ++i) jac(i, i) += gen_log_derivative(reg, p[i + 1]);
  const Eigen::MatrixXd jinv = jac.inverse();
  std::vector<double> scale(n);
  for (int i = 0; i < n; ++i) scale[i] = 1.0 / jinv.col(i).cwiseAbs().maxCoeff();
  ConnectionEstimate est;
  est.coarse = connection_at_step(params, p, scale, step);
  est.fine = connection_at_step(params, p, scale, step / 2.0);
  est.coefficients = Tensor3(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double co = est.coarse(a, b, c);
        const double fi = est.fine(a, b, c);
        est.coefficients(a, b, c) = (4.0 * fi - co) / 3.0;
        est.halving_gap = std::max(est.halving_gap, std::abs(co - fi));
      }
  return est;
}

}  // namespace cdig
