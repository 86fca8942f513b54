#include "cdig/specfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cdig/error.hpp"

namespace cdig {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxHalley = 64;

// Series of W about the branch point in p = +-sqrt(2(e x + 1)); p > 0 selects
// the principal branch, p < 0 the lower one.
double branch_point_series(double p) {
  return -1.0 +
         p * (1.0 +
              p * (-1.0 / 3.0 +
                   p * (11.0 / 72.0 +
                        p * (-43.0 / 540.0 +
                             p * (769.0 / 17280.0 + p * (-221.0 / 8505.0))))));
}

double halley(double w, double x) {
  for (int i = 0; i < kMaxHalley; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) return w;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * std::abs(w) || f == 0.0) return w;
  }
  return w;
}

// Distance of x from the branch point, clamped to zero within a few ulps.
double branch_gap(double x, BranchId branch) {
  const double gap = std::fma(std::numbers::e, x, 1.0);
  if (gap < 0.0) {
    if (gap > -16.0 * kEps) return 0.0;
    throw BranchDomainError("lambert_w: argument " + std::to_string(x) + " below -1/e on branch " +
                            std::to_string(static_cast<int>(branch)));
  }
  return gap;
}

double w_principal(double x) {
  if (x == 0.0) return x;
  const double gap = branch_gap(x, BranchId::principal);
  if (gap == 0.0) return -1.0;
  const double p = std::sqrt(2.0 * gap);
  if (p < 1e-3) return branch_point_series(p);
  if (std::abs(x) < 1e-8) return x * (1.0 + x * (-1.0 + 1.5 * x));

  double w0;
  if (x < -0.25) {
    w0 = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  } else if (x < 0.25) {
    w0 = x * (1.0 + x * (-1.0 + 1.5 * x));
  } else {
    const double l = std::log1p(x);
    w0 = l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  return halley(w0, x);
}

double w_lower(double x) {
  if (!(x < 0.0)) {
    throw BranchDomainError("lambert_w: lower branch requires x < 0, got " + std::to_string(x));
  }
  const double gap = branch_gap(x, BranchId::lower);
  if (gap == 0.0) return -1.0;
  const double p = -std::sqrt(2.0 * gap);
  if (p > -1e-3) return branch_point_series(p);

  double w0;
  if (x < -0.25) {
    w0 = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w0 = l1 - l2 + l2 / l1;
  }
  return halley(w0, x);
}

// Newton on g(w) = w + ln|w| - target; for the principal branch with large
// positive arguments and the lower branch with tiny negative ones.
double log_newton(double w, double target) {
  for (int i = 0; i < kMaxHalley; ++i) {
    const double g = w + std::log(std::abs(w)) - target;
    const double step = g / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * std::abs(w)) break;
  }
  return w;
}

}  // namespace

BranchId branch_from_int(int k) {
  if (k == 0) return BranchId::principal;
  if (k == -1) return BranchId::lower;
  throw DomainError("branch index must be 0 or -1, got " + std::to_string(k));
}

double lambert_w(BranchId branch, double x) {
  if (std::isnan(x)) throw BranchDomainError("lambert_w: NaN argument");
  if (branch == BranchId::principal) {
    if (std::isinf(x)) {
      if (x > 0) return x;
      throw BranchDomainError("lambert_w: -inf argument");
    }
    return w_principal(x);
  }
  return w_lower(x);
}

double lambert_w_log(BranchId branch, double log_abs_x, int sign) {
  if (std::isnan(log_abs_x)) throw BranchDomainError("lambert_w_log: NaN argument");
  if (sign > 0) {
    if (branch != BranchId::principal) {
      throw BranchDomainError("lambert_w_log: positive argument on the lower branch");
    }
    if (log_abs_x == std::numeric_limits<double>::infinity()) return log_abs_x;
    if (log_abs_x < 20.0) return w_principal(std::exp(log_abs_x));
    const double l = log_abs_x;
    return log_newton(l - std::log(l) + std::log(l) / l, l);
  }
  if (sign < 0) {
    if (log_abs_x > -700.0) return lambert_w(branch, -std::exp(log_abs_x));
    if (branch == BranchId::principal) return -std::exp(log_abs_x);
    const double l = log_abs_x;
    return log_newton(l - std::log(-l), l);
  }
  throw BranchDomainError("lambert_w_log: sign must be +1 or -1");
}

double upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("upper_incomplete_gamma: a must be positive, got " + std::to_string(a));
  }
  if (!(x >= 0.0)) {
    throw DomainError("upper_incomplete_gamma: x must be non-negative, got " + std::to_string(x));
  }
  if (x == 0.0) return std::tgamma(a);
  if (std::isinf(x)) return 0.0;

  const double log_prefactor = a * std::log(x) - x;
  constexpr int kMaxIter = 100000;

  if (x > a + 1.0) {
    // Modified Lentz evaluation of the Legendre continued fraction.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
      const double an = -i * (i - a);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < tiny) d = tiny;
      c = b + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(log_prefactor) * h;
  }

  // gamma(a, x) = x^a e^-x sum_k x^k / (a (a+1) ... (a+k))
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return std::tgamma(a) - std::exp(log_prefactor) * sum;
}

}  // namespace cdig
