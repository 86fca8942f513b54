#include "cdig/cdmath.hpp"

#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "cdig/error.hpp"

namespace cdig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe(double c, double d) {
  std::ostringstream os;
  os.precision(17);
  os << "(c, d) = (" << c << ", " << d << ")";
  return os.str();
}

void check_continuation(const Continuation& cont) {
  if (!(cont.eps_c > 0.0 && cont.eps_c < 0.5) || !(cont.eps_d > 0.0 && cont.eps_d < 0.5)) {
    throw InvalidRegion("continuation offsets must lie in (0, 0.5)");
  }
}

void check_unit_interval(double x, const char* who) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw DomainError(std::string(who) + ": argument must lie in (0, 1], got " + std::to_string(x));
  }
}

}  // namespace

CdParams CdParams::make(double c, double d, Continuation cont) {
  check_continuation(cont);
  if (!(c > 0.0 && c <= 1.0)) throw InvalidRegion("c must lie in (0, 1]: " + describe(c, d));
  if (!std::isfinite(d)) throw InvalidRegion("d must be finite: " + describe(c, d));

  CdParams p;
  p.c_ = c;
  p.d_ = d;
  p.cont_ = cont;
  p.hanel_thurner_ = true;
  const double denom = 1.0 - c + c * d;
  if (c == 1.0 && d == 0.0) {
    p.r_ = kInf;
  } else if (!(denom > 0.0)) {
    throw InvalidRegion("1 - c + c d must be positive: " + describe(c, d));
  } else {
    p.r_ = 1.0 / denom;
  }
  p.derive();
  return p;
}

CdParams CdParams::with_r(double c, double d, double r, Continuation cont) {
  check_continuation(cont);
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidRegion("c must lie in [0, 1]: " + describe(c, d));
  if (!std::isfinite(d)) throw InvalidRegion("d must be finite: " + describe(c, d));
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidRegion("r must be positive and finite");
  if (c == 1.0) {
    if (!(d > 0.0)) throw InvalidRegion("c = 1 admits only d > 0: " + describe(c, d));
  } else {
    const double critical = 1.0 / (1.0 - c);
    const bool ok = d > 0.0   ? r < critical
                    : d < 0.0 ? r > critical
                              : std::abs(r - critical) <= 1e-12 * critical;
    if (!ok) {
      throw InvalidRegion("r = " + std::to_string(r) + " violates the sign condition for " +
                          describe(c, d));
    }
  }
  CdParams p;
  p.c_ = c;
  p.d_ = d;
  p.r_ = r;
  p.cont_ = cont;
  p.hanel_thurner_ = false;
  p.derive();
  return p;
}

void CdParams::derive() {
  branch_ = d_ < 0.0 ? BranchId::lower : BranchId::principal;
  if (!std::isfinite(r_)) {
    b_ = kNaN;
    bracket_ = kNaN;
    w_at_b_ = kNaN;
    log_abs_b_ = kNaN;
    b_sign_ = 0;
    return;
  }
  if (d_ == 0.0) {
    bracket_ = 0.0;
    b_ = kInf;
    log_abs_b_ = kInf;
    b_sign_ = 1;
    w_at_b_ = kInf;
    return;
  }
  // 1 - (1-c) r, exactly c d r under the Hanel-Thurner choice.
  const double om = hanel_thurner_ ? c_ * d_ * r_ : 1.0 - (1.0 - c_) * r_;
  bracket_ = om / (r_ * d_);
  if (bracket_ < 0.0) throw InvalidRegion("generalized logarithm is not real for " + describe(c_, d_));
  const double a = (1.0 - c_) * r_ / om;
  b_ = a * std::exp(a);
  if (a == 0.0) {
    log_abs_b_ = -kInf;
    b_sign_ = 0;
    w_at_b_ = 0.0;
  } else {
    log_abs_b_ = std::log(std::abs(a)) + a;
    b_sign_ = a > 0.0 ? 1 : -1;
    w_at_b_ = lambert_w_log(branch_, log_abs_b_, b_sign_);
  }
}

bool CdParams::on_corner() const {
  return std::abs(1.0 - c_) < cont_.eps_c && std::abs(d_) < cont_.eps_d;
}

bool CdParams::needs_continuation() const {
  return !regular_ && std::abs(1.0 - c_) < cont_.eps_c;
}

CdParams CdParams::regularized() const {
  if (!needs_continuation()) return *this;
  const double c_reg = 1.0 - cont_.eps_c;
  const double d_reg = on_corner() ? cont_.eps_d : d_;
  CdParams p = hanel_thurner_ ? make(c_reg, d_reg, cont_) : with_r(c_reg, d_reg, r_, cont_);
  p.regular_ = true;
  return p;
}

CdParams CdParams::with_continuation(Continuation cont) const {
  return hanel_thurner_ ? make(c_, d_, cont) : with_r(c_, d_, r_, cont);
}

double log_kernel(const CdParams& params, double x) {
  if (!std::isfinite(params.r())) return log_kernel(params.regularized(), x);
  check_unit_interval(x, "log_kernel");
  const double lx = std::log(x);
  if (params.d() == 0.0) return (params.c() - 1.0) * lx;
  const double u = 1.0 - params.bracket() * lx;
  if (!(u > 0.0)) throw DomainError("generalized logarithm bracket is negative");
  return (params.c() - 1.0) * lx + params.d() * std::log1p(-params.bracket() * lx);
}

double gen_log(const CdParams& params, double x) {
  if (!std::isfinite(params.r())) return gen_log(params.regularized(), x);
  check_unit_interval(x, "gen_log");
  return -params.r() * std::expm1(log_kernel(params, x));
}

double gen_log_derivative(const CdParams& params, double x) {
  if (!std::isfinite(params.r())) return gen_log_derivative(params.regularized(), x);
  const double log_l = log_kernel(params, x);
  double g1 = (params.c() - 1.0) / x;
  if (params.d() != 0.0) {
    g1 -= params.d() * params.bracket() / (x * (1.0 - params.bracket() * std::log(x)));
  }
  return -params.r() * std::exp(log_l) * g1;
}

double gen_exp(const CdParams& params, double y) {
  if (!std::isfinite(params.r())) return gen_exp(params.regularized(), y);
  if (!(y <= 0.0)) throw DomainError("gen_exp: argument must be <= 0, got " + std::to_string(y));
  const double c = params.c();
  const double d = params.d();
  const double log_z = std::log1p(-y / params.r());
  if (d == 0.0) return std::exp(log_z / (c - 1.0));
  if (c == 1.0) return std::exp(-std::expm1(log_z / d) / params.bracket());
  const double w = lambert_w_log(params.branch(), params.log_abs_b() + log_z / d, params.b_sign());
  return std::exp(-(d / (1.0 - c)) * (w - params.w_at_b()));
}

KValues k_fn(const CdParams& params, double x) {
  if (params.d() == 0.0 || !std::isfinite(params.r())) {
    throw DomainError("k_fn: undefined on the d = 0 line");
  }
  check_unit_interval(x, "k_fn");
  const double c = params.c();
  const double d = params.d();
  const double b = params.bracket();
  const double lx = std::log(x);
  const double u = 1.0 - b * lx;
  if (!(u > 0.0)) throw DomainError("k_fn: bracket is negative");
  const double k = std::exp((c - 1.0) / d * lx) * u;
  // s1 = (ln K)', s2 = (ln K)''
  const double s1 = (c - 1.0) / (d * x) - b / (x * u);
  const double s2 = -(c - 1.0) / (d * x * x) + b / (x * x * u) - b * b / (x * x * u * u);
  return {k, k * s1, k * (s2 + s1 * s1)};
}

double w_ratio(const CdParams& regular, double x) {
  if (regular.d() == 0.0) return 1.0;
  const double log_k = log_kernel(regular, x) / regular.d();
  const double w = lambert_w_log(regular.branch(), regular.log_abs_b() + log_k, regular.b_sign());
  return w / (1.0 + w);
}

namespace detail {

double delta_regular(const CdParams& regular, double y) {
  if (!(y <= 0.0)) throw DomainError("delta_fn: argument must be <= 0, got " + std::to_string(y));
  const double c = regular.c();
  const double d = regular.d();
  const double r = regular.r();
  const double log_z = std::log1p(-y / r);
  double e_val;
  double ratio;
  if (d == 0.0) {
    e_val = std::exp(log_z / (c - 1.0));
    ratio = 1.0;
  } else {
    const double w =
        lambert_w_log(regular.branch(), regular.log_abs_b() + log_z / d, regular.b_sign());
    e_val = std::exp(-(d / (1.0 - c)) * (w - regular.w_at_b()));
    ratio = w / (1.0 + w);
  }
  return e_val * ratio * std::exp(-log_z) / (r * (1.0 - c));
}

double h_cap_regular(const CdParams& regular, double x) {
  check_unit_interval(x, "h_cap");
  const double c = regular.c();
  const double d = regular.d();
  const double lx = std::log(x);
  double g1 = (c - 1.0) / x;  // (ln K^d)'
  double g2 = -(c - 1.0) / (x * x);  // (ln K^d)''
  double ratio = 1.0;
  if (d != 0.0) {
    const double b = regular.bracket();
    const double u = 1.0 - b * lx;
    const double db = d * b;
    g1 -= db / (x * u);
    g2 += db / (x * x * u) - db * b / (x * x * u * u);
    ratio = w_ratio(regular, x);
  }
  // d(d-1) K^-2 K'^2 + d K^-1 K'' == (K^d)'' / K^d == g2 + g1^2
  return x * ratio * (g2 + g1 * g1);
}

}  // namespace detail

double delta_fn(const CdParams& params, double y) {
  return detail::delta_regular(params.regularized(), y);
}

double h_cap(const CdParams& params, double x) {
  return detail::h_cap_regular(params.regularized(), x);
}

std::vector<ConvexityViolation> convexity_scan(const CdParams& params, double y_min,
                                               double y_step) {
  if (!(y_step > 0.0) || !(y_min < 0.0)) throw DomainError("convexity_scan: bad sampling range");
  const CdParams reg = params.regularized();
  constexpr double fd = 1e-5;
  const auto k_max = static_cast<long>(std::floor(-y_min / y_step + 1e-9));
  std::vector<ConvexityViolation> out;
  for (long k = 1; k <= k_max; ++k) {
    const double y = -static_cast<double>(k) * y_step;
    const double delta = detail::delta_regular(reg, y);
    const double hi = std::min(y + fd, 0.0);
    const double slope =
        (detail::delta_regular(reg, hi) - detail::delta_regular(reg, y - fd)) / (hi - y + fd);
    if (!(delta >= 0.0) || !(slope >= 0.0)) out.push_back({y, delta, slope});
  }
  return out;
}

double entropy_cd(const CdParams& params, std::span<const double> p) {
  const double c = params.c();
  const double d = params.d();
  const double denom = 1.0 - c + c * d;
  if (!(denom > 0.0)) throw InvalidRegion("entropy_cd: 1 - c + c d vanishes at " + describe(c, d));
  if (!(d > -1.0)) throw DomainError("entropy_cd: requires d > -1");
  if (p.empty()) throw DomainError("entropy_cd: empty distribution");
  double total = 0.0;
  double sum = 0.0;
  for (double pi : p) {
    if (!(pi > 0.0)) throw DomainError("entropy_cd: probabilities must be strictly positive");
    total += pi;
    sum += upper_incomplete_gamma(d + 1.0, 1.0 - c * std::log(pi));
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("entropy_cd: probabilities must sum to 1");
  const double s = (std::numbers::e * sum) / denom - c / denom;
  if (!std::isfinite(s)) throw ComputationError("entropy_cd: value overflows for " + describe(c, d));
  return s;
}

}  // namespace cdig
