#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cdig/specfn.hpp"

namespace cdig {

/// Offsets used to evaluate quantities that are singular on c = 1 (and at the
/// (c, d) = (1, 0) corner, where r itself diverges).
struct Continuation {
  double eps_c = 1e-6;
  double eps_d = 1e-6;
};

/// The (c, d, r) triple of the two-parameter entropy family.
///
/// Holds the nominal values as requested plus the derived constant
/// B = a e^a with a = (1-c) r / (1 - (1-c) r), and the Lambert branch
/// (0 for d >= 0, -1 for d < 0). Immutable once built.
///
/// Geometric quantities (Delta, H, h, divergence, metric, escort) carry a
/// 1/(1-c) factor and are evaluated at regularized(): c is moved to
/// 1 - eps_c when |1 - c| < eps_c, and at the corner d is moved to eps_d.
/// The generalized logarithm and exponential have exact forms on c = 1 and
/// on d = 0 and use the nominal point, except at the corner.
class CdParams {
 public:
  /// Hanel-Thurner choice r = 1 / (1 - c + c d). Requires c in (0, 1] and
  /// 1 - c + c d > 0, except for the corner (1, 0) which is admitted and
  /// evaluated by continuation.
  static CdParams make(double c, double d, Continuation cont = {});

  /// Explicit r, validated against the sign conditions
  /// d > 0: r < 1/(1-c); d = 0: r = 1/(1-c); d < 0: r > 1/(1-c).
  /// For c = 1 only d > 0 is admitted.
  static CdParams with_r(double c, double d, double r, Continuation cont = {});

  double c() const { return c_; }
  double d() const { return d_; }
  double r() const { return r_; }
  /// Nominal B; 0 on c = 1, +inf on d = 0, NaN at the corner (no nominal r).
  double B() const { return b_; }
  BranchId branch() const { return branch_; }
  double eps_c() const { return cont_.eps_c; }
  double eps_d() const { return cont_.eps_d; }
  const Continuation& continuation() const { return cont_; }

  bool hanel_thurner() const { return hanel_thurner_; }
  bool tsallis_line() const { return d_ == 0.0; }
  bool on_c_line() const { return c_ == 1.0; }
  /// (c, d) lies within (eps_c, eps_d) of the (1, 0) corner.
  bool on_corner() const;
  /// Geometric quantities are evaluated away from the nominal point.
  bool needs_continuation() const;

  /// The point where geometric quantities are evaluated. Returns *this when
  /// no continuation is needed.
  CdParams regularized() const;
  /// Same nominal (c, d, r) with different continuation offsets.
  CdParams with_continuation(Continuation cont) const;

  /// (1 - (1-c) r) / (r d); 0 on the d = 0 line.
  double bracket() const { return bracket_; }
  /// W_k(B), computed with the same routine used for W_k(B K(x)).
  double w_at_b() const { return w_at_b_; }
  double log_abs_b() const { return log_abs_b_; }
  int b_sign() const { return b_sign_; }

 private:
  CdParams() = default;
  void derive();

  double c_ = 1.0;
  double d_ = 1.0;
  double r_ = 1.0;
  double b_ = 0.0;
  BranchId branch_ = BranchId::principal;
  Continuation cont_{};
  bool hanel_thurner_ = true;
  bool regular_ = false;
  double bracket_ = 0.0;
  double w_at_b_ = 0.0;
  double log_abs_b_ = 0.0;
  int b_sign_ = 0;
};

/// CdParams::make; the Hanel-Thurner parameter choice.
inline CdParams make_params(double c, double d, Continuation cont = {}) {
  return CdParams::make(c, d, cont);
}

/// Generalized logarithm Lambda(x) = r - r x^(c-1) [1 - bracket ln x]^d on (0, 1].
double gen_log(const CdParams& params, double x);

/// d Lambda / dx = -r K^d(x) (ln K^d)'(x).
double gen_log_derivative(const CdParams& params, double x);

/// Generalized exponential E(y), the inverse of gen_log, for y <= 0.
double gen_exp(const CdParams& params, double y);

/// ln K^d(x) = (c-1) ln x + d ln(1 - bracket ln x); so gen_log = -r expm1(.).
double log_kernel(const CdParams& params, double x);

struct KValues {
  double k;   ///< K(x)
  double k1;  ///< K'(x)
  double k2;  ///< K''(x)
};

/// K(x) = x^((c-1)/d) (1 - bracket ln x) and its first two derivatives.
/// Requires d != 0.
KValues k_fn(const CdParams& params, double x);

/// W(B K(x)) / (1 + W(B K(x))) at a regular point; 1 on the d = 0 line.
double w_ratio(const CdParams& regular, double x);

/// Delta(y), y <= 0; psi is convex where Delta >= 0 and Delta' >= 0.
double delta_fn(const CdParams& params, double y);

struct ConvexityViolation {
  double y;
  double delta;
  double slope;  ///< central difference of Delta, step 1e-5
};

/// Samples Delta and Delta' at y = -k y_step, k = 1..floor(-y_min / y_step),
/// and returns the samples where either is negative.
std::vector<ConvexityViolation> convexity_scan(const CdParams& params, double y_min = -3.0,
                                               double y_step = 0.01);

/// H(x) = x W/(1+W) (d(d-1) K^-2 K'^2 + d K^-1 K'').
double h_cap(const CdParams& params, double x);

/// The (c, d)-entropy functional, evaluated from the incomplete gamma form.
double entropy_cd(const CdParams& params, std::span<const double> p);

namespace detail {
// Evaluate at an already regular point (no continuation lookup).
double delta_regular(const CdParams& regular, double y);
double h_cap_regular(const CdParams& regular, double x);
}  // namespace detail

/// |f(params) - f(params with both continuation offsets divided by 10)|.
template <class F>
double continuation_spread(const CdParams& params, F&& f) {
  const Continuation fine{params.eps_c() / 10.0, params.eps_d() / 10.0};
  return std::abs(f(params) - f(params.with_continuation(fine)));
}

}  // namespace cdig
