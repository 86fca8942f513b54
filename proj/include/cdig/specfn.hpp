#pragma once

// Real special functions used throughout the library: the two real branches
// of the Lambert W function and the (non-regularized) upper incomplete gamma
// function. All functions are pure and thread-safe.

namespace cdig {

/// Real branch of the Lambert W function.
enum class BranchId : int { principal = 0, lower = -1 };

/// Maps an integer branch index onto BranchId; only 0 and -1 are accepted.
BranchId branch_from_int(int k);

/// W_k(x): the solution w of w * exp(w) = x on the selected real branch.
///
/// The principal branch is defined on [-1/e, inf) and returns w >= -1; the
/// lower branch is defined on [-1/e, 0) and returns w <= -1. Arguments that
/// undershoot -1/e by a few ulps are clamped onto the branch point.
/// Throws BranchDomainError outside the branch domain.
double lambert_w(BranchId branch, double x);

/// W_k(sign * exp(log_abs_x)) without forming the argument.
///
/// Needed where the argument overflows (principal branch, log_abs_x > 709)
/// or underflows (lower branch, log_abs_x < -708).
double lambert_w_log(BranchId branch, double log_abs_x, int sign);

/// Gamma(a, x) = integral_x^inf t^(a-1) e^(-t) dt for a > 0, x >= 0.
///
/// Continued fraction for x > a + 1, complement of the lower series
/// otherwise. Returns +inf when the value exceeds the double range.
double upper_incomplete_gamma(double a, double x);

}  // namespace cdig
