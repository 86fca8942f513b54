#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdig/manifold.hpp"

namespace cdig {

/// Averaging grids. Values are k * step (never accumulated); open interval
/// endpoints are excluded, d runs over step, 2 step, ..., d_max inclusive.
struct SweepGrid {
  double p_step = 0.01;
  double c_step = 0.01;
  double d_max = 1000.0;
  double d_step = 0.1;
};

/// Throws InvalidRegion unless every step is in (0, 0.5] (d_step: > 0) and
/// d_max >= d_step.
void validate_grid(const SweepGrid& grid);

/// One of the five complexity classes, or (id 0) a single explicit (c, d).
struct ClassSpec {
  int id = 0;
  std::optional<double> c_fixed;  ///< empty: c over (0, 1)
  std::optional<double> d_fixed;  ///< empty: d over (0, d_max]
  SweepGrid grid;

  /// Spec strings as printed in tables, e.g. "1", "0<c<1", "d>0".
  std::string c_spec() const;
  std::string d_spec() const;

  std::vector<double> p1_values() const;
  std::vector<std::pair<double, double>> cd_points() const;
  /// A handful of points per class for expensive checks, d <= d_limit.
  std::vector<std::pair<double, double>> coarse_points(
      double d_limit = std::numeric_limits<double>::infinity()) const;
  /// One (c, d) standing in for the class in single-point scans.
  std::pair<double, double> representative() const;
};

/// Classes 1..5: (1,1); (0<c<1, 0); (1,0); (1, d>0); (0<c<1, 1).
ClassSpec class_spec(int id, SweepGrid grid = {});
ClassSpec single_point(double c, double d, SweepGrid grid = {});

/// 1 / (N(p) g(p)) for n = 1, i.e. H0 H1 / (H0 + H1)^2 with p_0 = 1 - p1.
double f_bound(const CdParams& params, double p1);

/// p0 p1.
double f_fisher(double p1);

/// f_bound - f_fisher with the Hanel-Thurner r.
double i_diff(double c, double d, double p1, Continuation cont = {});

struct SweepCell {
  double c, d, p1, f, f_fisher, i;
};

struct SweepReport {
  int class_id = 0;
  std::string grid;
  double i_mean = 0.0;
  std::vector<SweepCell> cells;  ///< (c, d)-major, p1 fastest
};

/// Mean of i_diff over the class grid. Throws ComputationError naming the
/// cell on failure.
SweepReport i_mean(const ClassSpec& cls, Continuation cont = {});

struct CramerRaoRecord {
  double p1 = 0.0;
  double escort_p1 = 0.0;  ///< P_1
  double N = 0.0;
  double d2F = 0.0;        ///< d p_1 / d theta
  double g_theta = 0.0;    ///< metric in the theta chart
  double bound = 0.0;      ///< 1 / (N g_theta)
  double exact_lhs = 0.0;  ///< P_0 P_1 / d2F^2
  int trials = 0;
  int samples = 0;
  int bound_pass = 0;       ///< trials with lhs >= bound - 3 SE
  int regularity_pass = 0;  ///< trials with |mean| <= 3 SE
  int classical_pass = 0;   ///< trials with Fisher ratio in [1 - 3 SE, 1.05]
  double classical_exact_ratio = 0.0;  ///< binomial variance times Fisher metric
  double worst_z = 0.0;     ///< min over trials of (lhs - bound) / SE

  double pass_rate() const { return trials ? static_cast<double>(bound_pass) / trials : 0.0; }
  bool classical_exact_ok() const {
    return classical_exact_ratio >= 1.0 - 1e-12 && classical_exact_ratio <= 1.05;
  }
};

/// Monte-Carlo check of the escort Cramer-Rao inequality for n = 1 with the
/// indicator-of-outcome-1 estimator, plus the classical bound for the same
/// Bernoulli family. Needs trials >= 100 and samples >= 1000.
CramerRaoRecord cramer_rao_mc_check(const CdParams& params, const Simplex& p, int trials,
                                    int samples, std::uint64_t seed);

/// splitmix64 of seed ^ golden * (index + 1); stable across platforms.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace cdig
