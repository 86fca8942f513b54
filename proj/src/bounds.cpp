#include "cdig/bounds.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "cdig/error.hpp"
#include "cdig/format.hpp"

namespace cdig {

namespace {

constexpr std::size_t kMaxCells = 50'000'000;

std::size_t open_unit_count(double step) {
  return static_cast<std::size_t>(std::ceil(1.0 / step - 1e-9)) - 1;
}

std::size_t d_count(const SweepGrid& g) {
  return static_cast<std::size_t>(std::floor(g.d_max / g.d_step + 1e-9));
}

std::vector<double> open_unit_values(double step) {
  const std::size_t k_max = open_unit_count(step);
  std::vector<double> v(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) v[k - 1] = static_cast<double>(k) * step;
  return v;
}

std::string cell_text(double c, double d, double p1) {
  return "(c, d, p1) = (" + format_g9(c) + ", " + format_g9(d) + ", " + format_g9(p1) + ")";
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t count_ones(std::mt19937_64& rng, double prob, int samples) {
  std::size_t k = 0;
  for (int s = 0; s < samples; ++s) k += unit(rng) < prob;
  return k;
}

// Standard error of the sample variance of a two-point sample with mean m.
double variance_se(double m, int samples) {
  const double n = samples;
  const double m2 = m * (1.0 - m);
  const double m4 = m2 * ((1.0 - m) * (1.0 - m) * (1.0 - m) + m * m * m);
  const double var = m4 / n - m2 * m2 * (n - 3.0) / (n * (n - 1.0));
  return std::sqrt(std::max(var, 0.0));
}

}  // namespace

void validate_grid(const SweepGrid& g) {
  auto in_half = [](double s) { return std::isfinite(s) && s > 0.0 && s <= 0.5; };
  if (!in_half(g.p_step)) throw InvalidRegion("p-step must lie in (0, 0.5]");
  if (!in_half(g.c_step)) throw InvalidRegion("c-step must lie in (0, 0.5]");
  if (!(std::isfinite(g.d_step) && g.d_step > 0.0)) throw InvalidRegion("d-step must be positive");
  if (!(std::isfinite(g.d_max) && g.d_max >= g.d_step)) {
    throw InvalidRegion("d-max must be finite and >= d-step");
  }
  const double cells = static_cast<double>(open_unit_count(g.p_step)) *
                       std::max<double>(open_unit_count(g.c_step), d_count(g));
  if (cells > static_cast<double>(kMaxCells)) throw InvalidRegion("grid has too many cells");
}

std::string ClassSpec::c_spec() const { return c_fixed ? format_g9(*c_fixed) : "0<c<1"; }
std::string ClassSpec::d_spec() const { return d_fixed ? format_g9(*d_fixed) : "d>0"; }

std::vector<double> ClassSpec::p1_values() const { return open_unit_values(grid.p_step); }

std::vector<std::pair<double, double>> ClassSpec::cd_points() const {
  std::vector<std::pair<double, double>> out;
  if (c_fixed && d_fixed) {
    out.emplace_back(*c_fixed, *d_fixed);
  } else if (d_fixed) {
    for (double c : open_unit_values(grid.c_step)) out.emplace_back(c, *d_fixed);
  } else {
    const double c = c_fixed.value_or(1.0);
    const std::size_t k_max = d_count(grid);
    for (std::size_t k = 1; k <= k_max; ++k) out.emplace_back(c, static_cast<double>(k) * grid.d_step);
  }
  return out;
}

std::vector<std::pair<double, double>> ClassSpec::coarse_points(double d_limit) const {
  std::vector<std::pair<double, double>> out;
  if (c_fixed && d_fixed) {
    out.emplace_back(*c_fixed, *d_fixed);
  } else if (d_fixed) {
    for (int k = 1; k <= 9; ++k) out.emplace_back(k * 0.1, *d_fixed);
  } else {
    for (double d : {0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 50.0, 100.0}) {
      if (d <= d_limit) out.emplace_back(c_fixed.value_or(1.0), d);
    }
  }
  return out;
}

std::pair<double, double> ClassSpec::representative() const {
  return {c_fixed.value_or(0.5), d_fixed.value_or(2.5)};
}

ClassSpec class_spec(int id, SweepGrid grid) {
  ClassSpec s;
  s.id = id;
  s.grid = grid;
  switch (id) {
    case 1: s.c_fixed = 1.0; s.d_fixed = 1.0; break;
    case 2: s.d_fixed = 0.0; break;
    case 3: s.c_fixed = 1.0; s.d_fixed = 0.0; break;
    case 4: s.c_fixed = 1.0; break;
    case 5: s.d_fixed = 1.0; break;
    default: throw InvalidRegion("class id must be 1..5, got " + std::to_string(id));
  }
  return s;
}

ClassSpec single_point(double c, double d, SweepGrid grid) {
  make_params(c, d);  // validates the region
  ClassSpec s;
  s.c_fixed = c;
  s.d_fixed = d;
  s.grid = grid;
  return s;
}

double f_bound(const CdParams& params, double p1) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw DomainError("f_bound: p1 must lie in (0, 1)");
  const CdParams reg = params.regularized();
  const double h0 = detail::h_cap_regular(reg, 1.0 - p1);
  const double h1 = detail::h_cap_regular(reg, p1);
  const double s = h0 + h1;
  const double f = h0 * h1 / (s * s);
  if (!std::isfinite(f)) throw ComputationError("f_bound: H vanishes at p1 = " + format_g9(p1));
  return f;
}

double f_fisher(double p1) { return (1.0 - p1) * p1; }

double i_diff(double c, double d, double p1, Continuation cont) {
  return f_bound(make_params(c, d, cont), p1) - f_fisher(p1);
}

SweepReport i_mean(const ClassSpec& cls, Continuation cont) {
  validate_grid(cls.grid);
  SweepReport rep;
  rep.class_id = cls.id;
  rep.grid = "p_step=" + format_g9(cls.grid.p_step);
  if (!cls.c_fixed) rep.grid += " c_step=" + format_g9(cls.grid.c_step);
  if (!cls.d_fixed) {
    rep.grid += " d_step=" + format_g9(cls.grid.d_step) + " d_max=" + format_g9(cls.grid.d_max);
  }
  const std::vector<double> p1s = cls.p1_values();
  const auto points = cls.cd_points();
  rep.cells.reserve(points.size() * p1s.size());
  double sum = 0.0;
  for (auto [c, d] : points) {
    std::optional<CdParams> params;
    for (double p1 : p1s) {
      try {
        if (!params) params = make_params(c, d, cont);
        const double f = f_bound(*params, p1);
        const double ff = f_fisher(p1);
        rep.cells.push_back({c, d, p1, f, ff, f - ff});
        sum += f - ff;
      } catch (const Error& e) {
        throw ComputationError(std::string("bound sweep failed at ") + cell_text(c, d, p1) + ": " +
                               e.what());
      }
    }
  }
  if (rep.cells.empty()) throw ComputationError("bound sweep has no cells");
  rep.i_mean = sum / static_cast<double>(rep.cells.size());
  return rep;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CramerRaoRecord cramer_rao_mc_check(const CdParams& params, const Simplex& p, int trials,
                                    int samples, std::uint64_t seed) {
  if (p.dim() != 1) throw DomainError("Cramer-Rao check is defined for n = 1");
  if (trials < 100 || samples < 1000) {
    throw DomainError("Cramer-Rao check needs trials >= 100 and samples >= 1000");
  }
  CramerRaoRecord rec;
  rec.p1 = p[1];
  rec.trials = trials;
  rec.samples = samples;

  const EscortDistribution esc = escort(params, p);
  const double big_p0 = esc.P[0];
  const double big_p1 = esc.P[1];
  rec.escort_p1 = big_p1;
  rec.N = esc.N;

  // E_p[indicator] = p_1(theta) is the gradient of the scale function, so
  // d2F = d p_1 / d theta. The forward map p -> theta is the well-conditioned
  // direction (theta can exceed 1e30 at large d), so differentiate that one.
  const double h = 1e-5 * std::min(p[0], p[1]);
  const double up = to_natural(params, Simplex::from_chart(std::vector<double>{p[1] + h}, 0.0)).theta[0];
  const double dn = to_natural(params, Simplex::from_chart(std::vector<double>{p[1] - h}, 0.0)).theta[0];
  rec.d2F = 2.0 * h / (up - dn);
  rec.g_theta = metric(params, p)(0, 0) * rec.d2F * rec.d2F;
  rec.bound = 1.0 / (rec.N * rec.g_theta);
  rec.exact_lhs = big_p0 * big_p1 / (rec.d2F * rec.d2F);

  const double g_fisher = 1.0 / p[0] + 1.0 / p[1];
  rec.classical_exact_ratio = p[0] * p[1] * g_fisher;

  std::mt19937_64 rng(seed);
  const double n = samples;
  const double bound_var = rec.bound * rec.d2F * rec.d2F;  // bound in variance units
  const double jump = rec.d2F * (1.0 / big_p1 + 1.0 / big_p0);
  rec.worst_z = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const double m = static_cast<double>(count_ones(rng, big_p1, samples)) / n;
    const double m2 = m * (1.0 - m);
    if (!(m2 > 0.0)) throw ComputationError("degenerate sample: empirical variance vanished");
    const double s2 = m2 * n / (n - 1.0);
    const double se = variance_se(m, samples);
    const double gap = s2 - bound_var;
    const double z = se > 0.0 ? gap / se : (gap >= 0.0 ? 0.0 : -std::numeric_limits<double>::infinity());
    rec.worst_z = std::min(rec.worst_z, z);
    if (gap >= -3.0 * se) ++rec.bound_pass;

    // (1/P) dp/dtheta takes d2F / P1 on outcome 1 and -d2F / P0 on outcome 0.
    const double reg_mean = m * rec.d2F / big_p1 - (1.0 - m) * rec.d2F / big_p0;
    const double reg_se = std::abs(jump) * std::sqrt(s2 / n);
    if (std::abs(reg_mean) <= 3.0 * reg_se) ++rec.regularity_pass;

    const double mc = static_cast<double>(count_ones(rng, p[1], samples)) / n;
    const double ratio = mc * (1.0 - mc) * n / (n - 1.0) * g_fisher;
    const double ratio_se = variance_se(mc, samples) * g_fisher;
    if (ratio >= 1.0 - 3.0 * ratio_se && ratio <= 1.05) ++rec.classical_pass;
  }
  return rec;
}

}  // namespace cdig
