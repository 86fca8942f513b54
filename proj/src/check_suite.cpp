#include "cdig/check_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cdig/bounds.hpp"
#include "cdig/curvature.hpp"
#include "cdig/error.hpp"
#include "cdig/format.hpp"

namespace cdig {

namespace {

using Check = std::function<CheckResult(const CheckOptions&)>;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string cd_text(double c, double d) { return "(" + format_g9(c) + ", " + format_g9(d) + ")"; }

// Invariant sweeps use class 4 with d in (0, 10]: beyond d ~ 400 the
// generalized logarithm of x = 0.01 exceeds the double range.
constexpr double kSweepDMax = 10.0;

std::vector<std::pair<double, double>> all_points(bool coarse, double d_limit = 1e300) {
  std::vector<std::pair<double, double>> out;
  SweepGrid grid;
  grid.d_max = kSweepDMax;
  for (int id = 1; id <= 5; ++id) {
    const ClassSpec cls = class_spec(id, grid);
    for (auto pt : coarse ? cls.coarse_points(d_limit) : cls.cd_points()) out.push_back(pt);
  }
  return out;
}

CheckResult check_roundtrip(const CheckOptions& o) {
  double worst = 0.0;
  std::string where;
  std::size_t nonreal = 0;
  std::size_t nonmonotone = 0;
  for (auto [c, d] : all_points(false)) {
    const CdParams params = make_params(c, d, o.cont);
    for (int k = 1; k <= 99; ++k) {
      const double x = k * 0.01;
      const double y = gen_log(params, x);
      if (!std::isfinite(y) || y > 0.0) {
        ++nonreal;
        continue;
      }
      const double err = std::abs(gen_exp(params, y) - x);
      if (!(err <= worst)) {
        worst = err;
        where = cd_text(c, d) + " x=" + format_g9(x);
      }
    }
  }
  for (int id = 1; id <= 5; ++id) {
    auto [c, d] = class_spec(id).representative();
    const CdParams params = make_params(c, d, o.cont);
    double prev = gen_log(params, 1e-3);
    for (int k = 2; k <= 1000; ++k) {
      const double cur = gen_log(params, k * 1e-3);
      if (!(cur > prev)) ++nonmonotone;
      prev = cur;
    }
  }
  std::ostringstream os;
  os << "max |E(Lambda(x)) - x| = " << format_g9(worst) << " at " << where
     << "; non-real " << nonreal << "; non-monotone " << nonmonotone;
  return {"roundtrip", worst <= 1e-9 && nonreal == 0 && nonmonotone == 0, os.str()};
}

CheckResult check_fisher(const CheckOptions& o) {
  const CdParams params = make_params(1.0, 1.0, o.cont);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    // chart coordinates on the 0.05 lattice, p_0 > 0
    std::vector<int> k(n, 1);
    while (true) {
      int sum = 0;
      for (int v : k) sum += v;
      if (sum < 20) {
        std::vector<double> chart(n);
        for (int i = 0; i < n; ++i) chart[i] = k[i] * 0.05;
        const Simplex p = Simplex::from_chart(chart);
        const Eigen::MatrixXd g = metric(params, p).matrix();
        const Eigen::MatrixXd f = fisher_metric(p).matrix();
        worst = std::max(worst, ((g - f).cwiseAbs().array() / f.cwiseAbs().array()).maxCoeff());
      }
      int i = 0;
      while (i < n && ++k[i] >= 20) k[i++] = 1;
      if (i == n) break;
    }
  }
  return {"fisher", worst <= 1e-3,
          "max relative metric error vs Fisher at (1,1) = " + format_g9(worst)};
}

CheckResult check_flatness(const CheckOptions& o) {
  std::mt19937_64 rng(mix_seed(o.seed, 101));
  double worst = 0.0;
  double gap = 0.0;
  std::string where;
  for (auto [c, d] : all_points(true, 10.0)) {
    const CdParams params = make_params(c, d, o.cont);
    std::vector<Simplex> pts{Simplex::uniform(2)};
    while (pts.size() < 21) pts.push_back(sample_interior(2, 0.02, rng));
    for (const Simplex& p : pts) {
      const ConnectionEstimate est = divergence_connection(params, p);
      gap = std::max(gap, est.halving_gap);
      if (est.coefficients.max_abs() > worst) {
        worst = est.coefficients.max_abs();
        where = cd_text(c, d);
      }
    }
  }
  return {"flatness", worst <= 5e-4,
          "max |Gamma| = " + format_g9(worst) + " at " + where + "; step-halving gap " +
              format_g9(gap)};
}

CheckResult check_convexity(const CheckOptions& o) {
  std::size_t violations = 0;
  std::string first;
  for (auto [c, d] : all_points(false)) {
    const auto v = convexity_scan(make_params(c, d, o.cont));
    if (!v.empty() && first.empty()) first = " first at " + cd_text(c, d) + " y=" + format_g9(v[0].y);
    violations += v.size();
  }
  return {"convexity", violations == 0,
          std::to_string(violations) + " samples with Delta < 0 or Delta' < 0" + first};
}

CheckResult check_mc(const CheckOptions& o) {
  long trials = 0, bound = 0, regular = 0, classical = 0;
  bool exact_ok = true;
  double worst_z = std::numeric_limits<double>::infinity();
  std::uint64_t cell = 0;
  for (auto [c, d] : all_points(true)) {
    const CdParams params = make_params(c, d, o.cont);
    for (int k = 1; k <= 9; ++k) {
      const Simplex p = Simplex::from_chart(std::vector<double>{k * 0.1});
      const CramerRaoRecord rec = cramer_rao_mc_check(params, p, 100, 10000, mix_seed(o.seed, cell++));
      trials += rec.trials;
      bound += rec.bound_pass;
      regular += rec.regularity_pass;
      classical += rec.classical_pass;
      exact_ok = exact_ok && rec.classical_exact_ok();
      worst_z = std::min(worst_z, rec.worst_z);
    }
  }
  const double rate = static_cast<double>(bound) / trials;
  const double reg_rate = static_cast<double>(regular) / trials;
  const double cl_rate = static_cast<double>(classical) / trials;
  std::ostringstream os;
  os << "bound " << bound << "/" << trials << ", regularity " << format_g9(reg_rate)
     << ", classical " << format_g9(cl_rate) << (exact_ok ? " (exact ratio 1)" : " (exact ratio off)")
     << ", min z " << format_g9(worst_z);
  return {"mc", rate >= 0.99 && reg_rate >= 0.99 && cl_rate >= 0.99 && exact_ok, os.str()};
}

CheckResult check_divergence(const CheckOptions& o) {
  std::mt19937_64 rng(mix_seed(o.seed, 202));
  const auto points = all_points(true);
  std::size_t self_nonzero = 0, negative = 0;
  for (auto [c, d] : points) {
    const CdParams params = make_params(c, d, o.cont);
    const Simplex p = sample_interior(2, 0.1, rng);
    if (divergence(params, p, p) != 0.0) ++self_nonzero;
    const std::vector<double> base = p.chart();
    for (int t = 0; t < 100; ++t) {
      const double phi = 2.0 * 3.141592653589793 * unit(rng);
      const double eps = 0.05 * (1.0 - unit(rng));
      const std::vector<double> q{base[0] + eps * std::cos(phi), base[1] + eps * std::sin(phi)};
      if (!(divergence(params, p, Simplex::from_chart(q)) >= 0.0)) ++negative;
    }
  }
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    auto [c, d] = points[static_cast<std::size_t>(unit(rng) * points.size())];
    const CdParams params = make_params(c, d, o.cont);
    const Simplex p = sample_interior(1 + s % 3, 0.05, rng);
    const Eigen::MatrixXd g = metric(params, p).matrix();
    const Eigen::MatrixXd fd = divergence_hessian(params, p);
    worst = std::max(worst, (g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "D(p,p) != 0: " << self_nonzero << "; negative D: " << negative
     << "; metric vs Hessian " << format_g9(worst);
  return {"divergence", self_nonzero == 0 && negative == 0 && worst <= 1e-5, os.str()};
}

CheckResult check_curvature(const CheckOptions& o) {
  const MetricField fisher = fisher_metric_field();
  double fisher_err = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const double r = scalar_curvature(fisher, Simplex::uniform(n), default_curvature_step(n));
    fisher_err = std::max(fisher_err, std::abs(r / (n * (n - 1) / 4.0) - 1.0));
  }
  double class1 = 0.0;
  bool halving = true;
  for (const auto& rep : curvature_ratio_scan(make_params(1.0, 1.0, o.cont), 8)) {
    class1 = std::max(class1, std::abs(rep.ratio - 1.0));
    halving = halving && rep.step_ok;
  }
  std::ostringstream os;
  os << "Fisher oracle rel err " << format_g9(fisher_err) << "; class-1 ratio err "
     << format_g9(class1) << (halving ? "; step halving ok" : "; step halving FAILED");
  return {"curvature", fisher_err <= 1e-3 && class1 <= 1e-3 && halving, os.str()};
}

// Quantities on c = 1 are evaluated at c = 1 - eps_c; dividing the offsets by
// ten must not move them by more than 1e-4 (relative).
CheckResult check_continuation(const CheckOptions& o) {
  double worst = 0.0;
  std::string where;
  const Simplex p = Simplex::from_probabilities({0.2, 0.3, 0.5});
  for (auto [c, d] : {std::pair{1.0, 1.0}, {1.0, 0.0}, {1.0, 0.5}, {1.0, 2.5}, {1.0, 10.0}}) {
    const CdParams params = make_params(c, d, o.cont);
    auto rel = [&](auto&& f) {
      const double v = f(params);
      return continuation_spread(params, f) / std::max(std::abs(v), 1e-300);
    };
    const double spread = std::max({
        rel([](const CdParams& q) { return delta_fn(q, -1.0); }),
        rel([](const CdParams& q) { return f_bound(q, 0.3); }),
        rel([&](const CdParams& q) { return metric(q, p)(0, 1); }),
        rel([&](const CdParams& q) { return h_norm(q, p); }),
    });
    if (spread > worst) {
      worst = spread;
      where = cd_text(c, d);
    }
  }
  return {"continuation", worst <= 1e-4,
          "max relative change under eps/10 = " + format_g9(worst) + " at " + where};
}

const std::vector<std::pair<std::string, Check>>& registry() {
  static const std::vector<std::pair<std::string, Check>> checks{
      {"roundtrip", check_roundtrip},   {"fisher", check_fisher},
      {"continuation", check_continuation},
      {"flatness", check_flatness},     {"convexity", check_convexity},
      {"mc", check_mc},                 {"divergence", check_divergence},
      {"curvature", check_curvature},
  };
  return checks;
}

}  // namespace

Simplex sample_interior(int n, double p_min, std::mt19937_64& rng) {
  if (!(p_min * (n + 1) < 1.0)) throw DomainError("sample_interior: p_min too large");
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  while (true) {
    double total = 0.0;
    for (double& v : e) {
      v = -std::log(1.0 - unit(rng));
      total += v;
    }
    std::vector<double> chart(n);
    double smallest = 1.0;
    double rest = 1.0;
    for (int i = 0; i < n; ++i) {
      chart[i] = e[i + 1] / total;
      smallest = std::min(smallest, chart[i]);
      rest -= chart[i];
    }
    if (std::min(smallest, rest) >= p_min) return Simplex::from_chart(chart);
  }
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<CheckResult> run_checks(const CheckOptions& opts, const std::string& only) {
  if (!only.empty() && std::find(check_names().begin(), check_names().end(), only) == check_names().end()) {
    throw InvalidRegion("unknown check '" + only + "'");
  }
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : registry()) {
    if (!only.empty() && name != only) continue;
    try {
      out.push_back(fn(opts));
    } catch (const Error& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

}  // namespace cdig
