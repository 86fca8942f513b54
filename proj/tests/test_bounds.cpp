#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cdig/bounds.hpp"
#include "cdig/error.hpp"
#include "oracle.hpp"

using namespace cdig;

TEST_CASE("f_fisher") {
  CHECK(f_fisher(0.5) == 0.25);
  CHECK(f_fisher(0.25) == 0.1875);
  CHECK(f_fisher(0.01) == doctest::Approx(0.0099).epsilon(1e-15));
}

TEST_CASE("f_bound: Fisher limit and symmetry") {
  CHECK(f_bound(make_params(1.0, 1.0), 0.5) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(f_bound(make_params(1.0, 1.0), 0.5) <= 0.25 + 1e-12);
  double worst = 0.0;
  for (int k = 1; k <= 99; ++k) {
    worst = std::max(worst, std::abs(f_bound(make_params(1.0, 1.0), k * 0.01) - f_fisher(k * 0.01)));
  }
  CHECK(worst <= 1e-3);
  for (auto [c, d] : {std::pair{0.5, 0.0}, {1.0, 0.0}, {1.0, 2.5}, {0.5, 1.0}, {0.2, 7.0}}) {
    for (double p1 : {0.01, 0.13, 0.4}) {
      CHECK(std::abs(i_diff(c, d, p1) - i_diff(c, d, 1.0 - p1)) <= 1e-10);
    }
  }
}

TEST_CASE("f_bound on the Tsallis line equals f_fisher") {
  // H = (1-c)(2-c)/x there, so H0 H1 / (H0 + H1)^2 = p0 p1.
  for (double c : {0.2, 0.5, 0.8}) {
    for (double p1 : {0.1, 0.3}) {
      CHECK(f_bound(make_params(c, 0.0), p1) == doctest::Approx(f_fisher(p1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("f_bound from the literal H") {
  for (auto [c, d] : {std::pair{0.5, 1.0}, {0.3, 2.0}, {0.8, 5.0}}) {
    for (double p1 : {0.05, 0.3, 0.5}) {
      const double h0 = oracle::h_cap(c, d, 1.0 - p1), h1 = oracle::h_cap(c, d, p1);
      CHECK(f_bound(make_params(c, d), p1) ==
            doctest::Approx(h0 * h1 / ((h0 + h1) * (h0 + h1))).epsilon(1e-10));
    }
  }
  CHECK(f_bound(make_params(0.5, 1.0), 0.3) == doctest::Approx(0.211822).epsilon(1e-5));
}

TEST_CASE("class catalog") {
  CHECK(class_spec(1).c_spec() == "1");
  CHECK(class_spec(2).c_spec() == "0<c<1");
  CHECK(class_spec(2).d_spec() == "0");
  CHECK(class_spec(4).d_spec() == "d>0");
  CHECK(class_spec(1).p1_values().size() == 99);
  CHECK(class_spec(2).cd_points().size() == 99);
  CHECK(class_spec(4).cd_points().size() == 10000);
  SweepGrid g;
  g.d_max = 10.0;
  CHECK(class_spec(4, g).cd_points().back().second == doctest::Approx(10.0));
  CHECK(class_spec(4, g).coarse_points(10.0).size() == 6);
  CHECK_THROWS_AS(class_spec(6), InvalidRegion);
  SweepGrid bad;
  bad.p_step = 0.0;
  CHECK_THROWS_AS(validate_grid(bad), InvalidRegion);
  bad = SweepGrid{};
  bad.d_max = 0.01;
  CHECK_THROWS_AS(validate_grid(bad), InvalidRegion);
}

TEST_CASE("i_mean is the mean of its cells") {
  SweepGrid g;
  g.p_step = 0.05;
  g.c_step = 0.1;
  g.d_max = 5.0;
  g.d_step = 0.5;
  for (int id = 1; id <= 5; ++id) {
    const SweepReport rep = i_mean(class_spec(id, g));
    double sum = 0.0;
    for (const auto& cell : rep.cells) sum += cell.i;
    CHECK(rep.i_mean == doctest::Approx(sum / rep.cells.size()).epsilon(1e-12));
    CHECK(rep.class_id == id);
  }
}

TEST_CASE("i_mean fixed classes") {
  CHECK(std::abs(i_mean(class_spec(1)).i_mean) <= 1e-4);
  CHECK(std::abs(i_mean(class_spec(3)).i_mean + 0.0184) <= 3e-3);
}

TEST_CASE("Cramer-Rao Monte Carlo: classical case") {
  const CramerRaoRecord rec =
      cramer_rao_mc_check(make_params(1.0, 1.0), Simplex::from_probabilities({0.5, 0.5}), 100, 10000, 1);
  // theta = ln(p1/p0): g_theta = p0 p1 and N = 1
  CHECK(rec.bound == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(rec.exact_lhs == doctest::Approx(rec.bound).epsilon(1e-6));
  CHECK(rec.pass_rate() >= 0.99);
  CHECK(rec.regularity_pass >= 99);
  CHECK(rec.classical_exact_ok());
}

TEST_CASE("Cramer-Rao Monte Carlo: Tsallis, escort equals p") {
  const CramerRaoRecord rec =
      cramer_rao_mc_check(make_params(0.5, 0.0), Simplex::from_probabilities({0.7, 0.3}), 100, 10000, 2);
  CHECK(rec.pass_rate() >= 0.99);
  CHECK(rec.classical_exact_ok());
  CHECK(rec.escort_p1 == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("Cramer-Rao Monte Carlo: determinism and preconditions") {
  const CdParams p = make_params(0.5, 1.0);
  const Simplex s = Simplex::from_probabilities({0.6, 0.4});
  const CramerRaoRecord a = cramer_rao_mc_check(p, s, 100, 1000, 9);
  const CramerRaoRecord b = cramer_rao_mc_check(p, s, 100, 1000, 9);
  CHECK(a.worst_z == b.worst_z);
  CHECK(a.bound_pass == b.bound_pass);
  CHECK_THROWS(cramer_rao_mc_check(p, s, 10, 1000, 9));
  CHECK_THROWS(cramer_rao_mc_check(p, Simplex::uniform(2), 100, 1000, 9));
  CHECK(mix_seed(42, 0) != mix_seed(42, 1));
  CHECK(mix_seed(42, 0) == mix_seed(42, 0));
}
