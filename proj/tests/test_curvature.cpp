#include <doctest.h>

#include <cmath>
#include <vector>

#include "cdig/curvature.hpp"
#include "cdig/error.hpp"
#include "oracle.hpp"

using namespace cdig;

namespace {

MetricField euclidean() {
  return {[](const Simplex& p) {
            return MetricTensor(Eigen::MatrixXd::Identity(p.dim(), p.dim()));
          },
          "euclidean"};
}

}  // namespace

TEST_CASE("christoffels: flat metric and Fisher n = 1") {
  const Tensor3 flat = christoffels(euclidean(), Simplex::uniform(2), 1e-3);
  CHECK(flat.max_abs() == 0.0);
  const MetricField fisher = fisher_metric_field();
  const Tensor3 mid = christoffels(fisher, Simplex::from_probabilities({0.5, 0.5}), 1e-4);
  CHECK(std::abs(mid(0, 0, 0)) <= 1e-9);
  const Tensor3 quarter = christoffels(fisher, Simplex::from_probabilities({0.75, 0.25}), 1e-4);
  CHECK(quarter(0, 0, 0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("christoffels are symmetric in the lower indices") {
  const MetricField field = cd_metric_field(make_params(0.4, 2.0));
  const Tensor3 g = christoffels(field, Simplex::from_probabilities({0.1, 0.2, 0.3, 0.4}), 1e-3);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) CHECK(g(k, i, j) == g(k, j, i));
    }
  }
}

TEST_CASE("metric compatibility") {
  for (auto [c, d] : {std::pair{1.0, 1.0}, {0.5, 0.0}, {1.0, 2.5}, {0.5, 1.0}}) {
    const MetricField field = cd_metric_field(make_params(c, d));
    CHECK(metric_compatibility_residual(field, Simplex::from_probabilities({0.2, 0.3, 0.5}), 1e-4) <=
          5e-4);
  }
}

TEST_CASE("christoffels near the boundary") {
  CHECK_THROWS_AS(christoffels(fisher_metric_field(), Simplex::from_probabilities({0.995, 0.005}), 1e-3),
                  BoundaryError);
}

TEST_CASE("scalar curvature of the Fisher simplex") {
  const MetricField fisher = fisher_metric_field();
  CHECK(scalar_curvature(fisher, Simplex::from_probabilities({0.3, 0.7}), 1e-3) == 0.0);
  for (int n = 2; n <= 6; ++n) {
    const double r = scalar_curvature(fisher, Simplex::uniform(n), default_curvature_step(n));
    CHECK(r == doctest::Approx(oracle::fisher_scalar_curvature(n)).epsilon(1e-3));
    const double half = scalar_curvature(fisher, Simplex::uniform(n), default_curvature_step(n) / 2);
    CHECK(step_halving_ok(r, half));
  }
  // off-center: the sphere has constant curvature
  CHECK(scalar_curvature(fisher, Simplex::from_probabilities({0.1, 0.3, 0.6}), 1e-4) ==
        doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("scalar curvature is invariant under relabeling") {
  const MetricField field = cd_metric_field(make_params(0.5, 1.0));
  const double a = scalar_curvature(field, Simplex::from_probabilities({0.2, 0.3, 0.5}), 2.5e-4);
  const double b = scalar_curvature(field, Simplex::from_probabilities({0.2, 0.5, 0.3}), 2.5e-4);
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
  // exchanging p_0 with p_1 changes the chart, not the manifold
  const double c = scalar_curvature(field, Simplex::from_probabilities({0.3, 0.2, 0.5}), 2.5e-4);
  CHECK(a == doctest::Approx(c).epsilon(1e-3));
}

TEST_CASE("curvature ratio scan") {
  const auto self = curvature_ratio_scan(fisher_metric_field(), 5);
  REQUIRE(self.size() == 4);
  for (const auto& rep : self) {
    CHECK(rep.ratio == 1.0);
    CHECK(rep.error.empty());
    CHECK(rep.point.size() == static_cast<std::size_t>(rep.n + 1));
  }
  for (const auto& rep : curvature_ratio_scan(make_params(1.0, 1.0), 8)) {
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.step_ok);
    CHECK(rep.R_fisher == doctest::Approx(oracle::fisher_scalar_curvature(rep.n)).epsilon(1e-3));
  }
}

TEST_CASE("curvature scan reports failing dimensions") {
  int calls = 0;
  MetricField broken{[&calls](const Simplex& p) -> MetricTensor {
                       if (p.dim() == 3) throw SingularMetric("broken at n = 3");
                       ++calls;
                       return MetricTensor(Eigen::MatrixXd::Identity(p.dim(), p.dim()));
                     },
                     "broken"};
  const auto reps = curvature_ratio_scan(broken, 4);
  REQUIRE(reps.size() == 3);
  CHECK(reps[1].n == 3);
  CHECK_FALSE(reps[1].error.empty());
  CHECK(std::isnan(reps[1].R));
  CHECK(reps[0].error.empty());
  CHECK(calls > 0);
}

TEST_CASE("step halving tolerance") {
  CHECK(step_halving_ok(1.0005, 1.0));
  CHECK_FALSE(step_halving_ok(1.002, 1.0));
  CHECK(step_halving_ok(5e-7, 0.0));
}
