#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cdig/cdmath.hpp"
#include "cdig/manifold.hpp"

namespace cdig {

struct CheckOptions {
  Continuation cont{};
  std::uint64_t seed = 42;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Names accepted by run_checks, in execution order.
const std::vector<std::string>& check_names();

/// Runs every check, or only `only` when non-empty. Throws InvalidRegion for
/// an unknown name.
std::vector<CheckResult> run_checks(const CheckOptions& opts, const std::string& only = {});

/// Uniform point on the simplex conditioned on min p_i >= p_min.
Simplex sample_interior(int n, double p_min, std::mt19937_64& rng);

}  // namespace cdig
