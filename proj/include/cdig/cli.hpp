#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cdig/bounds.hpp"
#include "cdig/cdmath.hpp"

namespace cdig::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantFailure = 1,
  kUsageError = 2,
  kComputationError = 3,
};

enum class Command { table1, bounds, curvature, check };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::table1;
  std::optional<int> class_id;
  std::optional<double> c;
  std::optional<double> d;
  SweepGrid grid{};
  Continuation cont{};
  int n_max = 12;
  std::string out = "-";  ///< "-" writes to stdout
  Format format = Format::csv;
  std::uint64_t seed = 42;
  std::string only;  ///< check filter
};

/// Range-checks every field for the selected command; throws UsageError.
void validate(const RunConfig& cfg);

/// File contents for the data commands (header line first, LF endings).
std::string render_table1(const RunConfig& cfg);
std::string render_bounds(const RunConfig& cfg, std::ostream& log);
/// Sets `all_failed` when no dimension could be evaluated.
std::string render_curvature(const RunConfig& cfg, std::ostream& log, bool& all_failed);

/// Validates and runs one command; returns an ExitCode.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (CDIG_EPS_C fills --eps-c when the flag is absent) and runs.
int main(int argc, char** argv);

}  // namespace cdig::cli
