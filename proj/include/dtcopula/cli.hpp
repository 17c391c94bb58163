#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dtcopula/copula.hpp"
#include "dtcopula/estimator.hpp"
#include "dtcopula/sample.hpp"
#include "dtcopula/validate.hpp"

namespace dtcopula::cli {

enum class Command { Fit, Bootstrap, Simulate, Validate };
enum class Format { Csv, Json };

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // I/O, internal errors, failed self-checks
  kValidation = 2,
  kNonConvergence = 3,
  kDegeneracy = 4,
};

struct RunConfig {
  Command command = Command::Fit;
  std::string input;
  std::optional<double> phi;
  std::vector<Family> families{Family::Frank};
  std::vector<Algorithm> algorithms{Algorithm::Simple};
  std::optional<double> theta_lo, theta_hi, theta_init;
  double tol = 1e-6;
  int max_outer = 500;
  std::size_t bootstrap_b = 500;
  std::string model;
  std::size_t n = 250;
  std::size_t replicates = 200;
  bool comparator = false;
  std::uint64_t seed = 1;
  std::string out;  // empty: stdout
  Format format = Format::Csv;
  /// Test seam for `validate`; not reachable from the command line.
  PartialHook validate_hook{};
};

/// Parses argv (argv[0] is the program name). Throws ValidationError on bad
/// flags or values; returns nullopt when help was requested (text written to
/// `out`).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Reads a CSV with header `u,x` or `u,x,v` (any column order). When v is
/// present v - u must equal phi within 1e-9 on every row. Errors name the
/// 1-based line number.
ObservedSample read_sample_csv(std::istream& in, double phi);
ObservedSample read_sample_csv(const std::string& path, double phi);

/// Each command writes its artifact to `out` and returns an exit code.
/// Errors propagate as exceptions; run() maps them to exit codes.
int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_bootstrap(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_validate(const RunConfig& config, std::ostream& out);

/// Dispatches a parsed config, writing to config.out or `out`; errors are
/// reported on `err` and mapped to ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dtcopula::cli
