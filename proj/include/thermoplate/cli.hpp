#pragma once

// Command-line front end: argument and config parsing into a RunPlan, and
// execution of a plan into CSV artifacts, a key=value summary and an exit code.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "thermoplate/errors.hpp"
#include "thermoplate/modal_core.hpp"
#include "thermoplate/resolvent.hpp"

namespace thermoplate::cli {

enum class Command { scan, fit, witness, abscissa, simulate, check };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTruncation = 3;
inline constexpr int kExitIo = 4;

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by parse_plan for --help; what() holds the help text.
class HelpRequested : public Error {
 public:
  using Error::Error;
};

struct RunPlan {
  Command command = Command::check;
  Params params;
  DomainSpec domain = DomainSpec::interval(1);

  // scan / fit
  double lambda_min = 1e2;
  double lambda_max = 1e6;
  std::size_t points = 33;
  double fit_min = 0.0;  // 0 means "same as the grid"
  double fit_max = 0.0;
  TruncationPolicy policy;

  // witness
  int n_min = 10;
  int n_max = 1000;

  // abscissa
  std::size_t count = 1000;

  // simulate: 1-based mode indices into the domain spectrum, shared amplitudes
  std::vector<std::size_t> modes{1};
  double u0 = 1.0;
  double v0 = 0.0;
  double theta0 = 0.0;
  double t_max = 20.0;
  std::size_t samples = 2001;

  unsigned threads = 1;
  std::uint64_t seed = 20240917;
  std::string out;  // CSV path; defaults to <command>.csv
  std::string summary = "summary.txt";
};

/// `args` excludes the program name. Flags override values read from
/// `--config FILE`, a flat `key = value` file using the flag names.
RunPlan parse_plan(const std::vector<std::string>& args);

/// Runs a validated plan. Verdicts and progress go to `out`, diagnostics to `err`.
int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

/// parse_plan + execute with exit-code mapping.
int run(int argc, const char* const* argv);

std::string command_name(Command command);

}  // namespace thermoplate::cli
