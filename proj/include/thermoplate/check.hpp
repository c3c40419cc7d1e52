#pragma once

// End-to-end verification experiments: the acceptance criteria and the
// module invariants, each reduced to a pass/fail verdict with a short detail
// line. Shared by the `check` subcommand and the acceptance test binary.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace thermoplate::check {

struct Options {
  std::uint64_t seed = 20240917;
  unsigned threads = 1;
};

struct Verdict {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

Verdict gevrey_band(const Options& opts);              // criterion 1
Verdict analytic_baseline(const Options& opts);        // criterion 2
Verdict witness_growth(const Options& opts);           // criterion 3
Verdict witness_asymptotics(const Options& opts);      // criterion 4
Verdict dissipativity(const Options& opts);            // criterion 5
Verdict exponential_stability(const Options& opts);    // criterion 6
Verdict oracle_equivalence(const Options& opts);       // criterion 7
Verdict semigroup_property(const Options& opts);       // criterion 8

/// Criteria 1-8 in order.
std::vector<Verdict> run_acceptance(const Options& opts);

/// Module invariants: Routh-Hurwitz, root signs, energy identity, conjugate
/// symmetry, stationary solve residual, energy monotonicity.
std::vector<Verdict> run_invariants(const Options& opts);

void print_table(std::ostream& os, const std::vector<Verdict>& verdicts);

bool all_passed(const std::vector<Verdict>& verdicts);

}  // namespace thermoplate::check
