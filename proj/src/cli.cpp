#include "thermoplate/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "thermoplate/check.hpp"
#include "thermoplate/csv.hpp"
#include "thermoplate/regularity.hpp"
#include "thermoplate/simulator.hpp"

namespace thermoplate::cli {

namespace {

const std::map<std::string, Command> kCommands{
    {"scan", Command::scan},         {"fit", Command::fit},           {"witness", Command::witness},
    {"abscissa", Command::abscissa}, {"simulate", Command::simulate}, {"check", Command::check},
};

const char* kCommandHelp[][2] = {
    {"scan", "Global resolvent norm on a log-spaced frequency grid"},
    {"fit", "Scan, then fit the resolvent decay exponent and compare with theory"},
    {"witness", "Non-analyticity witness sequence and its growth exponent"},
    {"abscissa", "Spectral abscissa over the first modes"},
    {"simulate", "Exact modal evolution of the energy"},
    {"check", "Module invariants and acceptance experiments"},
};

void validate_plan(RunPlan& plan) {
  try {
    plan.params.validate();
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  }
  if (plan.threads == 0) throw UsageError("--threads must be at least 1");
  if (plan.summary.empty()) throw UsageError("--summary must not be empty");
  if (plan.domain.kind != DomainKind::explicit_list && plan.domain.count == 0)
    throw UsageError("--count must be at least 1");
  try {
    plan.policy.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  switch (plan.command) {
    case Command::scan:
    case Command::fit:
      if (!std::isfinite(plan.lambda_min) || !std::isfinite(plan.lambda_max))
        throw UsageError("lambda bounds must be finite");
      if (plan.points == 0) throw UsageError("--points must be at least 1");
      if (plan.points == 1) {
        if (plan.lambda_min < 0.0) throw UsageError("--lambda-min must be nonnegative");
      } else if (!(plan.lambda_min > 0.0 && plan.lambda_max > plan.lambda_min)) {
        throw UsageError("a log grid needs 0 < --lambda-min < --lambda-max");
      }
      if (plan.fit_min == 0.0) plan.fit_min = plan.lambda_min;
      if (plan.fit_max == 0.0) plan.fit_max = plan.lambda_max;
      if (!(plan.fit_max > plan.fit_min)) throw UsageError("fit window must satisfy --fit-min < --fit-max");
      break;
    case Command::witness:
      if (!(plan.params.tau > 0.0)) throw UsageError("witness needs tau in (0, 1]; tau = 0 is the analytic case");
      if (plan.n_min < 1 || plan.n_max < plan.n_min) throw UsageError("witness needs 1 <= --n-min <= --n-max");
      break;
    case Command::abscissa:
      if (plan.count == 0) throw UsageError("--count must be at least 1");
      break;
    case Command::simulate:
      if (!(plan.t_max > 0.0) || !std::isfinite(plan.t_max)) throw UsageError("--t-max must be positive");
      if (plan.samples < 2) throw UsageError("--samples must be at least 2");
      if (plan.modes.empty()) throw UsageError("--modes must list at least one mode index");
      for (std::size_t n : plan.modes)
        if (n == 0) throw UsageError("mode indices are 1-based");
      break;
    case Command::check:
      break;
  }

  if (plan.out.empty() && plan.command != Command::check) plan.out = command_name(plan.command) + ".csv";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

void finish_output(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("failed writing " + path);
}

using Summary = std::vector<std::pair<std::string, std::string>>;

void emit_summary(const RunPlan& plan, const Summary& summary, std::ostream& out) {
  auto os = open_output(plan.summary);
  for (const auto& [key, value] : summary) {
    os << key << '=' << value << '\n';
    out << key << " = " << value << '\n';
  }
  finish_output(os, plan.summary);
}

std::string num(double x) { return csv::format_double(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

Summary base_summary(const RunPlan& plan) {
  return {{"command", command_name(plan.command)}, {"gamma", num(plan.params.gamma)},
          {"tau", num(plan.params.tau)},           {"alpha", num(plan.params.alpha)},
          {"beta", num(plan.params.beta)},         {"kappa", num(plan.params.kappa)}};
}

std::vector<double> lambda_grid(const RunPlan& plan) {
  if (plan.points == 1) return {plan.lambda_min};
  return log_grid(plan.lambda_min, plan.lambda_max, plan.points);
}

// Writes scan.csv and reports rows flagged by the truncation tail check.
int run_scan(const RunPlan& plan, const ScanResult& scan, Summary& summary, std::ostream& err) {
  auto os = open_output(plan.out);
  csv::write_scan(os, scan.rows);
  finish_output(os, plan.out);
  std::size_t flagged = 0;
  double peak = 0.0;
  for (const auto& row : scan.rows) {
    if (!row.tail_ok) ++flagged;
    peak = std::max(peak, row.resolvent_norm);
  }
  summary.push_back({"rows", std::to_string(scan.rows.size())});
  summary.push_back({"max_resolvent_norm", num(peak)});
  summary.push_back({"flagged_rows", std::to_string(flagged)});
  summary.push_back({"csv", plan.out});
  if (flagged > 0) {
    err << "warning: " << flagged << " row(s) failed the truncation tail check\n";
    return kExitTruncation;
  }
  return kExitOk;
}

int execute_scan(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  const auto grid = lambda_grid(plan);
  const ScanResult scan = scan_resolvent(grid, plan.params, plan.domain, plan.policy, plan.threads);
  Summary summary = base_summary(plan);
  const int code = run_scan(plan, scan, summary, err);
  if (plan.command == Command::fit && code == kExitOk) {
    const FitReport fit = fit_decay_exponent(scan, {plan.fit_min, plan.fit_max});
    summary.push_back({"phi_fit", num(fit.exponent)});
    summary.push_back({"phi_std_error", num(fit.std_error)});
    summary.push_back({"fit_points", std::to_string(fit.n_points)});
    if (plan.params.tau < 1.0) {
      const GevreyCertificate cert = gevrey_certificate(plan.params.tau);
      const bool in_band = fit.exponent >= cert.phi_theory - 0.05 && fit.exponent <= cert.phi_ceiling + 0.05;
      summary.push_back({"phi_theory", num(cert.phi_theory)});
      summary.push_back({"phi_ceiling", num(cert.phi_ceiling)});
      summary.push_back({"gevrey_s_bound", num(cert.s_bound)});
      summary.push_back({"phi_in_band", flag(in_band)});
      if (!cert.note.empty()) summary.push_back({"note", cert.note});
    }
  }
  emit_summary(plan, summary, out);
  return code;
}

int execute_witness(const RunPlan& plan, std::ostream& out) {
  const auto rows = witness_sequence(plan.params, plan.n_min, plan.n_max, plan.domain);
  auto os = open_output(plan.out);
  csv::write_witness(os, rows);
  finish_output(os, plan.out);
  Summary summary = base_summary(plan);
  summary.push_back({"rows", std::to_string(rows.size())});
  summary.push_back({"growth_expected", num(plan.params.tau / (2.0 - plan.params.tau))});
  if (rows.size() >= 8) summary.push_back({"growth_exponent", num(witness_growth_exponent(rows).exponent)});
  summary.push_back({"growth_last_over_first", num(rows.back().growth / rows.front().growth)});
  summary.push_back({"csv", plan.out});
  emit_summary(plan, summary, out);
  return kExitOk;
}

int execute_abscissa(const RunPlan& plan, std::ostream& out) {
  const AbscissaReport rep = spectral_abscissa(plan.params, plan.domain, plan.count);
  auto os = open_output(plan.out);
  csv::write_abscissa(os, rep.per_mode);
  finish_output(os, plan.out);
  Summary summary = base_summary(plan);
  summary.push_back({"modes", std::to_string(rep.per_mode.size())});
  summary.push_back({"sup_real", num(rep.sup_real)});
  summary.push_back({"argmax_sigma", num(rep.argmax_sigma)});
  summary.push_back({"csv", plan.out});
  emit_summary(plan, summary, out);
  return kExitOk;
}

int execute_simulate(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  DomainSpec domain = plan.domain;
  const std::size_t highest = *std::max_element(plan.modes.begin(), plan.modes.end());
  if (domain.kind != DomainKind::explicit_list) domain.count = std::max(domain.count, highest);
  const auto spectrum = mode_spectrum(domain);
  if (highest > spectrum.size()) throw UsageError("mode index exceeds the domain spectrum");

  InitialData data;
  std::vector<double> sigmas;
  for (std::size_t n : plan.modes) {
    const double sigma = spectrum[n - 1];
    if (std::find(sigmas.begin(), sigmas.end(), sigma) != sigmas.end()) continue;
    sigmas.push_back(sigma);
    data.modes.push_back({sigma, ModalState{plan.u0, plan.v0, plan.theta0}});
  }
  std::vector<double> times(plan.samples);
  for (std::size_t k = 0; k < times.size(); ++k)
    times[k] = plan.t_max * static_cast<double>(k) / static_cast<double>(times.size() - 1);

  const SimTrace trace = simulate(data, plan.params, times, plan.threads);
  auto os = open_output(plan.out);
  csv::write_trace(os, trace);
  finish_output(os, plan.out);

  bool monotone = true;
  for (std::size_t k = 1; k < trace.energies.size(); ++k)
    monotone = monotone && trace.energies[k] <= trace.energies[k - 1];
  double slowest = -INFINITY;
  for (double sigma : sigmas) slowest = std::max(slowest, modal_eigenvalues(sigma, plan.params)[0].real());

  Summary summary = base_summary(plan);
  summary.push_back({"active_modes", std::to_string(sigmas.size())});
  summary.push_back({"energy_initial", num(trace.energies.front())});
  summary.push_back({"energy_final", num(trace.energies.back())});
  summary.push_back({"energy_monotone", flag(monotone)});
  summary.push_back({"abscissa_active", num(slowest)});
  try {
    summary.push_back({"decay_rate", num(decay_rate_estimate(trace, {0.5 * plan.t_max, plan.t_max}))});
  } catch (const Error& e) {
    err << "note: decay rate not estimated: " << e.what() << '\n';
  }
  summary.push_back({"csv", plan.out});
  emit_summary(plan, summary, out);
  return kExitOk;
}

int execute_check(const RunPlan& plan, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const check::Options opts{plan.seed, plan.threads};
  out << "module invariants\n";
  auto invariants = check::run_invariants(opts);
  check::print_table(out, invariants);
  out << "acceptance experiments\n";
  auto acceptance = check::run_acceptance(opts);
  check::print_table(out, acceptance);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<check::Verdict> all = invariants;
  all.insert(all.end(), acceptance.begin(), acceptance.end());
  const bool passed = check::all_passed(all);
  out << (passed ? "all checks passed" : "some checks FAILED") << " in " << seconds << " s\n";

  Summary summary{{"command", "check"}, {"seed", std::to_string(plan.seed)}};
  for (const auto& v : all) summary.push_back({v.id, v.passed ? "pass" : "fail"});
  summary.push_back({"seconds", num(seconds)});
  summary.push_back({"all_passed", flag(passed)});
  auto os = open_output(plan.summary);
  for (const auto& [key, value] : summary) os << key << '=' << value << '\n';
  finish_output(os, plan.summary);
  return passed ? kExitOk : kExitFailed;
}

}  // namespace

std::string command_name(Command command) {
  for (const auto& [name, value] : kCommands)
    if (value == command) return name;
  return "unknown";
}

RunPlan parse_plan(const std::vector<std::string>& args) {
  RunPlan plan;
  CLI::App app{"Modal analysis of a thermoelastic plate with fractional rotational inertia", "thermoplate"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_config("--config", "", "flat key = value file using the flag names");
  app.allow_config_extras(false);
  app.require_subcommand(1, 1);

  app.add_option("--gamma", plan.params.gamma, "rotational inertia coefficient");
  app.add_option("--tau", plan.params.tau, "fractional power of the inertia term, in [0, 1]");
  app.add_option("--alpha", plan.params.alpha, "coupling coefficient in the plate equation");
  app.add_option("--beta", plan.params.beta, "coupling coefficient in the heat equation");
  app.add_option("--kappa", plan.params.kappa, "heat conduction coefficient");

  std::string domain = "interval";
  std::vector<double> sigmas;
  std::size_t count = 1000;
  app.add_option("--domain", domain, "interval or square")->check(CLI::IsMember({"interval", "square"}));
  app.add_option("--sigmas", sigmas, "explicit comma-separated eigenvalue list (overrides --domain)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--count", count, "number of modes for abscissa");

  app.add_option("--lambda-min", plan.lambda_min, "smallest frequency");
  app.add_option("--lambda-max", plan.lambda_max, "largest frequency");
  app.add_option("--points", plan.points, "number of log-spaced frequencies");
  app.add_option("--fit-min", plan.fit_min, "lower end of the fit window (default: --lambda-min)");
  app.add_option("--fit-max", plan.fit_max, "upper end of the fit window (default: --lambda-max)");
  app.add_option("--safety", plan.policy.safety, "truncation safety factor");
  app.add_option("--tail-decades", plan.policy.tail_decades, "decades checked by the truncation tail test");
  app.add_option("--max-extensions", plan.policy.max_extensions, "tenfold cutoff extensions before flagging");

  app.add_option("--n-min", plan.n_min, "first witness index");
  app.add_option("--n-max", plan.n_max, "last witness index");

  app.add_option("--modes", plan.modes, "comma-separated 1-based mode indices to excite")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--u0", plan.u0, "initial displacement coefficient per excited mode");
  app.add_option("--v0", plan.v0, "initial velocity coefficient per excited mode");
  app.add_option("--theta0", plan.theta0, "initial temperature coefficient per excited mode");
  app.add_option("--t-max", plan.t_max, "final time");
  app.add_option("--samples", plan.samples, "number of output times in [0, t-max]");

  app.add_option("--threads", plan.threads, "worker thread cap");
  app.add_option("--seed", plan.seed, "seed for randomized checks");
  app.add_option("--out", plan.out, "CSV output path (default: <command>.csv)");
  app.add_option("--summary", plan.summary, "key=value summary output path");

  for (const auto& [name, help] : kCommandHelp) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  plan.command = kCommands.at(app.get_subcommands().front()->get_name());
  if (!sigmas.empty()) {
    plan.domain = DomainSpec::explicit_list(sigmas);
  } else {
    plan.domain = domain == "square" ? DomainSpec::square(count) : DomainSpec::interval(count);
  }
  plan.count = count;
  if (!sigmas.empty()) {
    try {
      mode_spectrum(plan.domain);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    plan.count = std::min(count, sigmas.size());
  }
  validate_plan(plan);
  return plan;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  switch (plan.command) {
    case Command::scan:
    case Command::fit:
      return execute_scan(plan, out, err);
    case Command::witness:
      return execute_witness(plan, out);
    case Command::abscissa:
      return execute_abscissa(plan, out);
    case Command::simulate:
      return execute_simulate(plan, out, err);
    case Command::check:
      return execute_check(plan, out);
  }
  return kExitFailed;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const RunPlan plan = parse_plan(args);
    return execute(plan, std::cout, std::cerr);
  } catch (const HelpRequested& e) {
    std::cout << e.what();
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun with --help for the list of commands and flags\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace thermoplate::cli
