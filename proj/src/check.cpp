#include "thermoplate/check.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "thermoplate/modal_core.hpp"
#include "thermoplate/oracles.hpp"
#include "thermoplate/regularity.hpp"
#include "thermoplate/resolvent.hpp"
#include "thermoplate/simulator.hpp"

namespace thermoplate::check {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Runs body(detail) -> passed, timing it and catching library errors.
Verdict timed(std::string id, std::string title, const std::function<bool(std::ostringstream&)>& body) {
  Verdict v{std::move(id), std::move(title), false, {}, 0.0};
  const auto start = Clock::now();
  std::ostringstream detail;
  try {
    v.passed = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
    v.passed = false;
  }
  v.seconds = seconds_since(start);
  v.detail = detail.str();
  return v;
}

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  Complex normal_complex() {
    std::normal_distribution<double> n;
    return {n(rng_), n(rng_)};
  }
  Params params(double lo = 0.1, double hi = 10.0) {
    Params p;
    p.gamma = log_uniform(lo, hi);
    p.tau = uniform(0.0, 1.0);
    p.alpha = log_uniform(lo, hi);
    p.beta = log_uniform(lo, hi);
    p.kappa = log_uniform(lo, hi);
    return p;
  }
  // Random state with O(1) components in the weighted (energy) frame.
  ModalState weighted_state(const ModalBlock& block) {
    return {normal_complex() / std::sqrt(block.weights[0]), normal_complex() / std::sqrt(block.weights[1]),
            normal_complex() / std::sqrt(block.weights[2])};
  }

 private:
  std::mt19937_64 rng_;
};

Params unit_params(double tau) {
  Params p;
  p.tau = tau;
  return p;
}

// Frobenius norm of W M W^{-1} for a matrix acting on modal states.
double weighted_frobenius(const Mat3c& m, const ModalBlock& block) {
  double s = 0.0;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      s += std::norm(m(r, c)) * block.weights[r] / block.weights[c];
  return std::sqrt(s);
}

}  // namespace

Verdict gevrey_band(const Options& opts) {
  return timed("C1", "Gevrey band of the resolvent decay exponent", [&](std::ostringstream& out) {
    bool ok = true;
    const auto grid = log_grid(1e2, 1e6, 33);
    for (double tau : {0.5, 0.6, 0.75, 0.9}) {
      const auto start = Clock::now();
      const ScanResult scan = scan_resolvent(grid, unit_params(tau), DomainSpec::interval(1), {}, opts.threads);
      const FitReport fit = fit_decay_exponent(scan, {1e2, 1e6});
      const double secs = seconds_since(start);
      const double lo = (2.0 - 2.0 * tau) / (3.0 - tau) - 0.05;
      const double hi = (2.0 - 2.0 * tau) / (2.0 - tau) + 0.05;
      const bool pass = fit.exponent >= lo && fit.exponent <= hi && secs <= 60.0;
      ok = ok && pass;
      out << fmt(" tau=%.2f phi=%.4f in [%.4f,%.4f] %.1fs%s;", tau, fit.exponent, lo, hi, secs,
                 pass ? "" : " FAIL");
    }
    return ok;
  });
}

Verdict analytic_baseline(const Options& opts) {
  return timed("C2", "Analytic baseline at tau = 0", [&](std::ostringstream& out) {
    const auto grid = log_grid(1e2, 1e6, 33);
    const ScanResult scan = scan_resolvent(grid, unit_params(0.0), DomainSpec::interval(1), {}, opts.threads);
    const FitReport fit = fit_decay_exponent(scan, {1e2, 1e6});
    double lo = INFINITY, hi = 0.0;
    for (const auto& row : scan.rows) {
      if (row.lambda < 1e4) continue;
      const double v = row.lambda * row.resolvent_norm;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double variation = (hi - lo) / lo;
    out << fmt(" phi=%.4f (need 1.00 +- 0.05); lambda*||R|| variation over [1e4,1e6] = %.2e (need < 0.2)",
               fit.exponent, variation);
    return std::abs(fit.exponent - 1.0) <= 0.05 && variation < 0.2;
  });
}

Verdict witness_growth(const Options&) {
  return timed("C3", "Non-analyticity witness growth", [&](std::ostringstream& out) {
    bool ok = true;
    for (double tau : {0.25, 0.5, 0.75, 1.0}) {
      const auto start = Clock::now();
      const auto rows = witness_sequence(unit_params(tau), 10, 1000, DomainSpec::interval(1));
      const FitReport fit = witness_growth_exponent(rows);
      const double secs = seconds_since(start);
      const double expected = tau / (2.0 - tau);
      const double ratio = rows.back().growth / rows.front().growth;
      const bool slope_ok = std::abs(fit.exponent - expected) <= 0.05;
      const bool unbounded_ok = ratio > 10.0;
      const bool pass = slope_ok && unbounded_ok && secs <= 5.0;
      ok = ok && pass;
      out << fmt(" tau=%.2f slope=%.4f (expect %.4f) last/first=%.2f%s;", tau, fit.exponent, expected, ratio,
                 pass ? "" : (slope_ok ? " FAIL(ratio)" : " FAIL"));
    }
    return ok;
  });
}

Verdict witness_asymptotics(const Options&) {
  return timed("C4", "Witness coefficient asymptotics", [&](std::ostringstream& out) {
    bool ok = true;
    for (double tau : {0.5, 1.0}) {
      const auto rows = witness_sequence(unit_params(tau), 100, 1000, DomainSpec::interval(1));
      double lo = INFINITY, hi = 0.0;
      for (const auto& r : rows) {
        const double v = r.mu_abs * std::pow(r.sigma, -(3.0 * tau - 4.0) / 2.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double spread = (hi - lo) / lo;
      ok = ok && spread < 0.05;
      out << fmt(" tau=%.1f spread=%.3e;", tau, spread);
    }
    return ok;
  });
}

Verdict dissipativity(const Options& opts) {
  return timed("C5", "Dissipativity identity", [&](std::ostringstream& out) {
    Draws draws(opts.seed);
    double worst = 0.0, worst_oracle = 0.0;
    const auto start = Clock::now();
    for (int i = 0; i < 1000; ++i) {
      const Params p = draws.params();
      const double sigma = draws.log_uniform(1e-2, 1e2);
      const ModalBlock block = build_modal_block(sigma, p);
      const ModalState x = draws.weighted_state(block);
      const auto [lhs, rhs] = dissipation_residual(x, block, p);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
      const long double ref = oracle::dissipation_form(sigma, p, {x.u, x.v, x.theta});
      worst_oracle = std::max(worst_oracle, static_cast<double>(std::abs(lhs - ref) / (1.0L + std::abs(ref))));
    }
    const double secs = seconds_since(start);
    out << fmt(" max rel residual %.2e, vs extended-precision form %.2e, %.3fs", worst, worst_oracle, secs);
    return worst <= 1e-12 && worst_oracle <= 1e-12 && secs <= 1.0;
  });
}

Verdict exponential_stability(const Options& opts) {
  return timed("C6", "Exponential stability", [&](std::ostringstream& out) {
    bool ok = true;
    for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Params p = unit_params(tau);
      const AbscissaReport rep = spectral_abscissa(p, DomainSpec::interval(1), 1000);
      const bool negative = std::all_of(rep.per_mode.begin(), rep.per_mode.end(),
                                        [](const ModeAbscissa& m) { return m.re_root_max < 0.0; });
      double worst = 0.0;
      for (std::size_t idx : {std::size_t{0}, std::size_t{1}}) {
        const double sigma = rep.per_mode[idx].sigma;
        const double a = rep.per_mode[idx].re_root_max;
        const double horizon = 40.0 / std::abs(a);
        std::vector<double> times(2001);
        for (std::size_t k = 0; k < times.size(); ++k)
          times[k] = horizon * static_cast<double>(k) / static_cast<double>(times.size() - 1);
        InitialData data;
        data.modes.push_back({sigma, ModalState{1.0, 0.0, 0.0}});
        const SimTrace trace = simulate(data, p, times, opts.threads);
        const double rate = decay_rate_estimate(trace, {0.5 * horizon, horizon});
        worst = std::max(worst, std::abs(rate - a) / std::abs(a));
      }
      const bool pass = negative && worst <= 0.02;
      ok = ok && pass;
      out << fmt(" tau=%.2f sup=%.5f rate mismatch=%.2e%s;", tau, rep.sup_real, worst, pass ? "" : " FAIL");
    }
    return ok;
  });
}

Verdict oracle_equivalence(const Options& opts) {
  return timed("C7", "Oracle equivalence", [&](std::ostringstream& out) {
    Draws draws(opts.seed + 7);
    const Params p = unit_params(0.5);
    const auto sigmas = oracle::interval_spectrum(32);
    const DomainSpec domain = DomainSpec::explicit_list(sigmas);
    double worst_norm = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double lambda = draws.uniform(0.0, 200.0);
      const ScanRow row = global_resolvent_norm(lambda, p, domain);
      const double ref = oracle::dense_resolvent_norm(lambda, sigmas, p);
      worst_norm = std::max(worst_norm, std::abs(row.resolvent_norm - ref) / ref);
    }
    double worst_witness = 0.0;
    for (double tau : {0.25, 0.5, 0.75, 1.0}) {
      const Params q = unit_params(tau);
      for (const auto& r : witness_sequence(q, 1, 1000, DomainSpec::interval(1))) {
        const auto c = witness_coefficients(r.sigma, r.lambda_n, q);
        const ModalState x = solve_resolvent(r.lambda_n, build_modal_block(r.sigma, q), ModalForcing{0.0, -1.0, 0.0});
        worst_witness = std::max({worst_witness, std::abs(x.u - c.mu) / std::abs(c.mu),
                                  std::abs(x.theta - c.nu) / std::abs(c.nu)});
      }
    }
    out << fmt(" 32-mode norm vs dense oracle: %.2e; witness vs 3x3 solve: %.2e", worst_norm, worst_witness);
    return worst_norm <= 1e-8 && worst_witness <= 1e-8;
  });
}

Verdict semigroup_property(const Options& opts) {
  return timed("C8", "Semigroup property and propagation accuracy", [&](std::ostringstream& out) {
    Draws draws(opts.seed + 8);
    double worst_semigroup = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Params p = draws.params();
      const ModalBlock block = build_modal_block(draws.log_uniform(0.1, 100.0), p);
      const double t1 = draws.uniform(0.0, 2.0), t2 = draws.uniform(0.0, 2.0);
      const ModalPropagator prop(block);
      const Mat3c whole = prop.at(t1 + t2);
      const Mat3c split = prop.at(t1) * prop.at(t2);
      worst_semigroup =
          std::max(worst_semigroup, weighted_frobenius(whole - split, block) / weighted_frobenius(whole, block));
    }
    double worst_path = 0.0;
    const std::vector<double> times{0.5, 1.0, 5.0, 10.0, 50.0, 100.0};
    for (int i = 0; i < 8; ++i) {
      const Params p = draws.params(0.3, 3.0);
      const double sigma = draws.log_uniform(0.1, 10.0);
      const ModalBlock block = build_modal_block(sigma, p);
      const ModalState x0 = draws.weighted_state(block);
      const auto ref = oracle::integrate(sigma, p, {x0.u, x0.v, x0.theta}, times, 1e-14L);
      const ModalPropagator prop(block);
      for (std::size_t k = 0; k < times.size(); ++k) {
        const ModalState x = ModalState::from(prop.at(times[k]) * x0.vec());
        const ModalState r{Complex(ref[k][0]), Complex(ref[k][1]), Complex(ref[k][2])};
        const ModalState diff{x.u - r.u, x.v - r.v, x.theta - r.theta};
        worst_path = std::max(worst_path, modal_norm(diff, block) / modal_norm(r, block));
      }
    }
    out << fmt(" semigroup defect %.2e (need 1e-9); vs adaptive integrator %.2e (need 1e-8)", worst_semigroup,
               worst_path);
    return worst_semigroup <= 1e-9 && worst_path <= 1e-8;
  });
}

std::vector<Verdict> run_acceptance(const Options& opts) {
  return {gevrey_band(opts),     analytic_baseline(opts),     witness_growth(opts),
          witness_asymptotics(opts), dissipativity(opts),     exponential_stability(opts),
          oracle_equivalence(opts),  semigroup_property(opts)};
}

std::vector<Verdict> run_invariants(const Options& opts) {
  std::vector<Verdict> out;
  out.push_back(timed("I1", "Routh-Hurwitz and root signs", [&](std::ostringstream& detail) {
    Draws draws(opts.seed + 101);
    int bad = 0;
    double sup = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
      const Params p = draws.params();
      const double sigma = draws.log_uniform(1e-3, 1e8);
      const CharPoly cp = characteristic_polynomial(sigma, p);
      const auto roots = modal_eigenvalues(sigma, p);
      if (!cp.routh_hurwitz_stable() || !(roots[0].real() < 0.0)) ++bad;
      sup = std::max(sup, roots[0].real());
    }
    detail << fmt(" %d of 1000 draws violate; largest real part %.3e", bad, sup);
    return bad == 0;
  }));
  out.push_back(timed("I2", "Energy identity in the resolvent system", [&](std::ostringstream& detail) {
    Draws draws(opts.seed + 102);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Params p = draws.params();
      const DomainSpec domain = DomainSpec::interval(16);
      std::vector<ModalForcing> forcing(16);
      for (auto& f : forcing) f = {draws.normal_complex(), draws.normal_complex(), draws.normal_complex()};
      const double lambda = draws.log_uniform(1e-2, 1e4);
      const ProofDiagnostics d = proof_functionals(lambda, forcing, p, domain);
      worst = std::max(worst, std::abs(d.theta_halfnorm_sq - d.re_forcing_inner) / (d.forcing_norm * d.solution_norm));
    }
    detail << fmt(" max defect relative to ||F|| ||U||: %.2e (need 1e-10)", worst);
    return worst <= 1e-10;
  }));
  out.push_back(timed("I3", "Conjugate symmetry of the resolvent norm", [&](std::ostringstream& detail) {
    Draws draws(opts.seed + 103);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Params p = draws.params();
      const ModalBlock block = build_modal_block(draws.log_uniform(1e-2, 1e6), p);
      const double lambda = draws.log_uniform(1e-2, 1e6);
      const double a = modal_resolvent_norm(lambda, block), b = modal_resolvent_norm(-lambda, block);
      worst = std::max(worst, std::abs(a - b) / a);
    }
    detail << fmt(" max relative asymmetry %.2e", worst);
    return worst <= 1e-12;
  }));
  out.push_back(timed("I4", "Stationary solve residual", [&](std::ostringstream& detail) {
    Draws draws(opts.seed + 104);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Params p = draws.params();
      const ModalBlock block = build_modal_block(draws.log_uniform(1e-2, 1e6), p);
      const ModalState f = draws.weighted_state(block);
      const ModalState x = solve_stationary({f.u, f.v, f.theta}, block, p);
      const ModalState image = apply_block(block, x);
      const ModalState diff{image.u - f.u, image.v - f.v, image.theta - f.theta};
      worst = std::max(worst, modal_norm(diff, block) / modal_norm(f, block));
    }
    detail << fmt(" max relative residual %.2e (need 1e-10)", worst);
    return worst <= 1e-10;
  }));
  out.push_back(timed("I5", "Energy monotonicity and dissipation balance", [&](std::ostringstream& detail) {
    Draws draws(opts.seed + 105);
    const Params p = draws.params(0.5, 2.0);
    InitialData data;
    for (std::size_t n = 1; n <= 6; ++n) {
      const double sigma = static_cast<double>(n * n);
      data.modes.push_back({sigma, draws.weighted_state(build_modal_block(sigma, p))});
    }
    std::vector<double> times(20001);
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = 20.0 * static_cast<double>(k) / 20000.0;
    const SimTrace trace = simulate(data, p, times, opts.threads);
    double worst_rise = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
      worst_rise = std::max(worst_rise, (trace.energies[k] - trace.energies[k - 1]) / trace.energies[0]);
    // E(0) - E(T) against the Simpson rule on the dissipation samples.
    const double h = times[1] - times[0];
    double integral = trace.theta_dissipation.front() + trace.theta_dissipation.back();
    for (std::size_t k = 1; k + 1 < times.size(); ++k)
      integral += (k % 2 == 1 ? 4.0 : 2.0) * trace.theta_dissipation[k];
    integral *= h / 3.0;
    const double drop = trace.energies.front() - trace.energies.back();
    const double balance = std::abs(drop - integral) / drop;
    detail << fmt(" max energy rise %.2e E(0); energy balance defect %.2e", worst_rise, balance);
    return worst_rise <= 1e-12 && balance <= 1e-6;
  }));
  out.push_back(timed("I6", "Mode spectra against enumeration", [&](std::ostringstream& detail) {
    const bool interval_ok = mode_spectrum(DomainSpec::interval(10000)) == oracle::interval_spectrum(10000);
    const bool square_ok = mode_spectrum(DomainSpec::square(10000)) == oracle::square_spectrum(10000);
    detail << " interval " << (interval_ok ? "ok" : "MISMATCH") << ", square " << (square_ok ? "ok" : "MISMATCH");
    return interval_ok && square_ok;
  }));
  return out;
}

void print_table(std::ostream& os, const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts)
    os << (v.passed ? "[PASS] " : "[FAIL] ") << v.id << ' ' << v.title << fmt(" (%.2fs)", v.seconds) << " --"
       << v.detail << '\n';
}

bool all_passed(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

}  // namespace thermoplate::check
