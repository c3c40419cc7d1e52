#include "thermoplate/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "thermoplate/errors.hpp"

namespace thermoplate {

GevreyCertificate gevrey_certificate(double tau) {
  if (!(tau >= 0.0 && tau < 1.0))
    throw OutOfRange("Gevrey certificate needs 0 <= tau < 1, got " + std::to_string(tau));
  GevreyCertificate c;
  c.tau = tau;
  c.phi_ceiling = (2.0 - 2.0 * tau) / (2.0 - tau);
  if (tau == 0.0) {
    c.regime = GevreyRegime::analytic;
    c.phi_theory = 1.0;
    c.s_bound = 1.0;
    c.note = "tau = 0: analytic semigroup, resolvent decays like 1/|lambda|";
    return c;
  }
  if (tau < 0.5) {
    c.regime = GevreyRegime::comparative;
    c.phi_theory = (2.0 - 4.0 * tau) / (2.0 - tau);
    c.note = "tau < 1/2: comparative bound s > (2-tau)/(2-4tau)";
  } else {
    c.regime = GevreyRegime::main;
    c.phi_theory = (2.0 - 2.0 * tau) / (3.0 - tau);
    if (tau == 0.5)
      c.note = "tau = 1/2: s > (3-tau)/(2-2tau) = 2.5 here, while the (2-tau)/(2-4tau) bound diverges at this endpoint";
  }
  c.s_bound = 1.0 / c.phi_theory;
  return c;
}

FitReport fit_log_log(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitWindowError("fit: x and y sizes differ");
  const std::size_t n = x.size();
  if (n < 8) throw FitWindowError("fit needs at least 8 points, got " + std::to_string(n));
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw FitWindowError("fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw FitWindowError("fit needs distinct abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ssr += r * r;
  }
  FitReport rep;
  rep.exponent = slope;
  rep.intercept = intercept;
  rep.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  rep.window_min = *std::min_element(x.begin(), x.end());
  rep.window_max = *std::max_element(x.begin(), x.end());
  rep.n_points = n;
  return rep;
}

FitReport fit_decay_exponent(const ScanResult& scan, std::pair<double, double> window) {
  std::vector<double> xs, ys, flagged;
  for (const auto& row : scan.rows) {
    if (row.lambda < window.first || row.lambda > window.second) continue;
    if (!row.tail_ok) flagged.push_back(row.lambda);
    xs.push_back(row.lambda);
    ys.push_back(row.resolvent_norm);
  }
  if (xs.size() < 8)
    throw FitWindowError("fit window holds " + std::to_string(xs.size()) + " rows, need at least 8");
  if (!flagged.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "truncation flagged at lambda =";
    for (double l : flagged) os << ' ' << l;
    throw UnreliableDataError(os.str());
  }
  FitReport rep = fit_log_log(xs, ys);
  rep.exponent = -rep.exponent;
  rep.window_min = window.first;
  rep.window_max = window.second;
  return rep;
}

double witness_frequency(double sigma, const Params& params) {
  return std::sqrt(sigma * sigma / inertia_factor(sigma, params));
}

WitnessCoefficients witness_coefficients(double sigma, double lambda, const Params& params) {
  const double d = inertia_factor(sigma, params);
  const Complex il{0.0, lambda};
  const double a11 = lambda * lambda * d - sigma * sigma;
  const double a12 = params.alpha * sigma;
  const Complex a21 = il * params.beta * sigma;
  const Complex a22 = il + params.kappa * sigma;
  // Second equation gives ν = -a21 μ / a22; substitute into the first.
  const Complex mu = d / (a11 - a12 * a21 / a22);
  const Complex nu = -a21 * mu / a22;
  return {mu, nu};
}

std::vector<WitnessRow> witness_sequence(const Params& params, int n_first, int n_last,
                                         const DomainSpec& domain) {
  params.validate();
  if (params.tau == 0.0) throw WitnessInapplicable("witness sequence requires tau > 0");
  if (n_first < 1 || n_last < n_first) throw InvalidDomain("witness range must satisfy 1 <= n_first <= n_last");
  DomainSpec d = domain;
  d.count = static_cast<std::size_t>(n_last);
  const auto sigmas = mode_spectrum(d);

  std::vector<WitnessRow> rows;
  rows.reserve(static_cast<std::size_t>(n_last - n_first + 1));
  for (int n = n_first; n <= n_last; ++n) {
    const double s = sigmas[static_cast<std::size_t>(n - 1)];
    const double lam = witness_frequency(s, params);
    const auto [mu, nu] = witness_coefficients(s, lam, params);
    // e_n has unit ||A^{τ/2}·|| norm: L² coefficient σ^{-τ/2}.
    const double scale = std::pow(s, -0.5 * params.tau);
    const double d_in = inertia_factor(s, params);
    const double u2 = std::norm(mu), v2 = lam * lam * u2, t2 = std::norm(nu);
    WitnessRow row;
    row.n = n;
    row.sigma = s;
    row.lambda_n = lam;
    row.mu_abs = std::abs(mu);
    row.nu_abs = std::abs(nu);
    row.u_norm_H = scale * std::sqrt(params.beta * s * s * u2 + params.beta * d_in * v2 + params.alpha * t2);
    row.u_norm_power = scale * std::sqrt(params.beta * s * s * u2 + params.beta * std::pow(s, params.tau) * v2 +
                                         params.alpha * t2);
    row.growth = lam * row.u_norm_H;
    rows.push_back(row);
  }
  return rows;
}

FitReport witness_growth_exponent(std::span<const WitnessRow> rows) {
  std::vector<double> xs, ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (const auto& r : rows) {
    xs.push_back(r.lambda_n);
    ys.push_back(r.growth);
  }
  return fit_log_log(xs, ys);
}

std::array<Complex, 3> modal_eigenvalues(double sigma, const Params& params) {
  const CharPoly cp = characteristic_polynomial(sigma, params);
  return cubic_roots(cp.p, cp.q, cp.r);
}

AbscissaReport spectral_abscissa(const Params& params, const DomainSpec& domain, std::size_t count) {
  params.validate();
  if (count < 1) throw InvalidDomain("abscissa scan needs at least one mode");
  DomainSpec d = domain;
  d.count = count;
  const auto sigmas = mode_spectrum(d);

  AbscissaReport rep;
  rep.per_mode.reserve(sigmas.size());
  bool first = true;
  for (double s : sigmas) {
    const auto roots = modal_eigenvalues(s, params);
    const ModeAbscissa m{s, roots[0].real(), roots[0].imag()};
    if (!(m.re_root_max < 0.0)) {
      throw StabilityViolation("mode sigma = " + std::to_string(s) +
                               " has a root with real part " + std::to_string(m.re_root_max));
    }
    rep.per_mode.push_back(m);
    if (first || m.re_root_max > rep.sup_real) {
      rep.sup_real = m.re_root_max;
      rep.argmax_sigma = s;
      first = false;
    }
  }
  return rep;
}

}  // namespace thermoplate
