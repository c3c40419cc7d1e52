#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "thermoplate/errors.hpp"
#include "thermoplate/oracles.hpp"
#include "thermoplate/regularity.hpp"
#include "thermoplate/resolvent.hpp"

using namespace thermoplate;

namespace {

Params unit_params(double tau) {
  Params p;
  p.tau = tau;
  return p;
}

ScanResult synthetic_scan(double exponent, std::size_t points) {
  ScanResult scan;
  for (double lambda : log_grid(1e2, 1e6, points))
    scan.rows.push_back({lambda, 3.0 * std::pow(lambda, -exponent), 1.0, 1.0, true});
  return scan;
}

}  // namespace

TEST(GevreyCertificate, MainBranch) {
  const GevreyCertificate half = gevrey_certificate(0.5);
  EXPECT_EQ(half.regime, GevreyRegime::main);
  EXPECT_NEAR(half.phi_theory, 0.4, 1e-15);
  EXPECT_NEAR(half.s_bound, 2.5, 1e-14);
  EXPECT_NEAR(half.phi_ceiling, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(half.note.empty());

  const GevreyCertificate three_quarters = gevrey_certificate(0.75);
  EXPECT_NEAR(three_quarters.phi_theory, 2.0 / 9.0, 1e-15);
  EXPECT_NEAR(three_quarters.s_bound, 4.5, 1e-14);
  EXPECT_NEAR(three_quarters.phi_ceiling, 0.4, 1e-15);
}

TEST(GevreyCertificate, ComparativeBranch) {
  const GevreyCertificate c = gevrey_certificate(0.25);
  EXPECT_EQ(c.regime, GevreyRegime::comparative);
  EXPECT_NEAR(c.phi_theory, 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(c.s_bound, 7.0 / 4.0, 1e-14);
}

TEST(GevreyCertificate, AnalyticEndpointAndRange) {
  const GevreyCertificate c = gevrey_certificate(0.0);
  EXPECT_EQ(c.regime, GevreyRegime::analytic);
  EXPECT_EQ(c.phi_theory, 1.0);
  EXPECT_EQ(c.s_bound, 1.0);
  EXPECT_THROW(gevrey_certificate(1.0), OutOfRange);
  EXPECT_THROW(gevrey_certificate(-0.1), OutOfRange);
  EXPECT_THROW(gevrey_certificate(NAN), OutOfRange);
}

TEST(FitDecayExponent, PlantedSlope) {
  const FitReport fit = fit_decay_exponent(synthetic_scan(0.4, 33), {1e2, 1e6});
  EXPECT_NEAR(fit.exponent, 0.4, 1e-12);
  EXPECT_LT(fit.std_error, 1e-12);
  EXPECT_EQ(fit.n_points, 33u);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-10);
}

TEST(FitDecayExponent, WindowSelectsRows) {
  const FitReport fit = fit_decay_exponent(synthetic_scan(0.7, 33), {1e3, 1e5});
  EXPECT_EQ(fit.n_points, 17u);
  EXPECT_NEAR(fit.exponent, 0.7, 1e-12);
  EXPECT_THROW(fit_decay_exponent(synthetic_scan(0.7, 33), {1e2, 2e2}), FitWindowError);
}

TEST(FitDecayExponent, RefusesFlaggedRows) {
  ScanResult scan = synthetic_scan(0.5, 33);
  scan.rows[5].tail_ok = false;
  try {
    fit_decay_exponent(scan, {1e2, 1e6});
    FAIL() << "expected UnreliableDataError";
  } catch (const UnreliableDataError& e) {
    std::ostringstream expected;
    expected.precision(17);
    expected << scan.rows[5].lambda;
    EXPECT_NE(std::string(e.what()).find(expected.str()), std::string::npos);
  }
  EXPECT_NO_THROW(fit_decay_exponent(scan, {scan.rows[6].lambda, 1e6}));
}

TEST(FitLogLog, Errors) {
  const std::vector<double> x{1, 2, 3}, y{1, 2, 3};
  EXPECT_THROW(fit_log_log(x, y), FitWindowError);
  const std::vector<double> x8(8, 2.0), y8(8, 1.0);
  EXPECT_THROW(fit_log_log(x8, y8), FitWindowError);
  std::vector<double> neg{1, 2, 3, 4, 5, 6, 7, -8};
  EXPECT_THROW(fit_log_log(neg, neg), FitWindowError);
}

TEST(FitDecayExponent, AnalyticScan) {
  const ScanResult scan = scan_resolvent(log_grid(1e2, 1e6, 33), unit_params(0.0), DomainSpec::interval(1));
  EXPECT_NEAR(fit_decay_exponent(scan, {1e2, 1e6}).exponent, 1.0, 0.05);
}

TEST(FitDecayExponent, IntermediateScanInBand) {
  const ScanResult scan = scan_resolvent(log_grid(1e2, 1e6, 33), unit_params(0.75), DomainSpec::interval(1));
  const double phi = fit_decay_exponent(scan, {1e2, 1e6}).exponent;
  const GevreyCertificate c = gevrey_certificate(0.75);
  EXPECT_GE(phi, c.phi_theory - 0.05);
  EXPECT_LE(phi, c.phi_ceiling + 0.05);
}

TEST(Witness, FirstModeClosedForm) {
  for (double tau : {0.1, 0.5, 1.0}) {
    const auto rows = witness_sequence(unit_params(tau), 1, 1, DomainSpec::interval(1));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].lambda_n, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(rows[0].mu_abs, 2.0 * std::sqrt(3.0), 1e-13);
  }
}

TEST(Witness, SecondModeFrequency) {
  EXPECT_NEAR(witness_frequency(4.0, unit_params(0.5)), 4.0 / std::sqrt(3.0), 1e-14);
  const auto rows = witness_sequence(unit_params(0.5), 2, 2, DomainSpec::interval(1));
  EXPECT_EQ(rows[0].n, 2);
  EXPECT_EQ(rows[0].sigma, 4.0);
  EXPECT_NEAR(rows[0].lambda_n, 4.0 / std::sqrt(3.0), 1e-14);
}

TEST(Witness, CoefficientsMatchResolventSolve) {
  for (double tau : {0.25, 0.5, 0.75, 1.0}) {
    Params p = unit_params(tau);
    p.gamma = 1.7;
    p.kappa = 0.6;
    for (const auto& row : witness_sequence(p, 1, 1000, DomainSpec::interval(1))) {
      const auto c = witness_coefficients(row.sigma, row.lambda_n, p);
      const ModalState x = solve_resolvent(row.lambda_n, build_modal_block(row.sigma, p), {0.0, -1.0, 0.0});
      EXPECT_LT(std::abs(x.u - c.mu), 1e-8 * std::abs(c.mu));
      EXPECT_LT(std::abs(x.theta - c.nu), 1e-8 * std::abs(c.nu));
      EXPECT_NEAR(row.mu_abs, std::abs(c.mu), 1e-12 * std::abs(c.mu));
    }
  }
}

TEST(Witness, CoefficientsMatchExtendedPrecisionSolve) {
  const Params p = unit_params(0.5);
  for (int n : {1, 7, 50, 400}) {
    const double sigma = static_cast<double>(n) * n;
    const double lambda = witness_frequency(sigma, p);
    const auto c = witness_coefficients(sigma, lambda, p);
    const auto ref = oracle::resolvent_solve(lambda, sigma, p, {0.0L, -1.0L, 0.0L});
    EXPECT_LT(std::abs(c.mu - Complex(ref[0])), 1e-10 * std::abs(c.mu));
    EXPECT_LT(std::abs(c.nu - Complex(ref[2])), 1e-10 * std::abs(c.nu));
  }
}

TEST(Witness, MuAsymptotics) {
  for (double tau : {0.5, 1.0}) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : witness_sequence(unit_params(tau), 100, 1000, DomainSpec::interval(1))) {
      const double v = r.mu_abs * std::pow(r.sigma, -(3.0 * tau - 4.0) / 2.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_LT((hi - lo) / lo, 0.05) << "tau=" << tau;
  }
}

TEST(Witness, FrequencyBelowEigenvalueAndAsymptoticRatio) {
  for (double tau : {0.5, 1.0}) {
    Params p = unit_params(tau);
    p.gamma = 2.0;
    const auto rows = witness_sequence(p, 1, 1000, DomainSpec::interval(1));
    for (const auto& r : rows) EXPECT_LT(r.lambda_n, r.sigma);
    const auto& last = rows.back();
    const double ratio = last.lambda_n / std::pow(last.sigma, (2.0 - tau) / 2.0);
    EXPECT_NEAR(ratio, 1.0 / std::sqrt(p.gamma), 0.01 / std::sqrt(p.gamma));
  }
}

TEST(Witness, GrowthSlopeAndMonotonicity) {
  for (double tau : {0.25, 0.5, 0.75, 1.0}) {
    const auto rows = witness_sequence(unit_params(tau), 10, 1000, DomainSpec::interval(1));
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].growth, rows[i - 1].growth);
    EXPECT_NEAR(witness_growth_exponent(rows).exponent, tau / (2.0 - tau), 0.05) << "tau=" << tau;
  }
}

TEST(Witness, NearlyAnalyticSlopeIsFlat) {
  const auto rows = witness_sequence(unit_params(0.01), 10, 1000, DomainSpec::interval(1));
  EXPECT_NEAR(witness_growth_exponent(rows).exponent, 0.005, 0.01);
}

TEST(Witness, BothNormsReported) {
  Params p = unit_params(0.5);
  p.gamma = 3.0;
  for (const auto& r : witness_sequence(p, 1, 50, DomainSpec::interval(1))) {
    EXPECT_GT(r.u_norm_H, 0.0);
    EXPECT_GT(r.u_norm_power, 0.0);
    EXPECT_NEAR(r.growth, r.lambda_n * r.u_norm_H, 1e-12 * r.growth);
    // the γ-weighted velocity norm dominates the pure power norm
    EXPECT_GE(r.u_norm_H, r.u_norm_power);
  }
}

TEST(Witness, Errors) {
  EXPECT_THROW(witness_sequence(unit_params(0.0), 1, 10, DomainSpec::interval(1)), WitnessInapplicable);
  EXPECT_THROW(witness_sequence(unit_params(0.5), 0, 10, DomainSpec::interval(1)), InvalidDomain);
  EXPECT_THROW(witness_sequence(unit_params(0.5), 10, 9, DomainSpec::interval(1)), InvalidDomain);
}

TEST(SpectralAbscissa, FirstModeGolden) {
  // Largest real part of z³ + z² + z + 1/2, from the extended-precision eigensolver.
  const double golden = -0.17610056436947880734;
  const auto roots = modal_eigenvalues(1.0, unit_params(0.5));
  EXPECT_NEAR(roots[0].real(), golden, 1e-15);
  EXPECT_GT(roots[0].imag(), 0.0);
  const AbscissaReport rep = spectral_abscissa(unit_params(0.5), DomainSpec::interval(1), 1);
  EXPECT_NEAR(rep.sup_real, golden, 1e-15);
  EXPECT_EQ(rep.argmax_sigma, 1.0);
}

TEST(SpectralAbscissa, RootsMatchEigensolver) {
  std::mt19937_64 rng(31);
  auto lu = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  for (int i = 0; i < 1000; ++i) {
    Params p;
    p.gamma = lu(0.1, 10);
    p.tau = std::uniform_real_distribution<double>(0, 1)(rng);
    p.alpha = lu(0.1, 10);
    p.beta = lu(0.1, 10);
    p.kappa = lu(0.1, 10);
    const double sigma = lu(1e-2, 1e6);
    const auto z = modal_eigenvalues(sigma, p);
    const auto ref = oracle::eigenvalues(sigma, p);
    for (std::size_t k = 0; k < 3; ++k) {
      const double scale = std::abs(Complex(ref[k]));
      EXPECT_LT(std::abs(z[k] - Complex(ref[k])), 1e-9 * scale) << "sigma=" << sigma << " k=" << k;
      EXPECT_LT(z[k].real(), 0.0);
    }
  }
}

TEST(SpectralAbscissa, PlateauForFullInertia) {
  const AbscissaReport rep = spectral_abscissa(unit_params(1.0), DomainSpec::interval(1), 1000);
  ASSERT_EQ(rep.per_mode.size(), 1000u);
  EXPECT_LT(rep.sup_real, 0.0);
  const double a = rep.per_mode[998].re_root_max, b = rep.per_mode[999].re_root_max;
  EXPECT_LT(std::abs(a - b), 1e-3 * std::abs(b));
  for (const auto& m : rep.per_mode) EXPECT_LT(m.re_root_max, 0.0);
}

TEST(SpectralAbscissa, DoubledConductionMovesRealRoot) {
  Params p = unit_params(0.5);
  p.kappa = 2.0;
  EXPECT_LT(spectral_abscissa(p, DomainSpec::interval(1), 1000).sup_real, 0.0);
  const double sigma = 1e6;
  const auto roots = modal_eigenvalues(sigma, p);
  EXPECT_NEAR(roots[2].real() / (-p.kappa * sigma), 1.0, 0.01);
}

TEST(SpectralAbscissa, SquareDomainKeepsDuplicates) {
  const AbscissaReport rep = spectral_abscissa(unit_params(0.5), DomainSpec::square(5), 5);
  ASSERT_EQ(rep.per_mode.size(), 5u);
  EXPECT_EQ(rep.per_mode[1].sigma, 5.0);
  EXPECT_EQ(rep.per_mode[2].sigma, 5.0);
  EXPECT_THROW(spectral_abscissa(unit_params(0.5), DomainSpec::interval(1), 0), InvalidDomain);
}
