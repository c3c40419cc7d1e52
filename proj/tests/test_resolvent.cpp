#include <gtest/gtest.h>

#include <cmath>
#include <random>

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

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double log_uniform(double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  }
  Params params() {
    Params p;
    p.gamma = log_uniform(0.1, 10);
    p.tau = std::uniform_real_distribution<double>(0, 1)(rng);
    p.alpha = log_uniform(0.1, 10);
    p.beta = log_uniform(0.1, 10);
    p.kappa = log_uniform(0.1, 10);
    return p;
  }
  Complex c() {
    std::normal_distribution<double> n;
    return {n(rng), n(rng)};
  }
};

// Brute-force sup of the extended-precision per-mode norm over σ = n², n ≤ n_max.
double brute_force_max(double lambda, const Params& p, std::size_t n_max, double* argmax = nullptr) {
  long double best = 0.0L;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const long double sigma = static_cast<long double>(n * n);
    const long double v = oracle::modal_resolvent_norm(lambda, sigma, p);
    if (v > best) {
      best = v;
      if (argmax) *argmax = static_cast<double>(sigma);
    }
  }
  return static_cast<double>(best);
}

}  // namespace

TEST(ModalResolventNorm, StationaryGolden) {
  // Spectral norm of W B^{-1} W^{-1} at σ = 1, unit params, from the long-double SVD oracle.
  const double golden = 2.4811943040920156;
  const ModalBlock b = build_modal_block(1.0, unit_params(0.5));
  EXPECT_NEAR(modal_resolvent_norm(0.0, b), golden, 1e-14 * golden);
  EXPECT_NEAR(static_cast<double>(oracle::modal_resolvent_norm(0.0L, 1.0L, unit_params(0.5))), golden, 1e-15);
}

TEST(ModalResolventNorm, HighFrequencyLimit) {
  const ModalBlock b = build_modal_block(1.0, unit_params(0.5));
  for (double lambda : {1e4, 1e6, 1e8}) EXPECT_NEAR(lambda * modal_resolvent_norm(lambda, b), 1.0, 10.0 / lambda);
}

TEST(ModalResolventNorm, MatchesSvdOracle) {
  Sampler s(21);
  for (int i = 0; i < 500; ++i) {
    const Params p = s.params();
    const double sigma = s.log_uniform(1e-2, 1e8);
    const double lambda = s.log_uniform(1e-3, 1e6);
    const double ref = static_cast<double>(oracle::modal_resolvent_norm(lambda, sigma, p));
    EXPECT_NEAR(modal_resolvent_norm(lambda, build_modal_block(sigma, p)), ref, 1e-10 * ref)
        << "sigma=" << sigma << " lambda=" << lambda;
  }
}

TEST(ModalResolventNorm, ConjugateSymmetry) {
  Sampler s(22);
  for (int i = 0; i < 500; ++i) {
    const ModalBlock b = build_modal_block(s.log_uniform(1e-2, 1e6), s.params());
    const double lambda = s.log_uniform(1e-2, 1e6);
    EXPECT_DOUBLE_EQ(modal_resolvent_norm(lambda, b), modal_resolvent_norm(-lambda, b));
  }
}

TEST(SolveResolvent, MatchesDenseSolve) {
  Sampler s(23);
  for (int i = 0; i < 300; ++i) {
    const Params p = s.params();
    const double sigma = s.log_uniform(1e-2, 1e6);
    const double lambda = s.log_uniform(1e-2, 1e6);
    const ModalBlock b = build_modal_block(sigma, p);
    const ModalForcing f{s.c(), s.c(), s.c()};
    const ModalState x = solve_resolvent(lambda, b, f);
    const auto ref = oracle::resolvent_solve(lambda, sigma, p, {f.f, f.g, f.h});
    const ModalState d{x.u - Complex(ref[0]), x.v - Complex(ref[1]), x.theta - Complex(ref[2])};
    EXPECT_LT(modal_norm(d, b), 1e-10 * modal_norm(x, b));
  }
}

TEST(GlobalResolventNorm, StationaryEqualsLowModeMax) {
  const Params p = unit_params(0.5);
  const ScanRow row = global_resolvent_norm(0.0, p, DomainSpec::interval(1));
  double argmax = 0.0;
  const double ref = brute_force_max(0.0, p, 1000, &argmax);
  EXPECT_NEAR(row.resolvent_norm, ref, 1e-12 * ref);
  EXPECT_EQ(row.argmax_sigma, argmax);
  EXPECT_EQ(row.argmax_sigma, 1.0);
  EXPECT_TRUE(row.tail_ok);
}

TEST(GlobalResolventNorm, ResonanceNearPredictedScale) {
  const Params p = unit_params(0.5);
  const ScanRow row = global_resolvent_norm(100.0, p, DomainSpec::interval(1));
  double argmax = 0.0;
  const double ref = brute_force_max(100.0, p, 1000, &argmax);
  EXPECT_NEAR(row.resolvent_norm, ref, 1e-12 * ref);
  EXPECT_EQ(row.argmax_sigma, argmax);
  const double predicted = std::pow(100.0 * 100.0 * p.gamma, 1.0 / (2.0 - p.tau));
  EXPECT_GT(row.argmax_sigma, predicted / 4.0);
  EXPECT_LT(row.argmax_sigma, predicted * 4.0);
  EXPECT_TRUE(row.tail_ok);
}

TEST(GlobalResolventNorm, TailDecreasesPastArgmax) {
  const Params p = unit_params(0.75);
  const ScanRow row = global_resolvent_norm(300.0, p, DomainSpec::interval(1));
  const auto n0 = static_cast<std::size_t>(std::llround(std::sqrt(row.argmax_sigma)));
  const auto n1 = static_cast<std::size_t>(std::floor(std::sqrt(row.truncated_at)));
  double prev = INFINITY;
  for (std::size_t n = n0; n <= n1; ++n) {
    const double v = modal_resolvent_norm(300.0, build_modal_block(static_cast<double>(n * n), p));
    EXPECT_LE(v, prev) << "n=" << n;
    prev = v;
  }
}

TEST(GlobalResolventNorm, DenseBlockDiagonalOracle) {
  Sampler s(24);
  const auto sigmas = oracle::interval_spectrum(32);
  for (double tau : {0.0, 0.5, 1.0}) {
    const Params p = unit_params(tau);
    for (int i = 0; i < 5; ++i) {
      const double lambda = std::uniform_real_distribution<double>(0.0, 300.0)(s.rng);
      const double ref = oracle::dense_resolvent_norm(lambda, sigmas, p);
      const ScanRow row = global_resolvent_norm(lambda, p, DomainSpec::explicit_list(sigmas));
      EXPECT_NEAR(row.resolvent_norm, ref, 1e-8 * ref) << "lambda=" << lambda;
    }
  }
}

TEST(GlobalResolventNorm, TightPolicyFlagsTail) {
  TruncationPolicy tight;
  tight.safety = 1.0;
  tight.max_extensions = 0;
  const ScanRow row = global_resolvent_norm(1000.0, unit_params(0.5), DomainSpec::interval(1), tight);
  EXPECT_FALSE(row.tail_ok);
  EXPECT_EQ(row.argmax_sigma, row.truncated_at);
}

TEST(GlobalResolventNorm, RejectsBadInput) {
  EXPECT_THROW(global_resolvent_norm(NAN, unit_params(0.5), DomainSpec::interval(1)), InvalidGrid);
  TruncationPolicy bad;
  bad.safety = 0.5;
  EXPECT_THROW(global_resolvent_norm(1.0, unit_params(0.5), DomainSpec::interval(1), bad), InvalidParams);
}

TEST(ScanResolvent, AnalyticCaseDecaysLikeInverseLambda) {
  const std::vector<double> grid{1.0, 10.0, 100.0};
  const ScanResult scan = scan_resolvent(grid, unit_params(0.0), DomainSpec::interval(1));
  ASSERT_EQ(scan.rows.size(), 3u);
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : scan.rows) {
    lo = std::min(lo, r.lambda * r.resolvent_norm);
    hi = std::max(hi, r.lambda * r.resolvent_norm);
  }
  EXPECT_LT(hi / lo, 3.0);
}

TEST(ScanResolvent, IntermediateCaseAgainstBruteForce) {
  const Params p = unit_params(0.75);
  const auto grid = log_grid(1e2, 1e6, 17);
  const ScanResult scan = scan_resolvent(grid, p, DomainSpec::interval(1));
  ASSERT_EQ(scan.rows.size(), 17u);
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    EXPECT_GT(scan.rows[i].lambda, scan.rows[i - 1].lambda);
    EXPECT_LT(scan.rows[i].resolvent_norm, scan.rows[i - 1].resolvent_norm);
    EXPECT_TRUE(scan.rows[i].tail_ok);
  }
  for (std::size_t i : {0u, 4u, 8u}) {
    const auto& row = scan.rows[i];
    const auto n_max = static_cast<std::size_t>(std::floor(std::sqrt(row.truncated_at)));
    const double ref = brute_force_max(row.lambda, p, n_max);
    EXPECT_NEAR(row.resolvent_norm, ref, 1e-10 * ref);
  }
  const GevreyCertificate cert = gevrey_certificate(0.75);
  const double slope = -std::log(scan.rows.back().resolvent_norm / scan.rows.front().resolvent_norm) / std::log(1e4);
  EXPECT_GT(slope, cert.phi_theory - 0.05);
  EXPECT_LT(slope, cert.phi_ceiling + 0.05);
}

TEST(ScanResolvent, SingletonGrid) {
  const std::vector<double> grid{5.0};
  const ScanResult scan = scan_resolvent(grid, unit_params(0.5), DomainSpec::interval(1));
  ASSERT_EQ(scan.rows.size(), 1u);
  const ScanRow ref = global_resolvent_norm(5.0, unit_params(0.5), DomainSpec::interval(1));
  EXPECT_EQ(scan.rows[0].resolvent_norm, ref.resolvent_norm);
  EXPECT_EQ(scan.rows[0].argmax_sigma, ref.argmax_sigma);
}

TEST(ScanResolvent, ThreadCountDoesNotChangeRows) {
  const auto grid = log_grid(1.0, 1e2, 12);
  const ScanResult a = scan_resolvent(grid, unit_params(0.6), DomainSpec::square(1), {}, 1);
  const ScanResult b = scan_resolvent(grid, unit_params(0.6), DomainSpec::square(1), {}, 3);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].resolvent_norm, b.rows[i].resolvent_norm);
    EXPECT_EQ(a.rows[i].argmax_sigma, b.rows[i].argmax_sigma);
  }
}

TEST(ScanResolvent, RefinementChangesInterpolationLittle) {
  const Params p = unit_params(0.5);
  const auto fine = scan_resolvent(log_grid(1e2, 1e4, 17), p, DomainSpec::interval(1));
  for (std::size_t i = 1; i + 1 < fine.rows.size(); i += 2) {
    const double interpolated = std::sqrt(fine.rows[i - 1].resolvent_norm * fine.rows[i + 1].resolvent_norm);
    EXPECT_NEAR(fine.rows[i].resolvent_norm, interpolated, 0.1 * interpolated);
  }
}

TEST(ScanResolvent, RejectsBadGrids) {
  const Params p = unit_params(0.5);
  const auto d = DomainSpec::interval(1);
  EXPECT_THROW(scan_resolvent(std::vector<double>{}, p, d), InvalidGrid);
  EXPECT_THROW(scan_resolvent(std::vector<double>{1.0, 1.0}, p, d), InvalidGrid);
  EXPECT_THROW(scan_resolvent(std::vector<double>{2.0, 1.0}, p, d), InvalidGrid);
  EXPECT_THROW(scan_resolvent(std::vector<double>{-1.0, 1.0}, p, d), InvalidGrid);
  EXPECT_THROW(scan_resolvent(std::vector<double>{1.0, INFINITY}, p, d), InvalidGrid);
  EXPECT_THROW(log_grid(0.0, 1.0, 5), InvalidGrid);
  EXPECT_THROW(log_grid(1.0, 10.0, 1), InvalidGrid);
}

TEST(LogGrid, EndpointsAndSpacing) {
  const auto g = log_grid(1e2, 1e6, 33);
  ASSERT_EQ(g.size(), 33u);
  EXPECT_EQ(g.front(), 1e2);
  EXPECT_EQ(g.back(), 1e6);
  EXPECT_NEAR(g[8], 1e3, 1e-9);
}

TEST(ResonanceScale, GrowsWithLambda) {
  const Params p = unit_params(0.5);
  EXPECT_LT(resonance_scale(10.0, p), resonance_scale(100.0, p));
  EXPECT_NEAR(resonance_scale(100.0, p), std::pow(1e4, 2.0 / 3.0), 0.05 * std::pow(1e4, 2.0 / 3.0));
}

TEST(ProofFunctionals, EnergyIdentity) {
  Sampler s(25);
  for (int i = 0; i < 100; ++i) {
    const Params p = s.params();
    std::vector<ModalForcing> forcing(12);
    for (auto& f : forcing) f = {s.c(), s.c(), s.c()};
    const double lambda = s.log_uniform(1e-2, 1e4);
    const ProofDiagnostics d = proof_functionals(lambda, forcing, p, DomainSpec::square(12));
    EXPECT_GE(d.theta_halfnorm_sq, 0.0);
    EXPECT_NEAR(d.theta_halfnorm_sq, d.re_forcing_inner, 1e-10 * d.forcing_norm * d.solution_norm);
    EXPECT_NEAR(d.lemma1_ratio, d.solution_norm / d.forcing_norm, 1e-12 * d.lemma1_ratio);
    EXPECT_GE(d.lemma8_ratio, 0.0);
  }
}

TEST(ProofFunctionals, SingleModeRecordMatchesDenseSolve) {
  const Params p = unit_params(0.5);
  std::vector<ModalForcing> forcing{{0.0, 1.0, 0.0}};
  const ProofDiagnostics d = proof_functionals(1.0, forcing, p, DomainSpec::interval(1));
  const auto x = oracle::resolvent_solve(1.0L, 1.0L, p, {0.0L, 1.0L, 0.0L});
  // weights at σ = 1, τ = 1/2: (1, 2, 1); velocity forcing has norm sqrt(2)
  const long double u2 = std::norm(x[0]) + 2.0L * std::norm(x[1]) + std::norm(x[2]);
  EXPECT_NEAR(d.forcing_norm, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.solution_norm, static_cast<double>(std::sqrt(u2)), 1e-13);
  EXPECT_NEAR(d.re_forcing_inner, static_cast<double>(2.0L * x[1].real()), 1e-13);
  EXPECT_NEAR(d.theta_halfnorm_sq, static_cast<double>(std::norm(x[2])), 1e-13);
  EXPECT_NEAR(d.lemma1_ratio, d.solution_norm / d.forcing_norm, 1e-13);
}

TEST(ProofFunctionals, WitnessForcingReproducesWitnessNorm) {
  for (double tau : {0.5, 1.0}) {
    const Params p = unit_params(tau);
    const auto rows = witness_sequence(p, 1, 6, DomainSpec::interval(1));
    for (const auto& row : rows) {
      std::vector<ModalForcing> forcing(static_cast<std::size_t>(row.n));
      forcing.back() = {0.0, -std::pow(row.sigma, -tau / 2.0), 0.0};
      const ProofDiagnostics d = proof_functionals(row.lambda_n, forcing, p, DomainSpec::interval(forcing.size()));
      EXPECT_NEAR(d.solution_norm, row.u_norm_H, 1e-10 * row.u_norm_H) << "n=" << row.n;
    }
  }
}

TEST(ProofFunctionals, Errors) {
  const Params p = unit_params(0.5);
  std::vector<ModalForcing> zero(3);
  EXPECT_THROW(proof_functionals(1.0, zero, p, DomainSpec::interval(3)), UndefinedRatio);
  std::vector<ModalForcing> two{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  EXPECT_THROW(proof_functionals(1.0, two, p, DomainSpec::interval(3)), InvalidDomain);
}
