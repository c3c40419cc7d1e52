#pragma once

// Regularity verdicts built from resolvent data and closed forms: Gevrey
// exponent bands, the non-analyticity witness sequence, and the spectral
// abscissa.

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thermoplate/modal_core.hpp"
#include "thermoplate/resolvent.hpp"

namespace thermoplate {

enum class GevreyRegime {
  analytic,     // τ = 0: resolvent decays like 1/|λ|
  comparative,  // 0 < τ < 1/2: earlier bound s > (2-τ)/(2-4τ)
  main,         // 1/2 <= τ < 1: s > (3-τ)/(2-2τ)
};

struct GevreyCertificate {
  double tau = 0.0;
  GevreyRegime regime = GevreyRegime::main;
  double phi_theory = 0.0;   // guaranteed resolvent decay exponent
  double s_bound = 0.0;      // 1 / phi_theory
  double phi_ceiling = 0.0;  // (2-2τ)/(2-τ): no faster decay is possible
  std::string note;
};

/// Throws OutOfRange for τ outside [0, 1).
GevreyCertificate gevrey_certificate(double tau);

struct FitReport {
  double exponent = 0.0;  // negated slope for decay fits, slope for growth fits
  double std_error = 0.0;
  double intercept = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares of log y on log x. Returns the raw slope in
/// `exponent`. Needs >= 8 points with positive coordinates.
FitReport fit_log_log(std::span<const double> x, std::span<const double> y);

/// Decay exponent of the resolvent norm over the rows with λ in [lo, hi].
/// Throws FitWindowError (< 8 rows) or UnreliableDataError (flagged rows).
FitReport fit_decay_exponent(const ScanResult& scan, std::pair<double, double> window);

struct WitnessRow {
  int n = 0;
  double sigma = 0.0;
  double lambda_n = 0.0;  // sqrt(σ² / (1 + γσ^τ))
  double mu_abs = 0.0;
  double nu_abs = 0.0;
  double u_norm_H = 0.0;       // ||U_n|| with the γ-weighted velocity norm
  double u_norm_power = 0.0;   // ||U_n|| with the pure ||A^{τ/2} v|| velocity norm
  double growth = 0.0;         // lambda_n * u_norm_H
};

struct WitnessCoefficients {
  Complex mu;
  Complex nu;
};

/// Resonant frequency sqrt(σ²/(1+γσ^τ)) of mode σ.
double witness_frequency(double sigma, const Params& params);

/// Solves
///   {λ²(1+γσ^τ) - σ²} μ + ασ ν = 1 + γσ^τ
///   iλβσ μ + (iλ + κσ) ν = 0
/// by elimination at the given λ.
WitnessCoefficients witness_coefficients(double sigma, double lambda, const Params& params);

/// Rows n = n_first..n_last (1-based mode indices into the domain).
/// Throws WitnessInapplicable for τ = 0.
std::vector<WitnessRow> witness_sequence(const Params& params, int n_first, int n_last,
                                         const DomainSpec& domain);

/// Slope of log(growth) against log(lambda_n); expected τ/(2-τ).
FitReport witness_growth_exponent(std::span<const WitnessRow> rows);

struct ModeAbscissa {
  double sigma = 0.0;
  double re_root_max = 0.0;
  double im_root_at_max = 0.0;
};

struct AbscissaReport {
  double sup_real = 0.0;
  double argmax_sigma = 0.0;
  std::vector<ModeAbscissa> per_mode;
};

/// Eigenvalues of B_σ from the characteristic cubic, ordered by descending
/// real part (ties: larger imaginary part first).
std::array<Complex, 3> modal_eigenvalues(double sigma, const Params& params);

/// Scans the first `count` modes. Throws StabilityViolation if any root has
/// nonnegative real part.
AbscissaReport spectral_abscissa(const Params& params, const DomainSpec& domain, std::size_t count);

}  // namespace thermoplate
