#pragma once

// Reference computations used to verify the core library. Each builds the
// modal generator directly from the parameters and uses general-purpose dense
// methods (Eigen decompositions, an adaptive Runge-Kutta integrator,
// enumeration) rather than the closed-form paths of the library.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "thermoplate/modal_core.hpp"

namespace thermoplate::oracle {

using ComplexL = std::complex<long double>;

/// Weighted generator W B_σ W^{-1} in extended precision, built from the
/// plate equations.
std::array<std::array<long double, 3>, 3> weighted_generator(long double sigma, const Params& params);

/// Spectral norm of the weighted resolvent of one mode (Jacobi SVD, long double).
long double modal_resolvent_norm(long double lambda, long double sigma, const Params& params);

/// Spectral norm of the full block-diagonal weighted resolvent over `sigmas`
/// (dense 3N x 3N LU inverse + Jacobi SVD, double precision).
double dense_resolvent_norm(double lambda, const std::vector<double>& sigmas, const Params& params);

/// Dense solve of (iλI - B_σ) x = F in the unweighted frame (full-pivot LU, long double).
std::array<ComplexL, 3> resolvent_solve(long double lambda, long double sigma, const Params& params,
                                        const std::array<ComplexL, 3>& forcing);

/// Dense solve of B_σ x = F (full-pivot LU, long double).
std::array<ComplexL, 3> stationary_solve(long double sigma, const Params& params,
                                         const std::array<ComplexL, 3>& forcing);

/// Eigenvalues of B_σ from a long-double real eigensolver, ordered by
/// descending real part.
std::array<ComplexL, 3> eigenvalues(long double sigma, const Params& params);

/// Weighted quadratic form Re<B x, x> expanded term by term in long double.
long double dissipation_form(long double sigma, const Params& params, const std::array<ComplexL, 3>& x);

/// Integrates x' = B_σ x from 0 to each requested time with an adaptive
/// Dormand-Prince 5(4) scheme in long double. `times` must be increasing.
std::vector<std::array<ComplexL, 3>> integrate(long double sigma, const Params& params,
                                               const std::array<ComplexL, 3>& x0,
                                               const std::vector<double>& times, long double rtol = 1e-15L);

/// exp(t B_σ) column by column from the integrator.
std::array<std::array<ComplexL, 3>, 3> propagator(long double sigma, const Params& params, double t,
                                                  long double rtol = 1e-15L);

/// Brute-force sorted {n²} and sorted {j²+k²}, first `count` values.
std::vector<double> interval_spectrum(std::size_t count);
std::vector<double> square_spectrum(std::size_t count);

}  // namespace thermoplate::oracle
