#pragma once

// Parameters, eigenvalue sequences of the hinged/Dirichlet Laplacian, and the
// 3x3 generator block acting on one eigenmode.
//
// With hinged plate and Dirichlet temperature conditions every operator in the
// system is a function of A = -Δ, so the generator splits into independent
// blocks, one per eigenvalue σ of A. On the L²-normalized eigenfunction the
// state (u, v, θ) evolves under
//
//        [      0          1          0       ]
//   B_σ = [ -σ²/(1+γσ^τ)   0    ασ/(1+γσ^τ)  ]
//        [      0        -βσ        -κσ      ]
//
// and the phase-space norm reduces to weights (βσ², β(1+γσ^τ), α).

#include <array>
#include <cstddef>
#include <vector>

#include "thermoplate/linalg3.hpp"

namespace thermoplate {

/// Physical and coupling constants of the plate system.
struct Params {
  double gamma = 1.0;  // rotational inertia coefficient
  double tau = 0.5;    // fractional power of the inertia term, in [0, 1]
  double alpha = 1.0;  // coupling in the plate equation
  double beta = 1.0;   // coupling in the heat equation
  double kappa = 1.0;  // heat conduction

  /// Throws InvalidParams unless gamma, alpha, beta, kappa > 0 and 0 <= tau <= 1.
  void validate() const;
};

enum class DomainKind { interval, square, explicit_list };

/// Which eigenvalue sequence of A to use. Interval is (0,π) with σ_n = n²,
/// square is (0,π)² with σ = j²+k² (multiplicities kept).
struct DomainSpec {
  DomainKind kind = DomainKind::interval;
  std::size_t count = 1;
  std::vector<double> sigmas;  // explicit_list only

  static DomainSpec interval(std::size_t count);
  static DomainSpec square(std::size_t count);
  static DomainSpec explicit_list(std::vector<double> sigmas);
};

struct ModalState {
  Complex u{};
  Complex v{};
  Complex theta{};

  Vec3c vec() const { return {u, v, theta}; }
  static ModalState from(const Vec3c& x) { return {x[0], x[1], x[2]}; }
};

/// Right-hand side F = (f, g, h) restricted to one mode.
struct ModalForcing {
  Complex f{};
  Complex g{};
  Complex h{};

  Vec3c vec() const { return {f, g, h}; }
};

struct ModalBlock {
  double sigma = 0.0;
  Mat3c matrix;
  std::array<double, 3> weights{};  // (w_u, w_v, w_θ)

  /// W B W^{-1} with W = diag(sqrt(weights)); the generator in coordinates
  /// where the phase-space norm is the Euclidean one.
  Mat3c weighted_matrix() const;
  /// The factor 1 + γσ^τ, recovered from the weights.
  double inertia(const Params& params) const { return weights[1] / params.beta; }
};

/// Coefficients of the monic characteristic polynomial z³ + p z² + q z + r.
struct CharPoly {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;

  bool routh_hurwitz_stable() const { return p > 0.0 && q > 0.0 && r > 0.0 && p * q > r; }
};

/// First `count` eigenvalues of A for the domain, ascending.
std::vector<double> mode_spectrum(const DomainSpec& domain);

/// All eigenvalues σ <= sigma_max, ascending. Explicit lists return the
/// listed values in range. Throws TruncationError when more than max_modes
/// values would be produced.
std::vector<double> modes_up_to(const DomainSpec& domain, double sigma_max,
                                std::size_t max_modes);

/// 1 + γσ^τ.
double inertia_factor(double sigma, const Params& params);

ModalBlock build_modal_block(double sigma, const Params& params);

CharPoly characteristic_polynomial(double sigma, const Params& params);

/// Weighted inner product <x, y> = Σ w_i x_i conj(y_i).
Complex modal_inner(const ModalState& x, const ModalState& y, const ModalBlock& block);

double modal_norm(const ModalState& state, const ModalBlock& block);

ModalState apply_block(const ModalBlock& block, const ModalState& state);

struct DissipationResidual {
  double lhs = 0.0;  // Re<B x, x>
  double rhs = 0.0;  // -κασ|θ|²
};

DissipationResidual dissipation_residual(const ModalState& state, const ModalBlock& block,
                                         const Params& params);

/// Solves B_σ x = (f, g, h), i.e. v = f, -σ²u + ασθ = (1+γσ^τ) g,
/// -κσθ - βσv = h. Throws SingularBlock if the block cannot be inverted.
ModalState solve_stationary(const ModalForcing& forcing, const ModalBlock& block,
                            const Params& params);

}  // namespace thermoplate
