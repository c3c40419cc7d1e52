#pragma once

// Exact time evolution of the plate system mode by mode: each modal state
// moves under exp(t B_σ), so energies are sampled without time-stepping error.

#include <span>
#include <utility>
#include <vector>

#include "thermoplate/modal_core.hpp"

namespace thermoplate {

enum class PropagatorMethod { eigendecomposition, pade };

/// exp(t B_σ) for one block. Diagonalizes once when the eigenvalues are
/// well separated (min gap > 1e-6 ||B_σ||, measured in the weighted frame),
/// otherwise falls back to scaling and squaring with a [13/13] Padé
/// approximant.
class ModalPropagator {
 public:
  explicit ModalPropagator(const ModalBlock& block);

  PropagatorMethod method() const { return method_; }
  Mat3c at(double t) const;

 private:
  Mat3c weighted_;  // W B W^{-1}
  std::array<double, 3> scale_{};  // sqrt of the norm weights
  PropagatorMethod method_ = PropagatorMethod::pade;
  std::array<Complex, 3> eigenvalues_{};
  Mat3c vectors_;
  Mat3c vectors_inv_;
};

Mat3c modal_propagator(const ModalBlock& block, double t);

/// exp(m) by scaling and squaring with the degree-13 Padé approximant.
Mat3c expm_pade(const Mat3c& m);

struct InitialData {
  std::vector<std::pair<double, ModalState>> modes;  // (σ, coefficients of u0, u1, θ0)

  /// Distinct positive σ; when `domain` is given, each σ must belong to it.
  void validate(const DomainSpec* domain = nullptr) const;
};

struct SimTrace {
  std::vector<double> times;
  std::vector<double> energies;           // ½ ||U(t)||²_H
  std::vector<double> theta_dissipation;  // κα ||A^{1/2} θ(t)||²
};

/// Samples the solution at `times` (non-negative, strictly increasing).
/// Empty initial data gives an empty trace.
SimTrace simulate(const InitialData& data, const Params& params, std::span<const double> times,
                  unsigned threads = 1);

/// Half the least-squares slope of log E(t) over samples with t in the window.
/// Throws FitWindowError (< 8 samples) or ShrinkWindowError (energy underflow).
double decay_rate_estimate(const SimTrace& trace, std::pair<double, double> window);

/// Projects functions sampled on a uniform grid of [0, π] (endpoints
/// included) onto the first n_modes sine modes of the interval domain.
InitialData project_interval_samples(std::span<const double> u0, std::span<const double> u1,
                                     std::span<const double> theta0, std::size_t n_modes);

}  // namespace thermoplate
