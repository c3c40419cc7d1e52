#pragma once

// Resolvent norms ||(iλI - B)^{-1}|| on the imaginary axis, measured in the
// phase-space norm. The generator is block diagonal over eigenmodes, so the
// global norm is the supremum of the per-mode norms; the supremum is taken
// over a window of modes around the resonance scale σ* ~ (γλ²)^{1/(2-τ)}.

#include <cstddef>
#include <span>
#include <vector>

#include "thermoplate/modal_core.hpp"

namespace thermoplate {

struct TruncationPolicy {
  double safety = 8.0;     // multiple of the resonance scale examined first
  int tail_decades = 1;    // trailing σ-decades that must sit below half the max
  int max_extensions = 3;  // times the window may grow tenfold before flagging
  std::size_t max_modes = 20'000'000;

  void validate() const;
};

struct ScanRow {
  double lambda = 0.0;
  double resolvent_norm = 0.0;
  double argmax_sigma = 0.0;  // smallest σ attaining the max
  double truncated_at = 0.0;  // largest σ examined
  bool tail_ok = false;
};

struct ScanResult {
  Params params;
  DomainSpec domain;
  std::vector<ScanRow> rows;
};

/// Quantities appearing in the frequency-domain energy estimates, aggregated
/// over all forced modes.
struct ProofDiagnostics {
  double lambda = 0.0;
  double forcing_norm = 0.0;        // ||F||_H
  double solution_norm = 0.0;       // ||U||_H
  double re_forcing_inner = 0.0;    // Re<F, U>_H
  double theta_halfnorm_sq = 0.0;   // κα ||A^{1/2} θ||²
  double lemma1_ratio = 0.0;        // ||U||² / (||F|| ||U||)
  double lemma2_gap = 0.0;          // |λ|[β||Au||² + α||θ||²] - β|λ| ||v||²_{D(A^{τ/2})}
  double lemma2_ratio = 0.0;        // lemma2_gap / (||F|| ||U||)
  double lemma8_ratio = 0.0;        // ||A^{1/2} v||² / (||F|| ||U||)
};

/// (1+|λ|)^{2/(2-τ)}: the σ at which the undamped plate frequency σ/sqrt(1+γσ^τ)
/// reaches |λ| (for γ = 1, up to lower-order terms).
double resonance_scale(double lambda, const Params& params);

/// W (iλI - B_σ)^{-1} W^{-1}; its spectral norm is the weighted resolvent norm.
/// Throws IllConditionedBlock if the shifted block cannot be inverted.
Mat3c weighted_resolvent(double lambda, const ModalBlock& block);

double modal_resolvent_norm(double lambda, const ModalBlock& block);

/// Solves (iλI - B_σ) x = F for one mode.
ModalState solve_resolvent(double lambda, const ModalBlock& block, const ModalForcing& forcing);

ScanRow global_resolvent_norm(double lambda, const Params& params, const DomainSpec& domain,
                              const TruncationPolicy& policy = {});

/// One row per λ. The grid must be non-empty, finite, non-negative and
/// strictly increasing (InvalidGrid otherwise). Rows flagged with
/// tail_ok = false are kept.
ScanResult scan_resolvent(std::span<const double> lambdas, const Params& params,
                          const DomainSpec& domain, const TruncationPolicy& policy = {},
                          unsigned threads = 1);

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Solves the resolvent system for forcing[i] on the i-th mode of `domain`
/// and aggregates the energy functionals. forcing.size() must equal the
/// domain's mode count. Throws UndefinedRatio for zero forcing.
ProofDiagnostics proof_functionals(double lambda, std::span<const ModalForcing> forcing,
                                   const Params& params, const DomainSpec& domain);

}  // namespace thermoplate
