#include "thermoplate/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thermoplate/errors.hpp"
#include "thermoplate/parallel.hpp"

namespace thermoplate {

void TruncationPolicy::validate() const {
  if (!(safety >= 1.0)) throw InvalidParams("truncation safety must be >= 1");
  if (tail_decades < 1) throw InvalidParams("tail_decades must be >= 1");
  if (max_extensions < 0) throw InvalidParams("max_extensions must be >= 0");
  if (max_modes == 0) throw InvalidParams("max_modes must be positive");
}

double resonance_scale(double lambda, const Params& params) {
  return std::pow(1.0 + std::abs(lambda), 2.0 / (2.0 - params.tau));
}

Mat3c weighted_resolvent(double lambda, const ModalBlock& block) {
  const Mat3c shifted = Mat3c::diagonal({Complex{0.0, lambda}, Complex{0.0, lambda}, Complex{0.0, lambda}}) -
                        block.weighted_matrix();
  try {
    return inverse(shifted);
  } catch (const SingularBlock&) {
    throw IllConditionedBlock("shifted block iλI - B is singular at lambda = " + std::to_string(lambda) +
                                  ", sigma = " + std::to_string(block.sigma),
                              std::numeric_limits<double>::infinity());
  }
}

double modal_resolvent_norm(double lambda, const ModalBlock& block) {
  const Mat3c r = weighted_resolvent(lambda, block);
  const double value = largest_singular_value(r);
  if (!std::isfinite(value) || value <= 0.0) {
    const Mat3c shifted =
        Mat3c::diagonal({Complex{0.0, lambda}, Complex{0.0, lambda}, Complex{0.0, lambda}}) -
        block.weighted_matrix();
    throw IllConditionedBlock("resolvent norm not finite at sigma = " + std::to_string(block.sigma),
                              norm_frobenius(shifted) * norm_frobenius(r));
  }
  return value;
}

ModalState solve_resolvent(double lambda, const ModalBlock& block, const ModalForcing& forcing) {
  const Mat3c shifted =
      Mat3c::diagonal({Complex{0.0, lambda}, Complex{0.0, lambda}, Complex{0.0, lambda}}) - block.matrix;
  try {
    return ModalState::from(solve(shifted, forcing.vec()));
  } catch (const SingularBlock&) {
    throw IllConditionedBlock("resolvent solve failed at sigma = " + std::to_string(block.sigma),
                              std::numeric_limits<double>::infinity());
  }
}

ScanRow global_resolvent_norm(double lambda, const Params& params, const DomainSpec& domain,
                              const TruncationPolicy& policy) {
  params.validate();
  policy.validate();
  if (!std::isfinite(lambda)) throw InvalidGrid("lambda must be finite");

  double cutoff = policy.safety * resonance_scale(lambda, params);
  const double tail_factor = std::pow(10.0, policy.tail_decades);

  std::vector<double> sigmas;  // examined modes, ascending, distinct
  std::vector<double> norms;
  ScanRow row;
  row.lambda = lambda;

  for (int ext = 0;; ++ext) {
    const auto modes = modes_up_to(domain, cutoff, policy.max_modes);
    const double examined_before = sigmas.empty() ? 0.0 : sigmas.back();
    for (double s : modes) {
      if (s <= examined_before) continue;
      if (!sigmas.empty() && s == sigmas.back()) continue;
      const double value = modal_resolvent_norm(lambda, build_modal_block(s, params));
      sigmas.push_back(s);
      norms.push_back(value);
      // Strict comparison keeps the smallest σ on ties.
      if (value > row.resolvent_norm) {
        row.resolvent_norm = value;
        row.argmax_sigma = s;
      }
    }
    if (sigmas.empty()) {
      if (domain.kind == DomainKind::explicit_list) throw InvalidDomain("explicit list yields no modes");
      if (ext >= policy.max_extensions) throw TruncationError("no modes below the truncation cutoff");
      cutoff *= 10.0;
      continue;
    }
    row.truncated_at = sigmas.back();

    const bool exhausted =
        domain.kind == DomainKind::explicit_list && domain.sigmas.back() <= cutoff;
    if (exhausted) {
      row.tail_ok = true;
      break;
    }
    const double tail_lo = cutoff / tail_factor;
    const auto first = std::upper_bound(sigmas.begin(), sigmas.end(), tail_lo);
    const auto offset = first - sigmas.begin();
    bool ok = first != sigmas.end();
    for (auto it = norms.begin() + offset; ok && it != norms.end(); ++it)
      ok = *it < 0.5 * row.resolvent_norm;
    row.tail_ok = ok;
    if (ok || ext >= policy.max_extensions) break;
    cutoff *= 10.0;
  }
  return row;
}

ScanResult scan_resolvent(std::span<const double> lambdas, const Params& params,
                          const DomainSpec& domain, const TruncationPolicy& policy, unsigned threads) {
  params.validate();
  policy.validate();
  if (lambdas.empty()) throw InvalidGrid("lambda grid is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!std::isfinite(lambdas[i]) || lambdas[i] < 0.0)
      throw InvalidGrid("lambda grid values must be finite and non-negative");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw InvalidGrid("lambda grid must be strictly increasing");
  }
  ScanResult result{params, domain, std::vector<ScanRow>(lambdas.size())};
  parallel_for(lambdas.size(), threads, [&](std::size_t i) {
    result.rows[i] = global_resolvent_norm(lambdas[i], params, domain, policy);
  });
  return result;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw InvalidGrid("log grid needs 0 < lo < hi and >= 2 points");
  std::vector<double> out(points);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

ProofDiagnostics proof_functionals(double lambda, std::span<const ModalForcing> forcing,
                                   const Params& params, const DomainSpec& domain) {
  params.validate();
  const auto sigmas = mode_spectrum(domain);
  if (forcing.size() != sigmas.size())
    throw InvalidDomain("forcing list length " + std::to_string(forcing.size()) +
                        " does not match mode count " + std::to_string(sigmas.size()));

  double f_sq = 0.0, u_sq = 0.0, re_inner = 0.0, theta_half = 0.0;
  double au_sq = 0.0, theta_sq = 0.0, v_tau_sq = 0.0, v_half_sq = 0.0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const ModalBlock block = build_modal_block(sigmas[i], params);
    const ModalState f{forcing[i].f, forcing[i].g, forcing[i].h};
    const ModalState x = solve_resolvent(lambda, block, forcing[i]);
    const double s = sigmas[i];
    f_sq += std::pow(modal_norm(f, block), 2);
    u_sq += std::pow(modal_norm(x, block), 2);
    re_inner += modal_inner(f, x, block).real();
    theta_half += s * std::norm(x.theta);
    au_sq += s * s * std::norm(x.u);
    theta_sq += std::norm(x.theta);
    v_tau_sq += block.weights[1] / params.beta * std::norm(x.v);
    v_half_sq += s * std::norm(x.v);
  }
  if (f_sq == 0.0) throw UndefinedRatio("proof functionals need nonzero forcing");

  ProofDiagnostics d;
  d.lambda = lambda;
  d.forcing_norm = std::sqrt(f_sq);
  d.solution_norm = std::sqrt(u_sq);
  d.re_forcing_inner = re_inner;
  d.theta_halfnorm_sq = params.kappa * params.alpha * theta_half;
  const double fu = d.forcing_norm * d.solution_norm;
  const double abs_lambda = std::abs(lambda);
  d.lemma1_ratio = u_sq / fu;
  d.lemma2_gap = abs_lambda * (params.beta * au_sq + params.alpha * theta_sq) -
                 params.beta * abs_lambda * v_tau_sq;
  d.lemma2_ratio = d.lemma2_gap / fu;
  d.lemma8_ratio = v_half_sq / fu;
  return d;
}

}  // namespace thermoplate
