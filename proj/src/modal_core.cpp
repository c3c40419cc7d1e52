#include "thermoplate/modal_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermoplate/errors.hpp"

namespace thermoplate {

void Params::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(gamma)) throw InvalidParams("gamma must be positive, got " + std::to_string(gamma));
  if (!positive(alpha)) throw InvalidParams("alpha must be positive, got " + std::to_string(alpha));
  if (!positive(beta)) throw InvalidParams("beta must be positive, got " + std::to_string(beta));
  if (!positive(kappa)) throw InvalidParams("kappa must be positive, got " + std::to_string(kappa));
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidParams("tau must lie in [0, 1], got " + std::to_string(tau));
}

DomainSpec DomainSpec::interval(std::size_t count) { return {DomainKind::interval, count, {}}; }
DomainSpec DomainSpec::square(std::size_t count) { return {DomainKind::square, count, {}}; }

DomainSpec DomainSpec::explicit_list(std::vector<double> sigmas) {
  const std::size_t n = sigmas.size();
  return {DomainKind::explicit_list, n, std::move(sigmas)};
}

namespace {

void check_explicit(const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw InvalidDomain("explicit eigenvalue list is empty");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(std::isfinite(sigmas[i]) && sigmas[i] > 0.0))
      throw InvalidDomain("explicit eigenvalues must be positive and finite");
    if (i > 0 && sigmas[i] < sigmas[i - 1])
      throw InvalidDomain("explicit eigenvalues must be sorted ascending");
  }
}

// Sorted j²+k² (j,k >= 1) not exceeding `limit`, multiplicities kept.
std::vector<double> square_values_up_to(double limit, std::size_t max_modes) {
  std::vector<double> out;
  for (std::size_t j = 1; static_cast<double>(j * j) + 1.0 <= limit; ++j) {
    const double jj = static_cast<double>(j * j);
    for (std::size_t k = 1; jj + static_cast<double>(k * k) <= limit; ++k) {
      out.push_back(jj + static_cast<double>(k * k));
      if (out.size() > max_modes)
        throw TruncationError("square domain: more than " + std::to_string(max_modes) +
                              " modes below the requested cutoff");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> mode_spectrum(const DomainSpec& domain) {
  if (domain.count == 0) throw InvalidDomain("mode count must be at least 1");
  switch (domain.kind) {
    case DomainKind::interval: {
      std::vector<double> out(domain.count);
      for (std::size_t n = 1; n <= domain.count; ++n) out[n - 1] = static_cast<double>(n * n);
      return out;
    }
    case DomainKind::square: {
      // The count-th smallest j²+k² is at most ~ 4·count/π + O(sqrt(count));
      // grow the radius until enough values are available.
      double limit = 2.0 * static_cast<double>(domain.count) + 8.0;
      for (;;) {
        auto values = square_values_up_to(limit, static_cast<std::size_t>(-1));
        if (values.size() >= domain.count) {
          values.resize(domain.count);
          return values;
        }
        limit *= 2.0;
      }
    }
    case DomainKind::explicit_list: {
      check_explicit(domain.sigmas);
      if (domain.count > domain.sigmas.size())
        throw InvalidDomain("explicit list has fewer eigenvalues than requested");
      return {domain.sigmas.begin(), domain.sigmas.begin() + static_cast<std::ptrdiff_t>(domain.count)};
    }
  }
  throw InvalidDomain("unknown domain kind");
}

std::vector<double> modes_up_to(const DomainSpec& domain, double sigma_max, std::size_t max_modes) {
  switch (domain.kind) {
    case DomainKind::interval: {
      const double nmax = std::floor(std::sqrt(std::max(sigma_max, 0.0)));
      if (nmax > static_cast<double>(max_modes))
        throw TruncationError("interval domain: more than " + std::to_string(max_modes) +
                              " modes below the requested cutoff");
      const auto n = static_cast<std::size_t>(nmax);
      std::vector<double> out(n);
      for (std::size_t k = 1; k <= n; ++k) out[k - 1] = static_cast<double>(k * k);
      return out;
    }
    case DomainKind::square:
      return square_values_up_to(sigma_max, max_modes);
    case DomainKind::explicit_list: {
      check_explicit(domain.sigmas);
      std::vector<double> out;
      for (double s : domain.sigmas)
        if (s <= sigma_max) out.push_back(s);
      return out;
    }
  }
  throw InvalidDomain("unknown domain kind");
}

double inertia_factor(double sigma, const Params& params) {
  return 1.0 + params.gamma * std::pow(sigma, params.tau);
}

ModalBlock build_modal_block(double sigma, const Params& params) {
  if (!(std::isfinite(sigma) && sigma > 0.0))
    throw InvalidMode("mode eigenvalue must be positive, got " + std::to_string(sigma));
  params.validate();
  const double d = inertia_factor(sigma, params);
  ModalBlock block;
  block.sigma = sigma;
  Mat3c& m = block.matrix;
  m(0, 1) = 1.0;
  m(1, 0) = -sigma * sigma / d;
  m(1, 2) = params.alpha * sigma / d;
  m(2, 1) = -params.beta * sigma;
  m(2, 2) = -params.kappa * sigma;
  block.weights = {params.beta * sigma * sigma, params.beta * d, params.alpha};
  return block;
}

Mat3c ModalBlock::weighted_matrix() const {
  const std::array<double, 3> s{std::sqrt(weights[0]), std::sqrt(weights[1]), std::sqrt(weights[2])};
  Mat3c out;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) out(r, c) = matrix(r, c) * (s[r] / s[c]);
  return out;
}

CharPoly characteristic_polynomial(double sigma, const Params& params) {
  const double d = inertia_factor(sigma, params);
  return {params.kappa * sigma, (1.0 + params.alpha * params.beta) * sigma * sigma / d,
          params.kappa * sigma * sigma * sigma / d};
}

Complex modal_inner(const ModalState& x, const ModalState& y, const ModalBlock& block) {
  return block.weights[0] * x.u * std::conj(y.u) + block.weights[1] * x.v * std::conj(y.v) +
         block.weights[2] * x.theta * std::conj(y.theta);
}

double modal_norm(const ModalState& state, const ModalBlock& block) {
  return std::sqrt(block.weights[0] * std::norm(state.u) + block.weights[1] * std::norm(state.v) +
                   block.weights[2] * std::norm(state.theta));
}

ModalState apply_block(const ModalBlock& block, const ModalState& state) {
  return ModalState::from(block.matrix * state.vec());
}

DissipationResidual dissipation_residual(const ModalState& state, const ModalBlock& block,
                                         const Params& params) {
  const ModalState image = apply_block(block, state);
  return {modal_inner(image, state, block).real(),
          -params.kappa * params.alpha * block.sigma * std::norm(state.theta)};
}

ModalState solve_stationary(const ModalForcing& forcing, const ModalBlock& block, const Params&) {
  return ModalState::from(solve(block.matrix, forcing.vec()));
}

}  // namespace thermoplate
