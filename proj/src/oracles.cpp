#include "thermoplate/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermoplate::oracle {

namespace {

using MatL = Eigen::Matrix<long double, 3, 3>;
using MatCL = Eigen::Matrix<ComplexL, 3, 3>;
using VecCL = Eigen::Matrix<ComplexL, 3, 1>;

struct Generator {
  MatL b;                 // unweighted B_σ
  std::array<long double, 3> w;  // norm weights
};

Generator generator(long double sigma, const Params& params) {
  const long double gamma = params.gamma, tau = params.tau, alpha = params.alpha, beta = params.beta,
                    kappa = params.kappa;
  const long double inertia = 1.0L + gamma * std::pow(sigma, tau);
  Generator g;
  g.b << 0.0L, 1.0L, 0.0L,
      -sigma * sigma / inertia, 0.0L, alpha * sigma / inertia,
      0.0L, -beta * sigma, -kappa * sigma;
  g.w = {beta * sigma * sigma, beta * inertia, alpha};
  return g;
}

std::array<ComplexL, 3> to_array(const VecCL& v) { return {v(0), v(1), v(2)}; }

}  // namespace

std::array<std::array<long double, 3>, 3> weighted_generator(long double sigma, const Params& params) {
  const Generator g = generator(sigma, params);
  std::array<std::array<long double, 3>, 3> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[r][c] = g.b(r, c) * std::sqrt(g.w[r]) / std::sqrt(g.w[c]);
  return out;
}

long double modal_resolvent_norm(long double lambda, long double sigma, const Params& params) {
  const auto bw = weighted_generator(sigma, params);
  MatCL shifted;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) shifted(r, c) = ComplexL(r == c ? 0.0L : 0.0L, r == c ? lambda : 0.0L) - bw[r][c];
  const MatCL inv = shifted.fullPivLu().inverse();
  Eigen::JacobiSVD<MatCL> svd(inv);
  return svd.singularValues()(0);
}

double dense_resolvent_norm(double lambda, const std::vector<double>& sigmas, const Params& params) {
  const Eigen::Index n = static_cast<Eigen::Index>(3 * sigmas.size());
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXd w(n);
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const Generator g = generator(sigmas[k], params);
    for (int r = 0; r < 3; ++r) {
      w(3 * k + r) = std::sqrt(static_cast<double>(g.w[r]));
      for (int c = 0; c < 3; ++c) b(3 * k + r, 3 * k + c) = static_cast<double>(g.b(r, c));
    }
  }
  Eigen::MatrixXcd shifted = std::complex<double>(0.0, lambda) * Eigen::MatrixXcd::Identity(n, n) - b;
  Eigen::MatrixXcd r = shifted.partialPivLu().inverse();
  r = w.asDiagonal() * r * w.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  return svd.singularValues()(0);
}

std::array<ComplexL, 3> resolvent_solve(long double lambda, long double sigma, const Params& params,
                                        const std::array<ComplexL, 3>& forcing) {
  const Generator g = generator(sigma, params);
  MatCL shifted = -g.b.cast<ComplexL>();
  for (int i = 0; i < 3; ++i) shifted(i, i) += ComplexL(0.0L, lambda);
  const VecCL rhs(forcing[0], forcing[1], forcing[2]);
  return to_array(shifted.fullPivLu().solve(rhs));
}

std::array<ComplexL, 3> stationary_solve(long double sigma, const Params& params,
                                         const std::array<ComplexL, 3>& forcing) {
  const Generator g = generator(sigma, params);
  const MatCL b = g.b.cast<ComplexL>();
  const VecCL rhs(forcing[0], forcing[1], forcing[2]);
  return to_array(b.fullPivLu().solve(rhs));
}

std::array<ComplexL, 3> eigenvalues(long double sigma, const Params& params) {
  const auto bw = weighted_generator(sigma, params);
  MatL m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = bw[r][c];
  Eigen::EigenSolver<MatL> es(m, false);
  std::array<ComplexL, 3> out{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
  std::sort(out.begin(), out.end(), [](const ComplexL& a, const ComplexL& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

long double dissipation_form(long double sigma, const Params& params, const std::array<ComplexL, 3>& x) {
  const long double alpha = params.alpha, beta = params.beta, kappa = params.kappa;
  const ComplexL u = x[0], v = x[1], th = x[2];
  // B x = (v, (-σ²u + ασθ)/(1+γσ^τ), -βσv - κσθ), paired with x in the
  // weighted inner product (βσ², β(1+γσ^τ), α); the inertia factor cancels.
  const ComplexL t_u = beta * sigma * sigma * v * std::conj(u);
  const ComplexL t_v = beta * (-sigma * sigma * u + alpha * sigma * th) * std::conj(v);
  const ComplexL t_th = alpha * (-beta * sigma * v - kappa * sigma * th) * std::conj(th);
  return t_u.real() + t_v.real() + t_th.real();
}

std::vector<std::array<ComplexL, 3>> integrate(long double sigma, const Params& params,
                                               const std::array<ComplexL, 3>& x0,
                                               const std::vector<double>& times, long double rtol) {
  const Generator g = generator(sigma, params);
  using State = Eigen::Matrix<long double, 6, 1>;
  Eigen::Matrix<long double, 6, 6> a = Eigen::Matrix<long double, 6, 6>::Zero();
  a.block<3, 3>(0, 0) = g.b;
  a.block<3, 3>(3, 3) = g.b;
  auto f = [&](const State& y) -> State { return a * y; };

  // Dormand-Prince 5(4) tableau; the system is autonomous so the nodes c_i
  // are not needed.
  constexpr long double a21 = 1.0L / 5;
  constexpr long double a31 = 3.0L / 40, a32 = 9.0L / 40;
  constexpr long double a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
  constexpr long double a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
                        a54 = -212.0L / 729;
  constexpr long double a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
                        a64 = 49.0L / 176, a65 = -5103.0L / 18656;
  constexpr long double b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
                        b6 = 11.0L / 84;
  constexpr long double e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
                        e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;

  State y;
  for (int i = 0; i < 3; ++i) {
    y(i) = x0[i].real();
    y(3 + i) = x0[i].imag();
  }
  const long double spectral = a.cwiseAbs().rowwise().sum().maxCoeff();
  long double h = std::min<long double>(1e-3L, 0.01L / std::max<long double>(spectral, 1e-12L));
  long double t = 0.0L;
  std::vector<std::array<ComplexL, 3>> out;
  out.reserve(times.size());
  State k1 = f(y);
  for (double target_d : times) {
    const long double target = target_d;
    if (target < t) throw std::invalid_argument("integrate: times must be increasing");
    while (t < target) {
      const long double step = std::min(h, target - t);
      const State k2 = f(y + step * (a21 * k1));
      const State k3 = f(y + step * (a31 * k1 + a32 * k2));
      const State k4 = f(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const State k5 = f(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const State k6 = f(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const State ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State k7 = f(ynew);
      const State err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      // Pure relative control on the state norm.
      const long double scale = std::max(y.norm(), ynew.norm()) + 1e-300L;
      const long double ratio = err.norm() / (rtol * scale);
      if (ratio <= 1.0L) {
        t += step;
        y = ynew;
        k1 = k7;
      }
      const long double factor =
          ratio == 0.0L ? 5.0L : std::clamp(0.9L * std::pow(ratio, -0.2L), 0.2L, 5.0L);
      h = step * factor;
    }
    out.push_back({ComplexL(y(0), y(3)), ComplexL(y(1), y(4)), ComplexL(y(2), y(5))});
  }
  return out;
}

std::array<std::array<ComplexL, 3>, 3> propagator(long double sigma, const Params& params, double t,
                                                  long double rtol) {
  std::array<std::array<ComplexL, 3>, 3> out{};
  for (int c = 0; c < 3; ++c) {
    std::array<ComplexL, 3> e{};
    e[c] = 1.0L;
    const auto col = integrate(sigma, params, e, {t}, rtol).front();
    for (int r = 0; r < 3; ++r) out[r][c] = col[r];
  }
  return out;
}

std::vector<double> interval_spectrum(std::size_t count) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= count; ++n) out.push_back(static_cast<double>(n) * static_cast<double>(n));
  return out;
}

std::vector<double> square_spectrum(std::size_t count) {
  // Every value below the count-th smallest has j, k <= m.
  const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(count)))) + 3;
  std::vector<double> all;
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t k = 1; k <= m; ++k)
      all.push_back(static_cast<double>(j * j + k * k));
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

}  // namespace thermoplate::oracle
