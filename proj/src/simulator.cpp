#include "thermoplate/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "thermoplate/errors.hpp"
#include "thermoplate/parallel.hpp"

namespace thermoplate {

namespace {

double norm1(const Mat3c& m) {
  double best = 0.0;
  for (std::size_t c = 0; c < 3; ++c)
    best = std::max(best, std::abs(m(0, c)) + std::abs(m(1, c)) + std::abs(m(2, c)));
  return best;
}

Vec3c cross(const Vec3c& a, const Vec3c& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Null vector of the rank-2 matrix m: the largest cross product of two rows.
Vec3c null_vector(const Mat3c& m) {
  const Vec3c r0{m(0, 0), m(0, 1), m(0, 2)};
  const Vec3c r1{m(1, 0), m(1, 1), m(1, 2)};
  const Vec3c r2{m(2, 0), m(2, 1), m(2, 2)};
  Vec3c best = cross(r0, r1);
  for (const Vec3c& c : {cross(r0, r2), cross(r1, r2)})
    if (norm2(c) > norm2(best)) best = c;
  const double n = norm2(best);
  return (1.0 / n) * best;
}

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

Mat3c expm_pade(const Mat3c& m) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const double n1 = norm1(m);
  int squarings = 0;
  if (n1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(n1 / theta13)));
  const Mat3c a = Complex{std::ldexp(1.0, -squarings), 0.0} * m;
  const Mat3c id = Mat3c::identity();
  const Mat3c a2 = a * a;
  const Mat3c a4 = a2 * a2;
  const Mat3c a6 = a4 * a2;
  const Mat3c u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                        b[3] * a2 + b[1] * id;
  const Mat3c u = a * u_inner;
  const Mat3c v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                  b[0] * id;
  const Mat3c lhs = v - u;
  const Mat3c rhs = v + u;
  Mat3c x;
  for (std::size_t c = 0; c < 3; ++c) {
    const Vec3c col = solve(lhs, {rhs(0, c), rhs(1, c), rhs(2, c)});
    for (std::size_t r = 0; r < 3; ++r) x(r, c) = col[r];
  }
  for (int k = 0; k < squarings; ++k) x = x * x;
  return x;
}

ModalPropagator::ModalPropagator(const ModalBlock& block)
    : weighted_(block.weighted_matrix()),
      scale_{std::sqrt(block.weights[0]), std::sqrt(block.weights[1]), std::sqrt(block.weights[2])} {
  const Mat3c& m = weighted_;
  // Characteristic polynomial of the (real) generator.
  const double tr = (m(0, 0) + m(1, 1) + m(2, 2)).real();
  const double minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                         m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                            .real();
  const double det = determinant(m).real();
  eigenvalues_ = cubic_roots(-tr, minors, -det);

  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(eigenvalues_[i] - eigenvalues_[j]));
  if (!(gap > 1e-6 * norm_frobenius(m))) return;

  for (std::size_t k = 0; k < 3; ++k) {
    Mat3c shifted = m;
    for (std::size_t i = 0; i < 3; ++i) shifted(i, i) -= eigenvalues_[k];
    const Vec3c col = null_vector(shifted);
    for (std::size_t r = 0; r < 3; ++r) vectors_(r, k) = col[r];
  }
  try {
    vectors_inv_ = inverse(vectors_);
  } catch (const SingularBlock&) {
    return;
  }
  if (all_finite(vectors_) && all_finite(vectors_inv_)) method_ = PropagatorMethod::eigendecomposition;
}

Mat3c ModalPropagator::at(double t) const {
  Mat3c e;
  if (method_ == PropagatorMethod::eigendecomposition) {
    Mat3c scaled = vectors_;
    for (std::size_t c = 0; c < 3; ++c) {
      const Complex f = std::exp(eigenvalues_[c] * t);
      for (std::size_t r = 0; r < 3; ++r) scaled(r, c) *= f;
    }
    e = scaled * vectors_inv_;
  } else {
    e = expm_pade(Complex{t, 0.0} * weighted_);
  }
  // Back from the weighted frame: exp(tB) = W^{-1} exp(t W B W^{-1}) W.
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) e(r, c) *= scale_[c] / scale_[r];
  return e;
}

Mat3c modal_propagator(const ModalBlock& block, double t) {
  if (!(t >= 0.0)) throw InvalidGrid("propagation time must be non-negative");
  return ModalPropagator(block).at(t);
}

void InitialData::validate(const DomainSpec* domain) const {
  std::vector<double> sigmas;
  sigmas.reserve(modes.size());
  for (const auto& [s, state] : modes) {
    if (!(std::isfinite(s) && s > 0.0)) throw InvalidMode("initial data: mode eigenvalue must be positive");
    if (!all_finite(state.vec())) throw InvalidMode("initial data: non-finite coefficients");
    sigmas.push_back(s);
  }
  std::sort(sigmas.begin(), sigmas.end());
  if (std::adjacent_find(sigmas.begin(), sigmas.end()) != sigmas.end())
    throw InvalidMode("initial data: repeated mode eigenvalue");
  if (domain != nullptr && !sigmas.empty()) {
    const auto spectrum = modes_up_to(*domain, sigmas.back(), std::size_t{50'000'000});
    for (double s : sigmas)
      if (!std::binary_search(spectrum.begin(), spectrum.end(), s))
        throw InvalidMode("initial data: sigma = " + std::to_string(s) + " is not an eigenvalue of the domain");
  }
}

SimTrace simulate(const InitialData& data, const Params& params, std::span<const double> times,
                  unsigned threads) {
  params.validate();
  data.validate();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(std::isfinite(times[i]) && times[i] >= 0.0)) throw InvalidGrid("times must be finite and non-negative");
    if (i > 0 && !(times[i] > times[i - 1])) throw InvalidGrid("times must be strictly increasing");
  }
  if (data.modes.empty())
    return {{times.begin(), times.end()}, std::vector<double>(times.size()), std::vector<double>(times.size())};

  const std::size_t nm = data.modes.size(), nt = times.size();
  std::vector<double> energy(nm * nt), dissipation(nm * nt);
  parallel_for(nm, threads, [&](std::size_t m) {
    const auto& [sigma, state] = data.modes[m];
    const ModalBlock block = build_modal_block(sigma, params);
    const ModalPropagator prop(block);
    const Vec3c x0 = state.vec();
    for (std::size_t k = 0; k < nt; ++k) {
      const ModalState x = ModalState::from(prop.at(times[k]) * x0);
      const double nrm = modal_norm(x, block);
      energy[m * nt + k] = 0.5 * nrm * nrm;
      dissipation[m * nt + k] = params.kappa * params.alpha * sigma * std::norm(x.theta);
    }
  });

  SimTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.energies.resize(nt);
  trace.theta_dissipation.resize(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    CompensatedSum e, d;
    for (std::size_t m = 0; m < nm; ++m) {
      e.add(energy[m * nt + k]);
      d.add(dissipation[m * nt + k]);
    }
    trace.energies[k] = e.value();
    trace.theta_dissipation[k] = d.value();
  }
  return trace;
}

double decay_rate_estimate(const SimTrace& trace, std::pair<double, double> window) {
  std::vector<double> ts, logs;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double t = trace.times[k];
    if (t < window.first || t > window.second) continue;
    const double e = trace.energies[k];
    if (!(e > std::numeric_limits<double>::min()))
      throw ShrinkWindowError("energy underflows at t = " + std::to_string(t) + "; shrink the window");
    ts.push_back(t);
    logs.push_back(std::log(e));
  }
  const std::size_t n = ts.size();
  if (n < 8) throw FitWindowError("decay window holds " + std::to_string(n) + " samples, need at least 8");
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += ts[i];
    ml += logs[i];
  }
  mt /= static_cast<double>(n);
  ml /= static_cast<double>(n);
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (logs[i] - ml);
  }
  return 0.5 * stl / stt;
}

InitialData project_interval_samples(std::span<const double> u0, std::span<const double> u1,
                                     std::span<const double> theta0, std::size_t n_modes) {
  const std::size_t n = u0.size();
  if (n < 3 || u1.size() != n || theta0.size() != n)
    throw InvalidGrid("projection needs three sample arrays of equal length >= 3");
  const double h = std::numbers::pi / static_cast<double>(n - 1);
  const double norm = std::sqrt(2.0 / std::numbers::pi);
  InitialData data;
  for (std::size_t k = 1; k <= n_modes; ++k) {
    double cu = 0.0, cv = 0.0, ct = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = (j == 0 || j + 1 == n) ? 0.5 * h : h;
      const double e = norm * std::sin(static_cast<double>(k) * h * static_cast<double>(j));
      cu += w * u0[j] * e;
      cv += w * u1[j] * e;
      ct += w * theta0[j] * e;
    }
    data.modes.push_back({static_cast<double>(k * k), ModalState{cu, cv, ct}});
  }
  return data;
}

}  // namespace thermoplate
