#include "thermoplate/linalg3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "thermoplate/errors.hpp"

namespace thermoplate {

Mat3c Mat3c::identity() { return diagonal({1.0, 1.0, 1.0}); }

Mat3c Mat3c::diagonal(const Vec3c& d) {
  Mat3c m;
  for (std::size_t i = 0; i < 3; ++i) m(i, i) = d[i];
  return m;
}

Mat3c operator+(const Mat3c& x, const Mat3c& y) {
  Mat3c out;
  for (std::size_t i = 0; i < 9; ++i) out.a[i] = x.a[i] + y.a[i];
  return out;
}

Mat3c operator-(const Mat3c& x, const Mat3c& y) {
  Mat3c out;
  for (std::size_t i = 0; i < 9; ++i) out.a[i] = x.a[i] - y.a[i];
  return out;
}

Mat3c operator*(const Mat3c& x, const Mat3c& y) {
  Mat3c out;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c) + x(r, 2) * y(2, c);
  return out;
}

Mat3c operator*(Complex s, const Mat3c& x) {
  Mat3c out;
  for (std::size_t i = 0; i < 9; ++i) out.a[i] = s * x.a[i];
  return out;
}

Vec3c operator*(const Mat3c& m, const Vec3c& v) {
  Vec3c out;
  for (std::size_t r = 0; r < 3; ++r) out[r] = m(r, 0) * v[0] + m(r, 1) * v[1] + m(r, 2) * v[2];
  return out;
}

Vec3c operator+(const Vec3c& x, const Vec3c& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }
Vec3c operator-(const Vec3c& x, const Vec3c& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }
Vec3c operator*(Complex s, const Vec3c& v) { return {s * v[0], s * v[1], s * v[2]}; }

Mat3c adjoint(const Mat3c& m) {
  Mat3c out;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) out(r, c) = std::conj(m(c, r));
  return out;
}

Complex determinant(const Mat3c& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double norm_frobenius(const Mat3c& m) {
  double s = 0.0;
  for (const auto& x : m.a) s += std::norm(x);
  return std::sqrt(s);
}

double norm_inf(const Mat3c& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < 3; ++r)
    best = std::max(best, std::abs(m(r, 0)) + std::abs(m(r, 1)) + std::abs(m(r, 2)));
  return best;
}

double norm2(const Vec3c& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

bool all_finite(const Mat3c& m) {
  return std::all_of(m.a.begin(), m.a.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool all_finite(const Vec3c& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Mat3c inverse(const Mat3c& m) {
  Mat3c cof;
  cof(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  cof(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  cof(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  cof(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  cof(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  cof(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  cof(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  cof(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  cof(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex det = m(0, 0) * cof(0, 0) + m(0, 1) * cof(1, 0) + m(0, 2) * cof(2, 0);
  if (det == Complex{0.0, 0.0}) throw SingularBlock("inverse: zero determinant");
  const Mat3c out = (1.0 / det) * cof;
  if (!all_finite(out)) throw SingularBlock("inverse: non-finite result");
  return out;
}

Vec3c solve(const Mat3c& m, const Vec3c& b) {
  Mat3c a = m;
  Vec3c x = b;
  for (std::size_t k = 0; k < 3; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < 3; ++r)
      if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
    if (a(piv, k) == Complex{0.0, 0.0}) throw SingularBlock("solve: zero pivot");
    if (piv != k) {
      for (std::size_t c = 0; c < 3; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t r = k + 1; r < 3; ++r) {
      const Complex f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < 3; ++c) a(r, c) -= f * a(k, c);
      x[r] -= f * x[k];
    }
  }
  for (std::size_t k = 3; k-- > 0;) {
    Complex s = x[k];
    for (std::size_t c = k + 1; c < 3; ++c) s -= a(k, c) * x[c];
    x[k] = s / a(k, k);
  }
  if (!all_finite(x)) throw SingularBlock("solve: non-finite result");
  return x;
}

double hermitian_max_eigenvalue(const Mat3c& h) {
  const double a00 = h(0, 0).real(), a11 = h(1, 1).real(), a22 = h(2, 2).real();
  const double off = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
  const double q = (a00 + a11 + a22) / 3.0;
  const double d0 = a00 - q, d1 = a11 - q, d2 = a22 - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off;
  if (p2 <= 0.0) return q;
  const double p = std::sqrt(p2 / 6.0);
  Mat3c b = h;
  for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
  b = Complex{1.0 / p, 0.0} * b;
  const double r = std::clamp(0.5 * determinant(b).real(), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi);
}

double largest_singular_value(const Mat3c& m) {
  const Mat3c gram = adjoint(m) * m;
  return std::sqrt(std::max(0.0, hermitian_max_eigenvalue(gram)));
}

namespace {

struct CubicEval {
  Complex value;
  Complex slope;
};

CubicEval eval_cubic(Complex z, double p, double q, double r) {
  // Horner for the value and its derivative.
  const Complex v = ((z + p) * z + q) * z + r;
  const Complex d = (3.0 * z + 2.0 * p) * z + q;
  return {v, d};
}

Complex newton_polish(Complex z, double p, double q, double r) {
  CubicEval e = eval_cubic(z, p, q, r);
  for (int it = 0; it < 8; ++it) {
    if (e.value == Complex{0.0, 0.0} || e.slope == Complex{0.0, 0.0}) break;
    const Complex next = z - e.value / e.slope;
    const CubicEval en = eval_cubic(next, p, q, r);
    if (!(std::abs(en.value) < std::abs(e.value))) break;
    z = next;
    e = en;
  }
  return z;
}

double real_root(double p, double q, double r) {
  // Fujiwara bound on root moduli gives a sign-changing bracket.
  const double bound =
      2.0 * std::max({std::abs(p), std::sqrt(std::abs(q)), std::cbrt(std::abs(r) / 2.0)});
  auto f = [&](double x) { return ((x + p) * x + q) * x + r; };
  auto df = [&](double x) { return (3.0 * x + 2.0 * p) * x + q; };
  double lo = -bound, hi = bound;
  if (bound == 0.0) return 0.0;
  double x = -r / std::max(std::abs(q), 1e-300);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace

std::array<Complex, 3> cubic_roots(double p, double q, double r) {
  const double z0 = real_root(p, q, r);
  // Forward deflation is stable for the largest-modulus root; otherwise use
  // the backward recurrence from the constant term.
  double b1, c1;
  if (z0 != 0.0 && std::abs(z0) * z0 * z0 < std::abs(r)) {
    c1 = -r / z0;
    b1 = (c1 - q) / z0;
  } else {
    b1 = p + z0;
    c1 = q + z0 * b1;
  }
  std::array<Complex, 3> roots;
  roots[0] = Complex{z0, 0.0};
  const double disc = b1 * b1 - 4.0 * c1;
  if (disc < 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    roots[1] = Complex{-0.5 * b1, im};
    roots[2] = Complex{-0.5 * b1, -im};
  } else {
    const double s = -0.5 * (b1 + std::copysign(std::sqrt(disc), b1));
    roots[1] = Complex{s, 0.0};
    roots[2] = Complex{s != 0.0 ? c1 / s : 0.0, 0.0};
  }
  for (auto& z : roots) z = newton_polish(z, p, q, r);
  // Keep conjugate pairs exactly conjugate after polishing.
  if (roots[1].imag() != 0.0 || roots[2].imag() != 0.0) {
    const Complex mid = 0.5 * (roots[1] + std::conj(roots[2]));
    roots[1] = mid;
    roots[2] = std::conj(mid);
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return roots;
}

}  // namespace thermoplate
