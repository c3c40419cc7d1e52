#pragma once

// Fixed-size 3x3 complex linear algebra. Every modal computation in the
// library reduces to operations on these.

#include <array>
#include <complex>
#include <cstddef>

namespace thermoplate {

using Complex = std::complex<double>;
using Vec3c = std::array<Complex, 3>;

struct Mat3c {
  std::array<Complex, 9> a{};

  Complex& operator()(std::size_t r, std::size_t c) { return a[3 * r + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a[3 * r + c]; }

  static Mat3c identity();
  static Mat3c diagonal(const Vec3c& d);
};

Mat3c operator+(const Mat3c& x, const Mat3c& y);
Mat3c operator-(const Mat3c& x, const Mat3c& y);
Mat3c operator*(const Mat3c& x, const Mat3c& y);
Mat3c operator*(Complex s, const Mat3c& x);
Vec3c operator*(const Mat3c& m, const Vec3c& v);

Vec3c operator+(const Vec3c& x, const Vec3c& y);
Vec3c operator-(const Vec3c& x, const Vec3c& y);
Vec3c operator*(Complex s, const Vec3c& v);

Mat3c adjoint(const Mat3c& m);
Complex determinant(const Mat3c& m);
double norm_frobenius(const Mat3c& m);
double norm_inf(const Mat3c& m);  // max row sum
double norm2(const Vec3c& v);

/// Inverse by cofactors. Throws SingularBlock when the determinant vanishes
/// or the result is not finite.
Mat3c inverse(const Mat3c& m);

/// Solves m x = b by Gaussian elimination with partial pivoting.
/// Throws SingularBlock on a zero pivot.
Vec3c solve(const Mat3c& m, const Vec3c& b);

/// Largest eigenvalue of a Hermitian 3x3 matrix (trigonometric closed form).
double hermitian_max_eigenvalue(const Mat3c& h);

/// Largest singular value, via the largest eigenvalue of m^H m.
double largest_singular_value(const Mat3c& m);

/// Roots of z^3 + p z^2 + q z + r with real coefficients, polished by Newton
/// steps. Ordered by descending real part; exact ties go to the larger
/// imaginary part.
std::array<Complex, 3> cubic_roots(double p, double q, double r);

bool all_finite(const Mat3c& m);
bool all_finite(const Vec3c& v);

}  // namespace thermoplate
