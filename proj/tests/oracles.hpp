#pragma once

// Independent reference values used only by the tests: exact rational Racah
// sums, the rotation matrix as a matrix exponential, and Bessel functions
// from their integral representation.

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int fact(int n) {
  cpp_int r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

/// Signed square root value: sign * sqrt(square).
struct SignedSqrt {
  int sign = 0;
  cpp_rational square = 0;
  long double value() const {
    return sign * std::sqrt(static_cast<long double>(square));
  }
};

/// Exact Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M>; arguments are twice
/// the physical values.
inline SignedSqrt cg(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  SignedSqrt out;
  if (tm1 + tm2 != tM) return out;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return out;
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2) return out;
  auto h = [](int twice) { return twice / 2; };
  const int a = h(tJ + tj1 - tj2), b = h(tJ - tj1 + tj2), c = h(tj1 + tj2 - tJ), d = h(tj1 + tj2 + tJ) + 1;
  const cpp_rational pref = cpp_rational((tJ + 1) * fact(a) * fact(b) * fact(c), fact(d)) *
                            cpp_rational(fact(h(tJ + tM)) * fact(h(tJ - tM)) * fact(h(tj1 - tm1)) *
                                         fact(h(tj1 + tm1)) * fact(h(tj2 - tm2)) * fact(h(tj2 + tm2)));
  cpp_rational sum = 0;
  for (int k = 0; k <= 2 * (tj1 + tj2 + tJ); ++k) {
    const int e[5] = {h(tj1 + tj2 - tJ) - k, h(tj1 - tm1) - k, h(tj2 + tm2) - k, h(tJ - tj2 + tm1) + k,
                      h(tJ - tj1 - tm2) + k};
    bool ok = true;
    for (int v : e) ok = ok && v >= 0;
    if (!ok) continue;
    cpp_int den = fact(k);
    for (int v : e) den *= fact(v);
    sum += cpp_rational((k % 2) ? -1 : 1, den);
  }
  if (sum == 0) return out;
  out.sign = sum > 0 ? 1 : -1;
  out.square = pref * sum * sum;
  return out;
}

/// Exact 6j symbol {j1 j2 j3; j4 j5 j6}, twice-valued arguments.
inline SignedSqrt sixj(int a, int b, int c, int d, int e, int f) {
  SignedSqrt out;
  auto tri_ok = [](int x, int y, int z) { return z >= std::abs(x - y) && z <= x + y && (x + y + z) % 2 == 0; };
  if (!tri_ok(a, b, c) || !tri_ok(a, e, f) || !tri_ok(d, b, f) || !tri_ok(d, e, c)) return out;
  auto delta2 = [](int x, int y, int z) {
    return cpp_rational(fact((x + y - z) / 2) * fact((x - y + z) / 2) * fact((-x + y + z) / 2), fact((x + y + z) / 2 + 1));
  };
  const cpp_rational pref = delta2(a, b, c) * delta2(a, e, f) * delta2(d, b, f) * delta2(d, e, c);
  const int s1 = (a + b + c) / 2, s2 = (a + e + f) / 2, s3 = (d + b + f) / 2, s4 = (d + e + c) / 2;
  const int p1 = (a + b + d + e) / 2, p2 = (a + c + d + f) / 2, p3 = (b + c + e + f) / 2;
  cpp_rational sum = 0;
  for (int t = std::max({s1, s2, s3, s4}); t <= std::min({p1, p2, p3}); ++t) {
    const cpp_int den = fact(t - s1) * fact(t - s2) * fact(t - s3) * fact(t - s4) * fact(p1 - t) * fact(p2 - t) *
                        fact(p3 - t);
    sum += cpp_rational((t % 2 ? -1 : 1) * fact(t + 1), den);
  }
  if (sum == 0) return out;
  out.sign = sum > 0 ? 1 : -1;
  out.square = pref * sum * sum;
  return out;
}

/// d^j_{m m'}(theta) = <j m| exp(-i theta J_y) |j m'>, from the matrix
/// exponential. Basis index k <-> m = j - k.
inline double small_d(int tj, int tm, int tmp, double theta) {
  const int n = tj + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);  // -i J_y, real antisymmetric
  for (int k = 1; k < n; ++k) {
    const double m = (tj - 2.0 * k) / 2.0;  // <m+1| J+ |m>
    const double j = tj / 2.0;
    const double jp = std::sqrt(j * (j + 1) - m * (m + 1));
    // -i J_y = -(J+ - J-)/2
    A(k - 1, k) = -0.5 * jp;
    A(k, k - 1) = 0.5 * jp;
  }
  const Eigen::MatrixXd D = (theta * A).exp();
  return D((tj - tm) / 2, (tj - tmp) / 2);
}

/// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt by the trapezoid rule, which
/// converges geometrically for this periodic integrand.
inline double bessel(int n, double x, int panels = 4000) {
  const double h = std::numbers::pi / panels;
  double s = 0.5 * (std::cos(0.0) + std::cos(n * std::numbers::pi));
  for (int k = 1; k < panels; ++k) {
    const double t = k * h;
    s += std::cos(n * t - x * std::sin(t));
  }
  return s * h / std::numbers::pi;
}

}  // namespace oracle
