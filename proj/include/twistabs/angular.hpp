#pragma once

// Angular-momentum coupling and rotation coefficients.
//
// Conventions (fixed for the whole library):
//   * Clebsch-Gordan coefficients <j1 m1; j2 m2 | J M> follow Condon-Shortley:
//     real, and <j1 j1; j2 (J-j1) | J J> > 0.
//   * Rotation matrices D^j_{m,m'}(psi, theta, phi) = e^{-i m psi} d^j_{m,m'}(theta) e^{-i m' phi},
//     with d^j the standard Wigner sum (d^1_{0,0} = cos theta, d^{1/2}_{1/2,-1/2} = -sin(theta/2)).
//
// Every function is pure; the factorial table is built once and never mutated.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "twistabs/error.hpp"
#include "twistabs/half_int.hpp"

namespace twistabs {

namespace detail {

inline constexpr int kMaxFactorial = 170;

/// n! as long double; exact through n = 25, which covers every argument the
/// Racah sums need for j <= 7/2.
inline const std::array<long double, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<long double, kMaxFactorial + 1> t{};
    t[0] = 1.0L;
    for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] * static_cast<long double>(n);
    return t;
  }();
  return table;
}

inline long double factorial(int n) {
  if (n < 0 || n > kMaxFactorial) throw DomainError("factorial argument out of range: " + std::to_string(n));
  return factorial_table()[static_cast<std::size_t>(n)];
}

/// (x)/2 for an even twice-value; callers guarantee evenness.
constexpr int half_of(int twice) { return twice / 2; }

inline void require_parity(HalfInt j, HalfInt m, const char* who) {
  if (j.twice() < 0) throw DomainError(std::string(who) + ": negative angular momentum " + j.str());
  if (!same_parity(j, m)) {
    throw DomainError(std::string(who) + ": projection " + m.str() + " inconsistent with j = " + j.str());
  }
}

inline void require_projection(HalfInt j, HalfInt m, const char* who) {
  require_parity(j, m, who);
  if (abs(m) > j) throw DomainError(std::string(who) + ": |m| > j for j = " + j.str() + ", m = " + m.str());
}

/// Triangle coefficient sqrt[(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!]; triangle assumed.
inline long double triangle_coefficient(HalfInt a, HalfInt b, HalfInt c) {
  const int ta = a.twice(), tb = b.twice(), tc = c.twice();
  return std::sqrt(factorial(half_of(ta + tb - tc)) * factorial(half_of(ta - tb + tc)) *
                   factorial(half_of(-ta + tb + tc)) / factorial(half_of(ta + tb + tc) + 1));
}

}  // namespace detail

/// <j1 m1; j2 m2 | J M> by the Racah sum. Zero when M != m1 + m2 or the triad
/// (j1, j2, J) fails the triangle rule. Throws DomainError when a projection's
/// half-integer parity does not match its j, or |m| > j.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  detail::require_projection(j1, m1, "clebsch_gordan");
  detail::require_projection(j2, m2, "clebsch_gordan");
  detail::require_projection(J, M, "clebsch_gordan");
  if (m1 + m2 != M || !triangle(j1, j2, J)) return 0.0;

  using detail::factorial;
  using detail::half_of;
  const int a = j1.twice(), b = j2.twice(), c = J.twice();
  const int ma = m1.twice(), mb = m2.twice(), mc = M.twice();

  const long double prefactor =
      std::sqrt(static_cast<long double>(c + 1) * factorial(half_of(a + b - c)) * factorial(half_of(a - b + c)) *
                factorial(half_of(-a + b + c)) / factorial(half_of(a + b + c) + 1)) *
      std::sqrt(factorial(half_of(a + ma)) * factorial(half_of(a - ma)) * factorial(half_of(b + mb)) *
                factorial(half_of(b - mb)) * factorial(half_of(c + mc)) * factorial(half_of(c - mc)));

  // Summation index k runs where every factorial argument is non-negative.
  const int k_min = std::max({0, half_of(b - c - ma), half_of(a - c + mb)});
  const int k_max = std::min({half_of(a + b - c), half_of(a - ma), half_of(b + mb)});
  long double sum = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    const long double term = factorial(k) * factorial(half_of(a + b - c) - k) * factorial(half_of(a - ma) - k) *
                             factorial(half_of(b + mb) - k) * factorial(half_of(c - b + ma) + k) *
                             factorial(half_of(c - a - mb) + k);
    sum += (k % 2 == 0 ? 1.0L : -1.0L) / term;
  }
  return static_cast<double>(prefactor * sum);
}

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6} (Racah formula). The coupled triads are
/// (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3); zero if any fails the
/// triangle rule. A triad whose sum is not an integer is a DomainError.
inline double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  const std::array<std::array<HalfInt, 3>, 4> triads{{{j1, j2, j3}, {j1, j5, j6}, {j4, j2, j6}, {j4, j5, j3}}};
  for (const auto& t : triads) {
    for (HalfInt x : t) {
      if (x.twice() < 0) throw DomainError("wigner_6j: negative angular momentum " + x.str());
    }
    if ((t[0].twice() + t[1].twice() + t[2].twice()) % 2 != 0) {
      throw DomainError("wigner_6j: triad (" + t[0].str() + ", " + t[1].str() + ", " + t[2].str() +
                        ") has non-integer sum");
    }
  }
  for (const auto& t : triads) {
    if (!triangle(t[0], t[1], t[2])) return 0.0;
  }

  using detail::factorial;
  using detail::half_of;
  const long double delta = detail::triangle_coefficient(j1, j2, j3) * detail::triangle_coefficient(j1, j5, j6) *
                            detail::triangle_coefficient(j4, j2, j6) * detail::triangle_coefficient(j4, j5, j3);

  const int a1 = half_of(j1.twice() + j2.twice() + j3.twice());
  const int a2 = half_of(j1.twice() + j5.twice() + j6.twice());
  const int a3 = half_of(j4.twice() + j2.twice() + j6.twice());
  const int a4 = half_of(j4.twice() + j5.twice() + j3.twice());
  const int b1 = half_of(j1.twice() + j2.twice() + j4.twice() + j5.twice());
  const int b2 = half_of(j2.twice() + j3.twice() + j5.twice() + j6.twice());
  const int b3 = half_of(j3.twice() + j1.twice() + j6.twice() + j4.twice());

  const int t_min = std::max({a1, a2, a3, a4});
  const int t_max = std::min({b1, b2, b3});
  long double sum = 0.0L;
  for (int t = t_min; t <= t_max; ++t) {
    const long double den = factorial(t - a1) * factorial(t - a2) * factorial(t - a3) * factorial(t - a4) *
                            factorial(b1 - t) * factorial(b2 - t) * factorial(b3 - t);
    sum += (t % 2 == 0 ? 1.0L : -1.0L) * factorial(t + 1) / den;
  }
  return static_cast<double>(delta * sum);
}

/// Wigner small-d d^j_{m,mp}(theta) from the explicit Wigner sum.
inline double wigner_small_d(HalfInt j, HalfInt m, HalfInt mp, double theta) {
  detail::require_projection(j, m, "wigner_small_d");
  detail::require_projection(j, mp, "wigner_small_d");

  using detail::factorial;
  using detail::half_of;
  const int tj = j.twice(), tm = m.twice(), tmp = mp.twice();
  const int jpm = half_of(tj + tm), jmm = half_of(tj - tm);
  const int jpmp = half_of(tj + tmp), jmmp = half_of(tj - tmp);
  const int mdiff = half_of(tm - tmp);

  const long double c = std::cos(0.5L * static_cast<long double>(theta));
  const long double s = std::sin(0.5L * static_cast<long double>(theta));
  const long double prefactor = std::sqrt(factorial(jpm) * factorial(jmm) * factorial(jpmp) * factorial(jmmp));

  const int k_min = std::max(0, -mdiff);
  const int k_max = std::min(jpmp, jmm);
  long double sum = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    const long double den = factorial(jpmp - k) * factorial(k) * factorial(mdiff + k) * factorial(jmm - k);
    const int cos_power = tj - mdiff - 2 * k;
    const int sin_power = mdiff + 2 * k;
    const long double term = std::pow(c, cos_power) * std::pow(s, sin_power) / den;
    sum += ((mdiff + k) % 2 == 0 ? term : -term);
  }
  return static_cast<double>(prefactor * sum);
}

/// D^j_{m,mp}(psi, theta, phi) = e^{-i m psi} d^j_{m,mp}(theta) e^{-i mp phi}.
inline std::complex<double> wigner_D(HalfInt j, HalfInt m, HalfInt mp, double psi, double theta, double phi) {
  const double phase = -(m.value() * psi + mp.value() * phi);
  return std::polar(wigner_small_d(j, m, mp, theta), phase);
}

}  // namespace twistabs
