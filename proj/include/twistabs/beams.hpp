#pragma once

// Beam and polarization models. Lengths (impact parameter, waist) are in units
// of the optical wavelength, so the wavenumber is k = 2*pi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <variant>

#include "twistabs/error.hpp"

namespace twistabs {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kWavenumber = 2.0 * kPi;

enum class BeamFamily { Bessel, BesselGauss };

struct BeamSpec {
  BeamFamily family = BeamFamily::BesselGauss;
  double pitch = 0.085;  // theta_k, radians
  int oam = 0;           // l_gamma
  double waist = 9.0;    // w0 in wavelengths; ignored for plain Bessel beams

  double kappa() const { return kWavenumber * std::sin(pitch); }
  double kz() const { return kWavenumber * std::cos(pitch); }

  void validate() const {
    if (!(pitch >= 0.0 && pitch < 0.5 * kPi)) {
      throw DomainError("pitch angle must lie in [0, pi/2), got " + std::to_string(pitch));
    }
    if (family == BeamFamily::BesselGauss && !(waist > 0.0)) {
      throw DomainError("Bessel-Gauss waist must be positive, got " + std::to_string(waist));
    }
  }
};

/// Impact parameter (b, phi_b) and quantization-axis direction (theta_z, phi_z).
struct Geometry {
  double b = 0.0;
  double phi_b = 0.0;
  double theta_z = 0.0;
  double phi_z = 0.0;

  void validate() const {
    if (!(b >= 0.0)) throw DomainError("impact parameter must be non-negative, got " + std::to_string(b));
  }
};

struct Helicity {
  int lambda = 1;  // +1 left circular, -1 right circular
};

/// Point on the Poincare sphere: e^{i delta}(e_- cos(alpha/2) - e_+ sin(alpha/2) e^{-2 i delta}).
struct GeneralPolarization {
  double alpha = 0.0;
  double delta = 0.0;
};

using Polarization = std::variant<Helicity, GeneralPolarization>;

inline Polarization horizontal() { return GeneralPolarization{0.5 * kPi, 0.0}; }
inline Polarization vertical() { return GeneralPolarization{0.5 * kPi, 0.5 * kPi}; }

inline void validate(const Helicity& h) {
  if (h.lambda != 1 && h.lambda != -1) throw DomainError("helicity must be +1 or -1, got " + std::to_string(h.lambda));
}

/// Weights of the Lambda = -1 and Lambda = +1 components.
struct HelicityWeights {
  std::complex<double> minus;
  std::complex<double> plus;
};

inline HelicityWeights decompose_polarization(const Polarization& pol) {
  if (const auto* h = std::get_if<Helicity>(&pol)) {
    validate(*h);
    return h->lambda < 0 ? HelicityWeights{1.0, 0.0} : HelicityWeights{0.0, 1.0};
  }
  const auto& g = std::get<GeneralPolarization>(pol);
  const std::complex<double> global = std::polar(1.0, g.delta);
  return {global * std::cos(0.5 * g.alpha), -global * std::polar(1.0, -2.0 * g.delta) * std::sin(0.5 * g.alpha)};
}

/// Maps (alpha, delta) into [0, pi] x [0, pi) without changing the field up to
/// a global phase. Returns the normalized value and whether anything moved.
inline std::pair<GeneralPolarization, bool> normalize_polarization(GeneralPolarization g) {
  const double two_pi = 2.0 * kPi;
  GeneralPolarization out = g;
  out.alpha = std::fmod(out.alpha, two_pi);
  if (out.alpha < 0.0) out.alpha += two_pi;
  if (out.alpha > kPi) {
    // e(2pi - alpha, delta) = i e(alpha, delta + pi/2)
    out.alpha = two_pi - out.alpha;
    out.delta += 0.5 * kPi;
  }
  if (out.delta < 0.0 || out.delta >= kPi) {
    // e(alpha, delta + pi) = -e(alpha, delta)
    out.delta = std::fmod(out.delta, kPi);
    if (out.delta < 0.0) out.delta += kPi;
  }
  const bool moved = out.alpha != g.alpha || out.delta != g.delta;
  return {out, moved};
}

/// m_gamma = l_gamma + Lambda; only defined for a pure helicity state.
inline int total_angular_momentum_projection(const Polarization& pol, int oam) {
  const auto* h = std::get_if<Helicity>(&pol);
  if (h == nullptr) {
    throw DomainError("total angular momentum projection is only defined for a helicity state");
  }
  validate(*h);
  return oam + h->lambda;
}

inline int total_angular_momentum_projection(int lambda, int oam) {
  return total_angular_momentum_projection(Helicity{lambda}, oam);
}

namespace detail {

inline double bessel_series(int n, double x) {
  // sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!), accumulated in long double.
  const long double half = 0.5L * x;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / static_cast<long double>(i);
  long double sum = term;
  const long double q = half * half;
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<long double>(k) * static_cast<long double>(k + n));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) + 1e-300L) break;
  }
  return static_cast<double>(sum);
}

inline double bessel_miller(int n, double x) {
  // Backward recurrence from well above max(n, x), normalised with
  // J_0 + 2 sum_k J_{2k} = 1.
  int start = static_cast<int>(std::max<double>(n, x)) + 40 + static_cast<int>(std::sqrt(40.0 * std::max<double>(n, x)));
  if (start % 2 != 0) ++start;
  double next = 0.0;
  double cur = 1e-300;
  double wanted = 0.0;
  double norm = 0.0;
  for (int k = start; k >= 0; --k) {
    if (k == n) wanted = cur;
    if (k % 2 == 0) norm += (k == 0 ? cur : 2.0 * cur);
    const double prev = (k > 0) ? (2.0 * k / x) * cur - next : 0.0;
    next = cur;
    cur = prev;
    if (std::fabs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      wanted *= 1e-250;
      norm *= 1e-250;
    }
  }
  return wanted / norm;
}

}  // namespace detail

/// Cylindrical Bessel function of the first kind, integer order, x >= 0.
/// Ascending series below x = 12, Miller backward recurrence above.
inline double bessel_J(int n, double x) {
  if (x < 0.0) {
    const double v = bessel_J(n, -x);
    return (n % 2 == 0) ? v : -v;
  }
  if (n < 0) {
    const double v = bessel_J(-n, x);
    return (n % 2 == 0) ? v : -v;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x < 12.0) return detail::bessel_series(n, x);
  return detail::bessel_miller(n, x);
}

}  // namespace twistabs
