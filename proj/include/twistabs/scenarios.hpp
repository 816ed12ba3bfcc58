#pragma once

// Built-in ion scenarios and the vortex-center (small b) closed forms that go
// with them.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twistabs/amplitudes.hpp"
#include "twistabs/beams.hpp"
#include "twistabs/error.hpp"
#include "twistabs/half_int.hpp"

namespace twistabs {

inline constexpr double kDefaultPitch = 0.085;
inline constexpr double kDefaultWaist = 9.0;

struct Scenario {
  std::string id;
  std::string description;
  TransitionSpec transition;
  std::vector<Geometry> canonical_geometries;
  std::vector<BeamSpec> canonical_beams;
  HalfInt default_m_i;
  HalfInt default_m_f;
};

namespace detail {

inline std::vector<Geometry> standard_geometries() {
  return {Geometry{0.0, 0.0, 0.0, 0.0}, Geometry{0.0, 0.0, 0.25 * kPi, 0.0}, Geometry{0.0, 0.0, 0.5 * kPi, 0.0}};
}

inline std::vector<BeamSpec> standard_beams() {
  std::vector<BeamSpec> out;
  for (int l = 0; l <= 2; ++l) out.push_back(BeamSpec{BeamFamily::BesselGauss, kDefaultPitch, l, kDefaultWaist});
  return out;
}

inline Scenario finish(Scenario s) {
  s.transition.validate();
  detail::require_projection(s.transition.initial_momentum(), s.default_m_i, "default initial sublevel");
  detail::require_projection(s.transition.final_momentum(), s.default_m_f, "default final sublevel");
  if (s.canonical_geometries.empty()) s.canonical_geometries = standard_geometries();
  if (s.canonical_beams.empty()) s.canonical_beams = standard_beams();
  return s;
}

}  // namespace detail

inline Scenario make_ca40_e2() {
  return detail::finish({"ca40_e2", "40Ca+ 4S1/2 -> 3D5/2, E2 (M3 neglected)",
                         TransitionSpec{HalfInt::from_twice(1), HalfInt::from_twice(5), std::nullopt,
                                        {{2, MultipoleKind::Electric, 1.0}}},
                         {}, {}, HalfInt::from_twice(1), HalfInt::from_twice(3)});
}

inline Scenario make_ar13_m1() {
  return detail::finish({"ar13_m1", "40Ar13+ 2P1/2 -> 2P3/2, M1 (E2 neglected)",
                         TransitionSpec{HalfInt::from_twice(1), HalfInt::from_twice(3), std::nullopt,
                                        {{1, MultipoleKind::Magnetic, 1.0}}},
                         {}, {}, HalfInt::from_twice(1), HalfInt::from_twice(3)});
}

inline Scenario make_yb172_e3() {
  return detail::finish({"yb172_e3", "172Yb+ 2S1/2 -> 2F7/2, E3, I = 0",
                         TransitionSpec{HalfInt::from_twice(1), HalfInt::from_twice(7), std::nullopt,
                                        {{3, MultipoleKind::Electric, 1.0}}},
                         {}, {}, HalfInt::from_twice(1), HalfInt::from_twice(3)});
}

/// 171Yb+ with I = 1/2. The hyperfine pair is a parameter; the default
/// F_i = 0 -> F_f = 3 with m 0 -> 1.
inline Scenario make_yb171_e3(HalfInt F_i = HalfInt(0), HalfInt F_f = HalfInt(3)) {
  const HalfInt m_i(0);
  const HalfInt m_f = (F_f >= HalfInt(1)) ? HalfInt(1) : HalfInt(0);
  return detail::finish({"yb171_e3",
                         "171Yb+ 2S1/2 -> 2F7/2, E3, I = 1/2, F " + F_i.str() + " -> " + F_f.str(),
                         TransitionSpec{HalfInt::from_twice(1), HalfInt::from_twice(7),
                                        HyperfineCoupling{HalfInt::from_twice(1), F_i, F_f},
                                        {{3, MultipoleKind::Electric, 1.0}}},
                         {}, {}, F_i.is_integer() ? m_i : HalfInt::from_twice(1),
                         F_i.is_integer() ? m_f : HalfInt::from_twice(3)});
}

inline Scenario make_ne5_m1e2(double m1 = 1.1, double e2 = 1.0) {
  return detail::finish({"ne5_m1e2", "20Ne5+ 2P1/2 -> 2D3/2, M1 + E2",
                         TransitionSpec{HalfInt::from_twice(1), HalfInt::from_twice(3), std::nullopt,
                                        {{1, MultipoleKind::Magnetic, m1}, {2, MultipoleKind::Electric, e2}}},
                         {}, {}, HalfInt::from_twice(1), HalfInt::from_twice(3)});
}

inline std::vector<Scenario> builtin_scenarios() {
  return {make_ca40_e2(), make_ar13_m1(), make_yb172_e3(), make_yb171_e3(), make_ne5_m1e2()};
}

/// Parses "E2:1.0, M1:1.1" (amplitude optional, default 1).
inline std::vector<Multipole> parse_multipoles(const std::string& text) {
  std::vector<Multipole> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
               item.end());
    if (item.empty()) continue;
    Multipole mp;
    const char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(item[0])));
    if (kind == 'E') {
      mp.kind = MultipoleKind::Electric;
    } else if (kind == 'M') {
      mp.kind = MultipoleKind::Magnetic;
    } else {
      throw UsageError("multipole '" + item + "' must start with E or M");
    }
    const auto colon = item.find(':');
    try {
      std::size_t used = 0;
      const std::string order = item.substr(1, colon == std::string::npos ? std::string::npos : colon - 1);
      mp.order = std::stoi(order, &used);
      if (used != order.size()) throw std::invalid_argument(order);
      if (colon != std::string::npos) {
        const std::string amp = item.substr(colon + 1);
        mp.amplitude = std::stod(amp, &used);
        if (used != amp.size()) throw std::invalid_argument(amp);
      }
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse multipole '" + item + "'");
    }
    out.push_back(mp);
  }
  if (out.empty()) throw UsageError("no multipoles given");
  return out;
}

class ScenarioRegistry {
 public:
  ScenarioRegistry() : scenarios_(builtin_scenarios()) {}

  const std::vector<Scenario>& all() const { return scenarios_; }

  const Scenario& find(const std::string& id) const {
    for (const auto& s : scenarios_) {
      if (s.id == id) return s;
    }
    std::string known;
    for (const auto& s : scenarios_) known += (known.empty() ? "" : ", ") + s.id;
    throw UsageError("unknown scenario '" + id + "' (known: " + known + ")");
  }

  /// Adds or replaces a scenario by id.
  void add(Scenario s) {
    s = detail::finish(std::move(s));
    for (auto& existing : scenarios_) {
      if (existing.id == s.id) {
        existing = std::move(s);
        return;
      }
    }
    scenarios_.push_back(std::move(s));
  }

 private:
  std::vector<Scenario> scenarios_;
};

/// Sublevel pair the closed forms below refer to (Delta m = +1).
inline std::pair<HalfInt, HalfInt> oracle_sublevels(const Scenario& s) {
  if (s.transition.hyperfine && s.transition.initial_momentum().is_integer()) return {HalfInt(0), HalfInt(1)};
  return {HalfInt::from_twice(1), HalfInt::from_twice(3)};
}

/// Closed-form theta_z dependence of the vortex-center amplitude (up to a
/// constant) for m_i -> m_i + 1. Returns nullopt where no closed form exists.
///
/// Two printed forms are used with corrections that the full calculation
/// requires: the Yb l = 2 lines are attached to the opposite polarization
/// labels, and for Ne the cos(theta_z) factor of the V line multiplies the M1
/// term too, with M1 entering with the opposite sign.
inline std::optional<std::complex<double>> small_b_oracle(const Scenario& s, int oam, LinearPolarization pol,
                                                          double theta_z, double theta_k) {
  using C = std::complex<double>;
  const C I{0.0, 1.0};
  const bool H = pol == LinearPolarization::H;
  const double c1 = std::cos(theta_z), c2 = std::cos(2 * theta_z), c3 = std::cos(3 * theta_z);
  const double s1 = std::sin(theta_z);
  const double t = theta_k, t2 = theta_k * theta_k;
  const auto& mps = s.transition.multipoles;

  auto only = [&](int order, MultipoleKind kind) {
    return mps.size() == 1 && mps[0].order == order && mps[0].kind == kind;
  };
  const bool spin_half_start = s.transition.j_i == HalfInt::from_twice(1);

  if (spin_half_start && s.transition.j_f == HalfInt::from_twice(5) && !s.transition.hyperfine &&
      only(2, MultipoleKind::Electric)) {
    switch (oam) {
      case 0: return I * (5 * t2 - 4) * (H ? c2 : c1);
      case 1: return H ? 2 * t * (1 + 4 * c1) * s1 : 2 * t * (2 * c1 - 1) * s1;
      case 2: return (H ? 1.0 : -1.0) * I * (3 / std::sqrt(2.0)) * t2 * (c1 + c2);
      default: return std::nullopt;
    }
  }
  if (spin_half_start && s.transition.j_f == HalfInt::from_twice(3) && !s.transition.hyperfine &&
      only(1, MultipoleKind::Magnetic)) {
    switch (oam) {
      case 0: return H ? -I * (1 - t2 / 4) : I * (1 - t2 / 4) * c1;
      case 1: return C(t * s1);
      case 2: return C(t2 * std::pow(std::cos(theta_z / 2), 2));
      default: return std::nullopt;
    }
  }
  if (spin_half_start && s.transition.j_f == HalfInt::from_twice(7) && only(3, MultipoleKind::Electric)) {
    if (s.transition.hyperfine && s.transition.hyperfine->F_i != HalfInt(0)) return std::nullopt;
    switch (oam) {
      case 0: return H ? I * (4 - 11 * t2) * (c1 + 15 * c3) : -I * (4 - 11 * t2) * (3 + 5 * c2);
      case 1: return H ? -4 * t * (23 + 20 * c1 + 45 * c2) * s1 : -4 * t * (13 - 20 * c1 + 15 * c2) * s1;
      case 2:
        return H ? 6.0 * I * t2 * (21 - 40 * c1 + 35 * c2) * std::pow(std::cos(theta_z / 2), 2)
                 : 1.5 * I * t2 * (22 + 7 * c1 + 10 * c2 + 25 * c3);
      default: return std::nullopt;
    }
  }
  if (spin_half_start && s.transition.j_f == HalfInt::from_twice(3) && !s.transition.hyperfine && oam == 0) {
    double m1 = 0.0, e2 = 0.0;
    for (const auto& mp : mps) {
      if (mp.order == 1 && mp.kind == MultipoleKind::Magnetic) {
        m1 += mp.amplitude;
      } else if (mp.order == 2 && mp.kind == MultipoleKind::Electric) {
        e2 += mp.amplitude;
      } else {
        return std::nullopt;
      }
    }
    const double g = 1 - 2 * std::cos(theta_k);
    return H ? I * (-std::sqrt(3.0) * m1 - e2 * g * c2) : I * (-std::sqrt(3.0) * m1 - e2 * g) * c1;
  }
  return std::nullopt;
}

struct HyperfineComparison {
  std::vector<double> b;
  std::vector<double> strength_171;
  std::vector<double> strength_172;
  double scale_ratio = 0.0;      // strength_171 / strength_172, median over the grid
  double ratio_deviation = 0.0;  // max relative departure from scale_ratio
  std::vector<std::size_t> minima_171;
  std::vector<std::size_t> minima_172;
};

/// Indices of local minima (endpoints included when below their neighbour).
inline std::vector<std::size_t> local_minima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = (i == 0) || v[i] < v[i - 1];
    const bool right = (i + 1 == n) || v[i] <= v[i + 1];
    if (left && right && n > 1) out.push_back(i);
  }
  return out;
}

/// Profiles of the same sublevel transition with and without nuclear spin on a
/// common b-grid. Points where the spin-less profile is below `floor` x peak
/// are left out of the ratio statistics (both vanish there).
inline HyperfineComparison hyperfine_comparison(const Scenario& yb171, const Scenario& yb172, const BeamSpec& beam,
                                                const Geometry& geom, const Polarization& pol,
                                                const std::vector<double>& b_grid, double floor = 1e-4) {
  if (!yb171.transition.hyperfine) throw DomainError("first scenario must carry nuclear spin");
  if (yb172.transition.hyperfine) throw DomainError("second scenario must be spin-less");
  const auto [mi171, mf171] = oracle_sublevels(yb171);
  const auto [mi172, mf172] = oracle_sublevels(yb172);
  const ProfileEvaluator e171(yb171.transition, beam, geom.theta_z, geom.phi_z, mi171, mf171);
  const ProfileEvaluator e172(yb172.transition, beam, geom.theta_z, geom.phi_z, mi172, mf172);
  const HelicityWeights w = decompose_polarization(pol);

  HyperfineComparison out;
  out.b = b_grid;
  for (double b : b_grid) {
    out.strength_171.push_back(std::abs(e171.amplitude(w, b, geom.phi_b)));
    out.strength_172.push_back(std::abs(e172.amplitude(w, b, geom.phi_b)));
  }
  const double peak = out.strength_172.empty()
                          ? 0.0
                          : *std::max_element(out.strength_172.begin(), out.strength_172.end());
  std::vector<double> ratios;
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    if (out.strength_172[i] > floor * peak) ratios.push_back(out.strength_171[i] / out.strength_172[i]);
  }
  if (!ratios.empty()) {
    std::vector<double> sorted = ratios;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    out.scale_ratio = sorted[sorted.size() / 2];
    for (double r : ratios) out.ratio_deviation = std::max(out.ratio_deviation, std::abs(r / out.scale_ratio - 1));
  }
  out.minima_171 = local_minima(out.strength_171);
  out.minima_172 = local_minima(out.strength_172);
  return out;
}

}  // namespace twistabs
