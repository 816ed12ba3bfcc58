#pragma once

// Numerical checks shared by the acceptance suite and `twistabs selftest`.
// Each routine returns the measured quantity; callers own the tolerances.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "twistabs/amplitudes.hpp"
#include "twistabs/angular.hpp"
#include "twistabs/fit.hpp"
#include "twistabs/scan.hpp"
#include "twistabs/scenarios.hpp"

namespace twistabs::verify {

/// All j (as HalfInt) with 2j <= max_twice.
inline std::vector<HalfInt> momenta_up_to(int max_twice) {
  std::vector<HalfInt> out;
  for (int t = 0; t <= max_twice; ++t) out.push_back(HalfInt::from_twice(t));
  return out;
}

/// max |sum_{m1 m2} C(j1 m1 j2 m2|J M) C(j1 m1 j2 m2|J' M') - delta| over all
/// couplings with j1, j2 <= max.
inline double cg_orthogonality_error(int max_twice = 7) {
  double worst = 0.0;
  for (HalfInt j1 : momenta_up_to(max_twice)) {
    for (HalfInt j2 : momenta_up_to(max_twice)) {
      std::vector<HalfInt> Js;
      for (HalfInt J = abs(j1 - j2); J <= j1 + j2; J += HalfInt(1)) Js.push_back(J);
      for (HalfInt J : Js) {
        for (HalfInt Jp : Js) {
          for (HalfInt M : projections(std::min(J, Jp))) {
            double sum = 0.0;
            for (HalfInt m1 : projections(j1)) {
              const HalfInt m2 = M - m1;
              if (abs(m2) > j2) continue;
              sum += clebsch_gordan(j1, m1, j2, m2, J, M) * clebsch_gordan(j1, m1, j2, m2, Jp, M);
            }
            worst = std::max(worst, std::abs(sum - (J == Jp ? 1.0 : 0.0)));
          }
        }
      }
    }
  }
  return worst;
}

/// Orthogonality of 6j symbols,
/// sum_x (2x+1)(2c+1) {a b x; d e c}{a b x; d e c'} = delta_{cc'},
/// for all arguments up to max; also checks that symbols with a broken triad are 0.
inline double sixj_orthogonality_error(int max_twice = 7) {
  double worst = 0.0;
  const auto js = momenta_up_to(max_twice);
  for (HalfInt a : js) {
    for (HalfInt b : js) {
      for (HalfInt d : js) {
        for (HalfInt e : js) {
          if (!same_parity(a + b, d + e)) continue;
          std::vector<HalfInt> cs, xs;
          for (HalfInt c : js) {
            if (triangle(a, e, c) && triangle(d, b, c)) cs.push_back(c);
          }
          for (HalfInt x : momenta_up_to(2 * max_twice)) {
            if (triangle(a, b, x) && triangle(d, e, x)) xs.push_back(x);
          }
          for (HalfInt c : cs) {
            for (HalfInt cp : cs) {
              if (!same_parity(c, cp)) continue;
              double sum = 0.0;
              for (HalfInt x : xs) {
                sum += (x.twice() + 1.0) * (c.twice() + 1.0) * wigner_6j(a, b, x, d, e, c) * wigner_6j(a, b, x, d, e, cp);
              }
              worst = std::max(worst, std::abs(sum - (c == cp ? 1.0 : 0.0)));
            }
          }
          for (HalfInt x : js) {
            if (!same_parity(a + b, x) || triangle(a, b, x)) continue;
            for (HalfInt c : cs) worst = std::max(worst, std::abs(wigner_6j(a, b, x, d, e, c)));
          }
        }
      }
    }
  }
  return worst;
}

struct SelectionResult {
  double worst_forbidden = 0.0;  // max strength(b ~ 0)/peak over pairs with dm != m_gamma
  double min_allowed = 1.0;      // min strength(b ~ 0)/peak over pairs with dm == m_gamma (and |dm| <= j)
  double ca_dm3 = 0.0;           // max |M| / peak for Ca E2 with dm = 3, m_gamma = 3, over b
};

/// b -> 0 selection rule at theta_z = 0 for every scenario, l in {0,1,2}.
inline SelectionResult selection_rules(double b_small = 1e-9) {
  SelectionResult res;
  const auto grid = linspace(0.0, 20.0, 401);
  for (const Scenario& s : builtin_scenarios()) {
    const HalfInt Ji = s.transition.initial_momentum(), Jf = s.transition.final_momentum();
    int max_order = 0;
    for (const auto& mp : s.transition.multipoles) max_order = std::max(max_order, mp.order);
    for (int l = 0; l <= 2; ++l) {
      const BeamSpec beam{BeamFamily::Bessel, kDefaultPitch, l, kDefaultWaist};
      for (HalfInt mi : projections(Ji)) {
        for (HalfInt mf : projections(Jf)) {
          const ProfileEvaluator ev(s.transition, beam, 0.0, 0.0, mi, mf);
          const int dm = (mf - mi).as_int();
          for (int lambda : {-1, 1}) {
            double peak = 0.0;
            for (double b : grid) peak = std::max(peak, std::abs(ev.helicity_amplitude(lambda, b, 0.3)));
            if (peak == 0.0) continue;
            const double centre = std::abs(ev.helicity_amplitude(lambda, b_small, 0.3)) / peak;
            if (dm == l + lambda) {
              res.min_allowed = std::min(res.min_allowed, centre);
            } else {
              res.worst_forbidden = std::max(res.worst_forbidden, centre);
            }
          }
        }
      }
    }
  }
  const Scenario ca = make_ca40_e2();
  const BeamSpec beam{BeamFamily::BesselGauss, kDefaultPitch, 2, kDefaultWaist};
  double peak = 0.0;
  for (double b : grid) {
    const Geometry g{b, 0.0, 0.0, 0.0};
    peak = std::max(peak, std::abs(bg_amplitude(ca.transition, beam, g, HalfInt::from_twice(-1),
                                                HalfInt::from_twice(1), 1)));
  }
  for (double tz : {0.0, 0.25 * kPi, 0.5 * kPi}) {
    for (double b : grid) {
      const Geometry g{b, 0.3, tz, 0.0};
      res.ca_dm3 = std::max(res.ca_dm3, std::abs(bg_amplitude(ca.transition, beam, g, HalfInt::from_twice(-1),
                                                              HalfInt::from_twice(5), 1)));
    }
  }
  res.ca_dm3 /= peak;
  return res;
}

/// Alignment angles used for the vortex-center shape comparisons.
inline std::vector<double> shape_angles() { return linspace(0.05, kPi - 0.05, 20); }

/// Max |full/full_ref - oracle/oracle_ref| over the sample angles, both
/// normalized at the angle where |oracle| is largest. Negative when no
/// closed form exists.
inline double small_b_shape_error(const Scenario& s, int oam, LinearPolarization pol, double theta_k = 0.05,
                                  double b = 1e-4) {
  const auto [mi, mf] = oracle_sublevels(s);
  const BeamSpec beam{BeamFamily::BesselGauss, theta_k, oam, kDefaultWaist};
  const auto angles = shape_angles();
  std::vector<cdouble> full, oracle;
  for (double tz : angles) {
    const auto o = small_b_oracle(s, oam, pol, tz, theta_k);
    if (!o) return -1.0;
    oracle.push_back(*o);
    full.push_back(polarized_amplitude(s.transition, beam, Geometry{b, 0.0, tz, 0.0}, mi, mf, as_polarization(pol)));
  }
  std::size_t ref = 0;
  for (std::size_t i = 1; i < oracle.size(); ++i) {
    if (std::abs(oracle[i]) > std::abs(oracle[ref])) ref = i;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    worst = std::max(worst, std::abs(full[i] / full[ref] - oracle[i] / oracle[ref]));
  }
  return worst;
}

/// |strength(theta_z)| / peak over theta_z at b = 0 for one polarization.
inline double centre_strength_ratio(const Scenario& s, int oam, LinearPolarization pol, double theta_z,
                                    double theta_k = kDefaultPitch) {
  const auto [mi, mf] = oracle_sublevels(s);
  const BeamSpec beam{BeamFamily::BesselGauss, theta_k, oam, kDefaultWaist};
  const ProfileEvaluator at(s.transition, beam, theta_z, 0.0, mi, mf);
  double peak = 0.0;
  for (double tz : linspace(0.0, kPi, 181)) {
    const ProfileEvaluator ev(s.transition, beam, tz, 0.0, mi, mf);
    peak = std::max(peak, std::abs(ev.amplitude(as_polarization(pol), 0.0, 0.0)));
  }
  return std::abs(at.amplitude(as_polarization(pol), 0.0, 0.0)) / peak;
}

/// Max over theta_z of | |M_H| - |M_V| | / peak at b = 1e-4, for the Ar l = 1, 2 case.
inline double h_equals_v_error(const Scenario& s, int oam, double theta_k = kDefaultPitch) {
  const auto [mi, mf] = oracle_sublevels(s);
  const BeamSpec beam{BeamFamily::BesselGauss, theta_k, oam, kDefaultWaist};
  double worst = 0.0, peak = 0.0;
  for (double tz : linspace(0.0, kPi, 41)) {
    const ProfileEvaluator ev(s.transition, beam, tz, 0.0, mi, mf);
    const double h = std::abs(ev.amplitude(horizontal(), 0.0, 0.0));
    const double v = std::abs(ev.amplitude(vertical(), 0.0, 0.0));
    worst = std::max(worst, std::abs(h - v));
    peak = std::max({peak, h, v});
  }
  return peak > 0.0 ? worst / peak : 0.0;
}

/// Strength at b_small relative to the profile peak, worst over H/V at the
/// given alignment angle.
inline double central_extinction(const Scenario& s, int oam, double theta_z, double b_small = 1e-6) {
  const auto [mi, mf] = oracle_sublevels(s);
  const BeamSpec beam{BeamFamily::BesselGauss, kDefaultPitch, oam, kDefaultWaist};
  double worst = 0.0;
  {
    const ProfileEvaluator ev(s.transition, beam, theta_z, 0.0, mi, mf);
    for (const Polarization& pol : {horizontal(), vertical()}) {
      const HelicityWeights w = decompose_polarization(pol);
      double peak = 0.0;
      for (double b : linspace(0.0, 30.0, 1501)) peak = std::max(peak, std::abs(ev.amplitude(w, b, 0.0)));
      worst = std::max(worst, std::abs(ev.amplitude(w, b_small, 0.0)) / peak);
    }
  }
  return worst;
}

/// Largest |cross term| / (|M1|^2 + |E2|^2) peak on the mixed-multipole figure
/// grid (dm = 1, phi_b = 0, theta_z = pi/4, H and V, l in {0,1,2}).
inline double ne_interference(double m1 = 1.1, double e2 = 1.0) {
  const Scenario full = make_ne5_m1e2(m1, e2);
  const Scenario only_m1 = make_ne5_m1e2(m1, 0.0);
  const Scenario only_e2 = make_ne5_m1e2(0.0, e2);
  const auto [mi, mf] = oracle_sublevels(full);
  double worst = 0.0;
  for (int l = 0; l <= 2; ++l) {
    const BeamSpec beam{BeamFamily::BesselGauss, kDefaultPitch, l, kDefaultWaist};
    const ProfileEvaluator ef(full.transition, beam, 0.25 * kPi, 0.0, mi, mf);
    const ProfileEvaluator em(only_m1.transition, beam, 0.25 * kPi, 0.0, mi, mf);
    const ProfileEvaluator ee(only_e2.transition, beam, 0.25 * kPi, 0.0, mi, mf);
    for (const Polarization& pol : {horizontal(), vertical()}) {
      const HelicityWeights w = decompose_polarization(pol);
      double peak = 0.0, cross = 0.0;
      for (double b : linspace(0.0, 6.0, 241)) {
        const double f = std::norm(ef.amplitude(w, b, 0.0));
        const double sum = std::norm(em.amplitude(w, b, 0.0)) + std::norm(ee.amplitude(w, b, 0.0));
        peak = std::max(peak, sum);
        cross = std::max(cross, std::abs(f - sum));
      }
      worst = std::max(worst, cross / peak);
    }
  }
  return worst;
}

struct AppendixResult {
  double active_passive = 0.0;  // max | |active| - |passive| | / max |active|
  double table = 0.0;           // max |tensor - constant x closed form|
};

/// Constant linking the general geometry tensor to each tabulated entry.
inline cdouble table_constant(EulerConvention conv, LinearPolarization pol, int dm) {
  const double r2 = 1.0 / std::sqrt(2.0), r3 = std::sqrt(3.0) / 2.0;
  const cdouble I{0.0, 1.0};
  const bool active = conv == EulerConvention::ActivePsiTheta;
  switch (std::abs(dm)) {
    case 0:
      if (pol == LinearPolarization::H) return -r3;
      return active ? -I * r3 : cdouble(0.0);
    case 1: return pol == LinearPolarization::H ? cdouble(r2) : I * r2;
    default:
      if (pol == LinearPolarization::H) return active ? -r2 : -r2 / 2.0;
      return -I * r2;
  }
}

inline AppendixResult appendix_equivalence(unsigned seed = 20240613u) {
  AppendixResult res;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), pol_ang(0.0, kPi);
  for (const Scenario& s : {make_ca40_e2(), make_ar13_m1(), make_ne5_m1e2()}) {
    double scale = 0.0, worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double psi = ang(rng), theta = pol_ang(rng);
      for (HalfInt mi : projections(s.transition.j_i)) {
        for (HalfInt mf : projections(s.transition.j_f)) {
          for (int lambda : {-1, 1}) {
            const double a = std::abs(appendix_plane_wave_amplitude(s.transition, mi, mf, lambda, psi, theta));
            const double p = std::abs(passive_plane_wave_amplitude(s.transition, mi, mf, lambda, psi, theta));
            scale = std::max(scale, a);
            worst = std::max(worst, std::abs(a - p));
          }
        }
      }
    }
    res.active_passive = std::max(res.active_passive, worst / scale);
  }
  for (int k = 0; k < 20; ++k) {
    const double azimuth = ang(rng), theta = pol_ang(rng);
    for (auto conv : {EulerConvention::ActivePsiTheta, EulerConvention::PassiveThetaPhi}) {
      for (auto pol : {LinearPolarization::H, LinearPolarization::V}) {
        for (int dm = -2; dm <= 2; ++dm) {
          const cdouble general = appendix_geometry_tensor(2, conv, dm, pol, azimuth, theta);
          const cdouble closed = appendix_geometry_terms(2, conv, dm, pol, azimuth, theta);
          res.table = std::max(res.table, std::abs(general - table_constant(conv, pol, dm) * closed));
        }
      }
    }
  }
  return res;
}

/// Max |map(phi_b)[a][j] - map(-phi_b)[a][n-1-j]|.
inline double mirror_error(const std::string& scenario_id = "ca40_e2", int oam = 1, double phi_b = -0.45) {
  ScanRequest req;
  req.scenario_id = scenario_id;
  req.beam.oam = oam;
  req.geometry = Geometry{0.0, phi_b, 0.25 * kPi, 0.0};
  req.alpha_steps = 19;
  req.b_min = 0.0;
  req.b_max = 5.0;
  req.b_steps = 51;
  const Grid a = run_polmap(req, true);
  req.geometry.phi_b = -phi_b;
  const Grid b = run_polmap(req, true);
  double worst = 0.0;
  const std::size_t n = a.column_values.size();
  for (std::size_t r = 0; r < a.values.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(a.values[r][c] - b.values[r][n - 1 - c]));
  }
  return worst;
}

/// Synthetic polarization-map data for a fit round trip.
inline std::vector<FitSample> synthetic_map(const FitRequest& truth, double noise, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FitRequest req = truth;
  std::vector<FitSample> data;
  for (double alpha : linspace(0.0, kPi, 7)) {
    for (double b : linspace(-5.0, 5.0, 41)) data.push_back({alpha, b, 0.0, 0});
  }
  req.data = data;
  req.free = {FitParam::Pitch};
  const ScenarioRegistry registry;
  const detail::FitModel model(req, registry.find(req.scenario_id));
  const Eigen::VectorXd y = model.predict(model.initial());
  double peak = y.maxCoeff();
  for (std::size_t k = 0; k < data.size(); ++k) {
    data[k].strength = y[static_cast<Eigen::Index>(k)] + noise * peak * gauss(rng);
  }
  return data;
}

struct FitRoundTrip {
  double zero_noise_rel_error = 0.0;  // max relative parameter error
  double zero_noise_residual = 0.0;
  bool zero_noise_converged = false;
  double noisy_pitch_error = 0.0;  // |fitted pitch - true|, worst over seeds
  bool noisy_converged = false;
};

inline FitRequest fit_truth(const std::string& scenario_id = "ca40_e2", int oam = 1) {
  FitRequest truth;
  truth.scenario_id = scenario_id;
  truth.beam = BeamSpec{BeamFamily::BesselGauss, kDefaultPitch, oam, kDefaultWaist};
  truth.geometry = Geometry{0.0, -0.45, 0.25 * kPi, 0.0};
  return truth;
}

inline FitRoundTrip fit_round_trip(const std::string& scenario_id = "ca40_e2", int oam = 1, int noisy_seeds = 3) {
  FitRoundTrip res;
  const FitRequest truth = fit_truth(scenario_id, oam);
  FitRequest start = truth;
  start.beam.pitch = 0.078;
  start.beam.waist = 7.5;
  start.geometry.phi_b = -0.3;
  start.free = {FitParam::Pitch, FitParam::PhiB, FitParam::Waist};

  start.data = synthetic_map(truth, 0.0, 1u);
  const FitResult clean = run_fit(start);
  res.zero_noise_converged = clean.converged;
  res.zero_noise_residual = clean.residual_norm;
  res.zero_noise_rel_error = std::max({std::abs(clean.value("pitch") / truth.beam.pitch - 1),
                                       std::abs(clean.value("phi_b") / truth.geometry.phi_b - 1),
                                       std::abs(clean.value("waist") / truth.beam.waist - 1)});

  res.noisy_converged = true;
  start.free = {FitParam::Pitch, FitParam::PhiB, FitParam::Waist, FitParam::Scale};
  for (int seed = 0; seed < noisy_seeds; ++seed) {
    start.data = synthetic_map(truth, 0.01, 100u + static_cast<unsigned>(seed));
    const FitResult noisy = run_fit(start);
    res.noisy_converged = res.noisy_converged && noisy.converged;
    res.noisy_pitch_error = std::max(res.noisy_pitch_error, std::abs(noisy.value("pitch") - truth.beam.pitch));
  }
  return res;
}

}  // namespace twistabs::verify
