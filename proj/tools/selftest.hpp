#pragma once

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "twistabs/verification.hpp"

namespace twistabs {

struct SelfCheck {
  std::string name;
  double limit;
  std::function<double()> measure;
  bool known_failure = false;  // unattainable with the model as specified
};

inline std::vector<SelfCheck> selftest_checks() {
  using LP = LinearPolarization;
  std::vector<SelfCheck> checks;
  checks.push_back({"CG orthogonality, j <= 7/2", 1e-12, [] { return verify::cg_orthogonality_error(7); }});
  checks.push_back({"6j orthogonality, j <= 7/2", 1e-12, [] { return verify::sixj_orthogonality_error(7); }});
  checks.push_back({"b->0 selection rule (forbidden/peak)", 1e-9,
                    [] { return verify::selection_rules().worst_forbidden; }});
  checks.push_back({"Ca E2 dm=3 null", 1e-14, [] { return verify::selection_rules().ca_dm3; }});
  const std::vector<Scenario> shaped = {make_ca40_e2(), make_ar13_m1(), make_yb172_e3(), make_yb171_e3()};
  for (const auto& s : shaped) {
    for (int l = 0; l <= 2; ++l) {
      for (LP p : {LP::H, LP::V}) {
        checks.push_back({"vortex-center shape " + s.id + " l=" + std::to_string(l) + (p == LP::H ? " H" : " V"),
                          1e-3, [s, l, p] { return verify::small_b_shape_error(s, l, p); }});
      }
    }
  }
  for (auto [m1, e2] : {std::pair{1.1, 1.0}, std::pair{0.0, 1.0}, std::pair{1.1, 0.0}}) {
    for (LP p : {LP::H, LP::V}) {
      char label[96];
      std::snprintf(label, sizeof label, "vortex-center shape ne5 M1=%g E2=%g l=0 %s", m1, e2, p == LP::H ? "H" : "V");
      checks.push_back({label, 1e-3, [m1 = m1, e2 = e2, p] {
                          return verify::small_b_shape_error(make_ne5_m1e2(m1, e2), 0, p);
                        }});
    }
  }
  checks.push_back({"Ca H zero at theta_z=pi/4, l=0", 1e-12,
                    [] { return verify::centre_strength_ratio(make_ca40_e2(), 0, LP::H, 0.25 * kPi); }});
  checks.push_back({"Ar V zero at theta_z=pi/2, l=0", 1e-12,
                    [] { return verify::centre_strength_ratio(make_ar13_m1(), 0, LP::V, 0.5 * kPi); }});
  checks.push_back({"Ar |H| = |V|, l=1", 1e-12, [] { return verify::h_equals_v_error(make_ar13_m1(), 1); }});
  checks.push_back({"Ar |H| = |V|, l=2", 1e-12, [] { return verify::h_equals_v_error(make_ar13_m1(), 2); }});
  checks.push_back({"Yb H zero at theta_z=pi/2, l=0", 1e-12,
                    [] { return verify::centre_strength_ratio(make_yb172_e3(), 0, LP::H, 0.5 * kPi); }});
  for (const auto& s : {make_yb172_e3(), make_yb171_e3()}) {
    checks.push_back({"E3 extinction l=5 " + s.id, 1e-10,
                      [s] { return verify::central_extinction(s, 5, 0.25 * kPi); }});
  }
  checks.push_back({"hyperfine scale constant", 1e-10, [] {
                      const auto hc = hyperfine_comparison(make_yb171_e3(), make_yb172_e3(),
                                                           BeamSpec{BeamFamily::BesselGauss, kDefaultPitch, 1, kDefaultWaist},
                                                           Geometry{0.0, 0.0, 0.25 * kPi, 0.0}, horizontal(),
                                                           linspace(0.0, 5.0, 500));
                      return hc.minima_171 == hc.minima_172 ? hc.ratio_deviation : 1.0;
                    }});
  checks.push_back({"Ne M1/E2 cross term", 1e-12, [] { return verify::ne_interference(); }, true});
  checks.push_back({"active vs passive rotation", 1e-12, [] { return verify::appendix_equivalence().active_passive; }});
  checks.push_back({"geometry table entries", 1e-12, [] { return verify::appendix_equivalence().table; }});
  checks.push_back({"polmap mirror symmetry", 1e-12, [] { return verify::mirror_error(); }});
  checks.push_back({"fit round trip (zero noise)", 1e-6, [] { return verify::fit_round_trip("ca40_e2", 1, 1).zero_noise_rel_error; }});
  return checks;
}

/// Prints one line per check; returns the number of unexpected results.
inline int run_selftest(std::FILE* out) {
  int bad = 0;
  for (const auto& c : selftest_checks()) {
    const double v = c.measure();
    const bool pass = v >= 0.0 && v <= c.limit;
    const char* tag = pass ? (c.known_failure ? "XPASS" : "PASS") : (c.known_failure ? "KNOWN-FAIL" : "FAIL");
    if (pass == c.known_failure) ++bad;
    std::fprintf(out, "%-10s %-52s %.3e (limit %.0e)\n", tag, c.name.c_str(), v, c.limit);
  }
  return bad;
}

}  // namespace twistabs
