#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "twistabs/amplitudes.hpp"
#include "twistabs/scenarios.hpp"

using namespace twistabs;

namespace {

HalfInt H(int twice) { return HalfInt::from_twice(twice); }

TransitionSpec ca() { return make_ca40_e2().transition; }
TransitionSpec ar() { return make_ar13_m1().transition; }
TransitionSpec ne() { return make_ne5_m1e2().transition; }

BeamSpec bg(int oam, double pitch = kDefaultPitch) { return {BeamFamily::BesselGauss, pitch, oam, kDefaultWaist}; }
BeamSpec bessel(int oam, double pitch = kDefaultPitch) { return {BeamFamily::Bessel, pitch, oam, kDefaultWaist}; }

}  // namespace

TEST(TransitionSpec, ValidationCatchesBadCouplings) {
  TransitionSpec t{H(1), H(5), std::nullopt, {{1, MultipoleKind::Magnetic, 1.0}}};
  EXPECT_THROW(t.validate(), DomainError);  // M1 cannot reach 5/2 from 1/2
  t.multipoles = {};
  EXPECT_THROW(t.validate(), DomainError);
  t.multipoles = {{0, MultipoleKind::Electric, 1.0}};
  EXPECT_THROW(t.validate(), DomainError);
  TransitionSpec hf{H(1), H(7), HyperfineCoupling{H(1), HalfInt(2), HalfInt(3)}, {{3, MultipoleKind::Electric, 1.0}}};
  EXPECT_THROW(hf.validate(), DomainError);  // F_i = 2 impossible from j = 1/2, I = 1/2
  hf.hyperfine->F_i = HalfInt(1);
  hf.hyperfine->F_f = HalfInt(5);
  EXPECT_THROW(hf.validate(), DomainError);
  hf.hyperfine->F_f = HalfInt(4);
  EXPECT_NO_THROW(hf.validate());
}

TEST(PlaneWave, ArgonM1Amplitudes) {
  // |M(3L/2 <- L/2)| = sqrt(3 pi) |M1|, |M(L/2 <- -L/2)| = sqrt(pi) |M1|, both odd in L.
  const auto t = ar();
  for (int L : {-1, 1}) {
    const cdouble big = plane_wave_amplitude(t, H(L), H(3 * L), L);
    const cdouble small = plane_wave_amplitude(t, H(-L), H(L), L);
    EXPECT_NEAR(std::abs(big), std::sqrt(3 * kPi), 1e-14);
    EXPECT_NEAR(std::abs(small), std::sqrt(kPi), 1e-14);
  }
  EXPECT_NEAR(std::abs(plane_wave_amplitude(t, H(1), H(3), 1) + plane_wave_amplitude(t, H(-1), H(-3), -1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(plane_wave_amplitude(t, H(-1), H(1), 1) + plane_wave_amplitude(t, H(1), H(-1), -1)), 0.0, 1e-14);
}

TEST(PlaneWave, VanishesOffHelicityTransfer) {
  for (const auto& t : {ca(), ar(), ne()}) {
    for (HalfInt mi : projections(t.j_i))
      for (HalfInt mf : projections(t.j_f))
        for (int L : {-1, 1})
          if (mf - mi != HalfInt(L)) {
            EXPECT_EQ(plane_wave_amplitude(t, mi, mf, L), 0.0);
          }
  }
}

TEST(PlaneWave, CalciumIsProportionalToCG) {
  const auto t = ca();
  std::optional<cdouble> ratio;
  for (HalfInt mi : projections(t.j_i))
    for (int L : {-1, 1}) {
      const HalfInt mf = mi + HalfInt(L);
      const double c = clebsch_gordan(t.j_i, mi, HalfInt(2), HalfInt(L), t.j_f, mf);
      const cdouble r = plane_wave_amplitude(t, mi, mf, L) / c;
      if (!ratio) ratio = r;
      EXPECT_NEAR(std::abs(r - *ratio), 0.0, 1e-14);
    }
  EXPECT_NEAR(std::abs(*ratio), std::sqrt(4 * kPi * 5 / 6.0), 1e-14);
}

TEST(PlaneWave, RejectsBadSublevels) {
  EXPECT_THROW(plane_wave_amplitude(ca(), H(3), H(5), 1), DomainError);
  EXPECT_THROW(plane_wave_amplitude(ca(), H(1), HalfInt(1), 1), DomainError);
  EXPECT_THROW(plane_wave_amplitude(ca(), H(1), H(3), 0), DomainError);
}

TEST(PlaneWave, HyperfineCoefficientFromSixJ) {
  // yb171 (F 0 -> 3) against the spin-less amplitude, through an exact 6j/CG oracle.
  const auto t171 = make_yb171_e3().transition;
  const auto t172 = make_yb172_e3().transition;
  const cdouble a171 = plane_wave_amplitude(t171, HalfInt(0), HalfInt(1), 1);
  const cdouble a172 = plane_wave_amplitude(t172, H(1), H(3), 1);
  // (-1)^{jf+I+Fi-j} sqrt(2Fi+1) C(0 0;3 1|3 1) {7/2 3 1/2; 0 1/2 3} vs C(1/2 1/2;3 1|7/2 3/2)/sqrt(8)
  const long double six = oracle::sixj(7, 6, 1, 0, 1, 6).value();
  const long double c171 = -1.0L * oracle::cg(0, 0, 6, 2, 6, 2).value() * six;
  const long double c172 = oracle::cg(1, 1, 6, 2, 7, 3).value() / std::sqrt(8.0L);
  EXPECT_NEAR(std::abs(a171 / a172 - cdouble(static_cast<double>(c171 / c172))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(a171 / a172), 2 / std::sqrt(5.0), 1e-14);
}

TEST(Bessel, CentreSelectionRule) {
  // b = 0: only dm = m_gamma survives.
  for (const auto& t : {ca(), ar(), ne()}) {
    for (int l = 0; l <= 2; ++l)
      for (int L : {-1, 1})
        for (HalfInt mi : projections(t.j_i))
          for (HalfInt mf : projections(t.j_f)) {
            const cdouble a = bessel_amplitude(t, bessel(l), Geometry{}, mi, mf, L);
            if ((mf - mi).as_int() != l + L) {
              EXPECT_EQ(a, 0.0);
            }
          }
  }
}

TEST(Bessel, CalciumDeltaM3IsNull) {
  const auto t = ca();
  for (double b : {0.0, 0.4, 1.7, 3.2})
    EXPECT_LE(std::abs(bessel_amplitude(t, bessel(2), Geometry{b, 0.3, 0.0, 0.0}, H(-1), H(5), 1)), 1e-14);
  EXPECT_LE(std::abs(bg_amplitude(t, bg(2), Geometry{1.0, 0.3, 0.8, 0.2}, H(-1), H(5), 1)), 1e-14);
}

TEST(Bessel, ReducesToPlaneWaveOnAxis) {
  // theta_k = 0, l = 0, b = 0: M^BB = i^{dm - 2 m_gamma} M^pw.
  for (const auto& t : {ca(), ar(), ne()})
    for (int L : {-1, 1})
      for (HalfInt mi : projections(t.j_i)) {
        const HalfInt mf = mi + HalfInt(L);
        if (abs(mf) > t.j_f) continue;
        const cdouble got = bessel_amplitude(t, bessel(0, 0.0), Geometry{}, mi, mf, L);
        const cdouble want = detail::i_pow(L - 2 * L) * plane_wave_amplitude(t, mi, mf, L);
        EXPECT_NEAR(std::abs(got - want), 0.0, 1e-14);
      }
}

TEST(Bessel, RequiresAlignedAxis) {
  EXPECT_THROW(bessel_amplitude(ca(), bessel(0), Geometry{0.1, 0.0, 0.2, 0.0}, H(1), H(3), 1), DomainError);
}

TEST(BesselGauss, AlignedAxisIsEnvelopeTimesBessel) {
  const auto t = ne();
  for (double b : {0.0, 0.8, 2.9}) {
    const Geometry g{b, 0.6, 0.0, 0.0};
    for (int L : {-1, 1}) {
      const cdouble got = bg_amplitude(t, bg(1), g, H(1), H(3), L);
      const cdouble want = std::exp(-b * b / 81.0) * bessel_amplitude(t, bg(1), g, H(1), H(3), L);
      EXPECT_NEAR(std::abs(got - want), 0.0, 1e-14);
    }
  }
}

TEST(BesselGauss, InfiniteWaistIsRotatedBessel) {
  const auto t = ca();
  const Geometry g{1.3, 0.2, 0.7, 0.4};
  BeamSpec wide = bg(1);
  wide.waist = 1e12;
  const cdouble a = bg_amplitude(t, wide, g, H(1), H(-1), 1);
  const cdouble b = bg_amplitude(t, bessel(1), g, H(1), H(-1), 1);
  EXPECT_NEAR(std::abs(a - b), 0.0, 1e-14);
  // explicit rotation of the Bessel amplitude
  cdouble sum = 0.0;
  for (HalfInt mfp : projections(t.j_f))
    for (HalfInt mip : projections(t.j_i))
      sum += wigner_small_d(t.j_f, H(-1), mfp, 0.7) * wigner_small_d(t.j_i, H(1), mip, 0.7) *
             bessel_amplitude(t, bessel(1), Geometry{1.3, 0.2, 0.0, 0.0}, mip, mfp, 1);
  sum *= std::polar(1.0, 0.4);  // e^{-i (m_f - m_i) phi_z} with m_f - m_i = -1
  EXPECT_NEAR(std::abs(b - sum), 0.0, 1e-14);
}

TEST(Polarized, HelicityStatesMapToSingleComponents) {
  const auto t = ca();
  const Geometry g{0.9, 0.3, 0.5, 0.1};
  EXPECT_EQ(polarized_amplitude(t, bg(1), g, H(1), H(3), Helicity{-1}), bg_amplitude(t, bg(1), g, H(1), H(3), -1));
  EXPECT_EQ(polarized_amplitude(t, bg(1), g, H(1), H(3), Helicity{1}), -bg_amplitude(t, bg(1), g, H(1), H(3), 1));
  EXPECT_EQ(transition_strength(t, bg(1), g, H(1), H(3), Helicity{1}), std::abs(bg_amplitude(t, bg(1), g, H(1), H(3), 1)));
}

TEST(Polarized, CalciumHorizontalVanishesAtFortyFiveDegrees) {
  const auto t = ca();
  const double s = transition_strength(t, bg(0), Geometry{0.0, 0.0, 0.25 * kPi, 0.0}, H(1), H(3), horizontal());
  const double v = transition_strength(t, bg(0), Geometry{0.0, 0.0, 0.25 * kPi, 0.0}, H(1), H(3), vertical());
  EXPECT_LE(s, 1e-12 * v);
}

TEST(Polarized, CalciumOamTwoHorizontalAndVerticalAgree) {
  const auto t = ca();
  for (double tz : {0.3, 1.0, 2.2}) {
    const Geometry g{1e-4, 0.0, tz, 0.0};
    const cdouble h = polarized_amplitude(t, bg(2, 0.05), g, H(1), H(3), horizontal());
    const cdouble v = polarized_amplitude(t, bg(2, 0.05), g, H(1), H(3), vertical());
    EXPECT_NEAR(std::abs(v) / std::abs(h), 1.0, 1e-3);
  }
}

TEST(Strength, InvariantUnderGlobalPhase) {
  // (alpha, delta + pi) is the same field times -1.
  const auto t = ne();
  const Geometry g{1.1, 0.4, 0.9, 0.0};
  const double a = transition_strength(t, bg(1), g, H(-1), H(1), GeneralPolarization{0.7, 0.2});
  const double b = transition_strength(t, bg(1), g, H(-1), H(1), GeneralPolarization{0.7, 0.2 + kPi});
  EXPECT_NEAR(a, b, 1e-14);
}

TEST(Strength, HelicityIgnoresImpactAzimuth) {
  const auto t = ca();
  for (int L : {-1, 1}) {
    const double ref = transition_strength(t, bg(1), Geometry{1.2, 0.0, 0.0, 0.0}, H(1), H(3), Helicity{L});
    for (double phi : {0.5, 2.0, -1.3})
      EXPECT_NEAR(transition_strength(t, bg(1), Geometry{1.2, phi, 0.0, 0.0}, H(1), H(3), Helicity{L}), ref, 1e-14);
  }
}

TEST(Strength, HelicityAndDeltaMFlip) {
  // |M_{L, dm}| = |M_{-L, -dm}| for a single multipole on axis.
  for (const auto& t : {ca(), ar()})
    for (int l = 0; l <= 2; ++l)
      for (double b : {0.0, 0.7, 2.4})
        for (HalfInt mi : projections(t.j_i))
          for (HalfInt mf : projections(t.j_f)) {
            const Geometry g{b, 0.3, 0.0, 0.0};
            BeamSpec plus = bg(l), minus = bg(-l);
            const double a = std::abs(bg_amplitude(t, plus, g, mi, mf, 1));
            const double c = std::abs(bg_amplitude(t, minus, g, -mi, -mf, -1));
            EXPECT_NEAR(a, c, 1e-14);
          }
}

TEST(Evaluator, AgreesWithFreeFunctions) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : builtin_scenarios()) {
    const auto& t = s.transition;
    for (int rep = 0; rep < 6; ++rep) {
      const BeamSpec beam = bg(static_cast<int>(u(rng) * 4) - 1, 0.05 + 0.3 * u(rng));
      const Geometry g{4 * u(rng), 6 * u(rng), 3 * u(rng), 6 * u(rng)};
      const HalfInt mi = s.default_m_i, mf = s.default_m_f;
      const ProfileEvaluator ev(t, beam, g.theta_z, g.phi_z, mi, mf);
      for (int L : {-1, 1})
        EXPECT_NEAR(std::abs(ev.helicity_amplitude(L, g.b, g.phi_b) - bg_amplitude(t, beam, g, mi, mf, L)), 0.0, 1e-13);
      const Polarization p = GeneralPolarization{3 * u(rng), 3 * u(rng)};
      EXPECT_NEAR(std::abs(ev.amplitude(p, g.b, g.phi_b) - polarized_amplitude(t, beam, g, mi, mf, p)), 0.0, 1e-13);
    }
  }
}

TEST(Evaluator, SignedAxisUsesOppositeAzimuth) {
  const auto t = ca();
  const ProfileEvaluator ev(t, bg(1), 0.8, 0.0, H(1), H(3));
  const auto w = decompose_polarization(horizontal());
  EXPECT_EQ(ev.signed_strength(w, -1.5, 0.2), std::abs(ev.amplitude(w, 1.5, 0.2 + kPi)));
}

TEST(AmplitudeMatrix, IndexesAllSublevels) {
  const AmplitudeMatrix m(ca(), bg(1), Geometry{0.5, 0.1, 0.7, 0.0}, vertical());
  EXPECT_EQ(m.initial_projections().size(), 2u);
  EXPECT_EQ(m.final_projections().size(), 6u);
  for (HalfInt mi : m.initial_projections())
    for (HalfInt mf : m.final_projections())
      EXPECT_EQ(m.at(mi, mf), polarized_amplitude(ca(), bg(1), Geometry{0.5, 0.1, 0.7, 0.0}, mi, mf, vertical()));
  EXPECT_THROW(m.at(H(3), H(1)), DomainError);
}

TEST(Appendix, ReducesToPlaneWaveAtNormalIncidence) {
  // Single multipole: equal up to one fixed phase across sublevels and helicities.
  for (const auto& t : {ca(), ar()}) {
    std::optional<cdouble> phase;
    for (HalfInt mi : projections(t.j_i))
      for (int L : {-1, 1}) {
        const HalfInt mf = mi + HalfInt(L);
        if (abs(mf) > t.j_f) continue;
        const cdouble a = appendix_plane_wave_amplitude(t, mi, mf, L, 0.0, 0.0);
        const cdouble p = plane_wave_amplitude(t, mi, mf, L);
        EXPECT_NEAR(std::abs(a), std::abs(p), 1e-14);
        if (!phase) phase = a / p;
        EXPECT_NEAR(std::abs(a / p - *phase), 0.0, 1e-14);
      }
  }
}

TEST(Appendix, ActiveAndPassiveModuliAgree) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (const auto& t : {ca(), ar(), ne()})
    for (int rep = 0; rep < 50; ++rep) {
      const double psi = 2 * u(rng), theta = u(rng);
      for (HalfInt mi : projections(t.j_i))
        for (HalfInt mf : projections(t.j_f))
          for (int L : {-1, 1})
            EXPECT_NEAR(std::abs(appendix_plane_wave_amplitude(t, mi, mf, L, psi, theta)),
                        std::abs(passive_plane_wave_amplitude(t, mi, mf, L, psi, theta)), 1e-12);
    }
}

TEST(Appendix, FactorisedBesselMatchesRotatedSum) {
  for (const auto& t : {ca(), ar(), make_yb172_e3().transition})
    for (int l = 0; l <= 2; ++l)
      for (double b : {0.0, 0.9, 2.5})
        for (HalfInt mi : projections(t.j_i))
          for (HalfInt mf : projections(t.j_f))
            for (int L : {-1, 1}) {
              const Geometry g{b, 0.4, 0.0, 0.0};
              EXPECT_NEAR(std::abs(appendix_bessel_amplitude(t, bessel(l, 0.2), g, mi, mf, L)),
                          std::abs(bessel_amplitude(t, bessel(l, 0.2), g, mi, mf, L)), 1e-13);
            }
}

TEST(Appendix, TableCells) {
  const double psi = 0.3, th = 0.9;
  using LP = LinearPolarization;
  using EC = EulerConvention;
  EXPECT_NEAR(std::abs(appendix_geometry_terms(2, EC::ActivePsiTheta, 0, LP::H, psi, th) - std::sin(2 * th) * std::cos(psi)), 0.0, 1e-15);
  EXPECT_EQ(appendix_geometry_terms(2, EC::PassiveThetaPhi, 0, LP::V, psi, th), 0.0);
  EXPECT_NEAR(std::abs(appendix_geometry_terms(2, EC::PassiveThetaPhi, 0, LP::H, psi, th) + std::sin(2 * th)), 0.0, 1e-15);
  EXPECT_THROW(appendix_geometry_terms(2, EC::ActivePsiTheta, 3, LP::H, psi, th), DomainError);
  EXPECT_THROW(appendix_geometry_terms(3, EC::ActivePsiTheta, 0, LP::H, psi, th), DomainError);
}

TEST(Appendix, GeneralTensorReproducesTable) {
  // Each cell differs from the general tensor by a fixed constant.
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (auto conv : {EulerConvention::ActivePsiTheta, EulerConvention::PassiveThetaPhi})
    for (auto pol : {LinearPolarization::H, LinearPolarization::V})
      for (int dm = -2; dm <= 2; ++dm) {
        std::optional<cdouble> k;
        for (int rep = 0; rep < 20; ++rep) {
          const double a = u(rng), th = u(rng);
          const cdouble g = appendix_geometry_tensor(2, conv, dm, pol, a, th);
          const cdouble c = appendix_geometry_terms(2, conv, dm, pol, a, th);
          if (std::abs(c) < 1e-3) {
            EXPECT_LE(std::abs(g), 1e-12);
            continue;
          }
          if (!k) k = g / c;
          EXPECT_NEAR(std::abs(g - *k * c), 0.0, 1e-12);
        }
      }
}
