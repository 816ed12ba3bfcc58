#pragma once

// Least-squares recovery of beam parameters (pitch, phi_b, waist, scale) from
// measured or synthetic strength profiles. Levenberg-Marquardt with a
// central-difference Jacobian; bounds are enforced by projection.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "twistabs/amplitudes.hpp"
#include "twistabs/error.hpp"
#include "twistabs/scan.hpp"
#include "twistabs/scenarios.hpp"

namespace twistabs {

enum class FitParam { Pitch, PhiB, Waist, Scale };

inline std::string param_name(FitParam p) {
  switch (p) {
    case FitParam::Pitch: return "pitch";
    case FitParam::PhiB: return "phi_b";
    case FitParam::Waist: return "waist";
    default: return "scale";
  }
}

inline FitParam parse_fit_param(const std::string& s) {
  if (s == "pitch" || s == "theta_k") return FitParam::Pitch;
  if (s == "phi_b" || s == "phi-b") return FitParam::PhiB;
  if (s == "waist" || s == "w0") return FitParam::Waist;
  if (s == "scale") return FitParam::Scale;
  throw UsageError("unknown fit parameter '" + s + "' (pitch, phi_b, waist, scale)");
}

/// One measured point. alpha is NaN for profile data; negative b is read at
/// azimuth phi_b + pi.
struct FitSample {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double b = 0.0;
  double strength = 0.0;
  int profile = 0;
};

struct FitRequest {
  std::string scenario_id = "ca40_e2";
  std::optional<HalfInt> m_i;
  std::optional<HalfInt> m_f;
  BeamSpec beam{BeamFamily::BesselGauss, kDefaultPitch, 0, kDefaultWaist};  // pitch/waist: initial or fixed
  Geometry geometry{};                                                       // phi_b: initial or fixed
  Polarization polarization = horizontal();  // used for rows without alpha
  double delta = 0.0;                         // delta for rows with alpha
  double scale = 1.0;
  std::vector<FitParam> free{FitParam::Pitch, FitParam::PhiB, FitParam::Waist};
  std::map<FitParam, std::pair<double, double>> bounds;
  bool shared_phi_b = true;  // false: one phi_b per profile id
  std::vector<FitSample> data;
  double tolerance = 1e-12;
  int max_iterations = 200;

  void validate() const {
    if (free.empty()) throw UsageError("fit needs at least one free parameter");
    if (data.empty()) throw UsageError("fit data is empty");
    for (const auto& s : data) {
      if (!std::isfinite(s.b) || !std::isfinite(s.strength)) throw UsageError("fit data contains non-finite values");
    }
    for (const auto& [p, range] : bounds) {
      if (!(range.first <= range.second)) throw UsageError("empty bound interval for " + param_name(p));
    }
    if (!(tolerance > 0.0) || max_iterations < 1) throw UsageError("invalid convergence settings");
  }
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> errors;  // sqrt of covariance diagonal
  Eigen::MatrixXd covariance;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;

  double value(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return values[i];
    }
    throw UsageError("no fitted parameter '" + name + "'");
  }
};

/// Reads a table with columns b_lambda and strength (or the first strength_*
/// column) and optionally alpha and profile.
inline std::vector<FitSample> samples_from_table(const Table& t) {
  auto find = [&](auto pred) -> int {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (pred(t.header[i])) return static_cast<int>(i);
    }
    return -1;
  };
  const int cb = find([](const std::string& h) { return h == "b_lambda" || h == "b"; });
  const int cs = find([](const std::string& h) { return h == "strength" || h.rfind("strength_", 0) == 0; });
  const int ca = find([](const std::string& h) { return h == "alpha"; });
  const int cp = find([](const std::string& h) { return h == "profile"; });
  if (cb < 0 || cs < 0) throw UsageError("fit data needs b_lambda and strength columns");
  std::vector<FitSample> out;
  for (const auto& r : t.rows) {
    FitSample s;
    s.b = r[static_cast<std::size_t>(cb)];
    s.strength = r[static_cast<std::size_t>(cs)];
    if (ca >= 0) s.alpha = r[static_cast<std::size_t>(ca)];
    if (cp >= 0) s.profile = static_cast<int>(std::lround(r[static_cast<std::size_t>(cp)]));
    out.push_back(s);
  }
  return out;
}

namespace detail {

class FitModel {
 public:
  FitModel(const FitRequest& req, const Scenario& scenario) : req_(req), scenario_(scenario) {
    m_i_ = req.m_i.value_or(scenario.default_m_i);
    m_f_ = req.m_f.value_or(scenario.default_m_f);
    for (const auto& s : req.data) {
      if (std::find(profiles_.begin(), profiles_.end(), s.profile) == profiles_.end()) profiles_.push_back(s.profile);
    }
    std::sort(profiles_.begin(), profiles_.end());
    for (FitParam p : {FitParam::Pitch, FitParam::PhiB, FitParam::Waist, FitParam::Scale}) {
      if (std::find(req.free.begin(), req.free.end(), p) == req.free.end()) continue;
      if (p == FitParam::PhiB && !req.shared_phi_b && profiles_.size() > 1) {
        for (int id : profiles_) add_slot(p, id, param_name(p) + "_" + std::to_string(id));
      } else {
        add_slot(p, -1, param_name(p));
      }
    }
  }

  std::size_t size() const { return slots_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  Eigen::VectorXd initial() const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(slots_.size()));
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      double v = 0.0;
      switch (slots_[i].param) {
        case FitParam::Pitch: v = req_.beam.pitch; break;
        case FitParam::PhiB: v = req_.geometry.phi_b; break;
        case FitParam::Waist: v = req_.beam.waist; break;
        case FitParam::Scale: v = req_.scale; break;
      }
      x[static_cast<Eigen::Index>(i)] = std::clamp(v, lower_[i], upper_[i]);
    }
    return x;
  }

  /// Model strengths for every sample.
  Eigen::VectorXd predict(const Eigen::VectorXd& x) const {
    BeamSpec beam = req_.beam;
    double scale = req_.scale;
    double phi_shared = req_.geometry.phi_b;
    std::map<int, double> phi_per_profile;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      const double v = x[static_cast<Eigen::Index>(i)];
      switch (slots_[i].param) {
        case FitParam::Pitch: beam.pitch = v; break;
        case FitParam::Waist: beam.waist = v; break;
        case FitParam::Scale: scale = v; break;
        case FitParam::PhiB:
          if (slots_[i].profile < 0) {
            phi_shared = v;
          } else {
            phi_per_profile[slots_[i].profile] = v;
          }
          break;
      }
    }
    const ProfileEvaluator ev(scenario_.transition, beam, req_.geometry.theta_z, req_.geometry.phi_z, m_i_, m_f_);
    const HelicityWeights fixed = decompose_polarization(req_.polarization);
    Eigen::VectorXd out(static_cast<Eigen::Index>(req_.data.size()));
    for (std::size_t k = 0; k < req_.data.size(); ++k) {
      const FitSample& s = req_.data[k];
      const auto it = phi_per_profile.find(s.profile);
      const double phi = it == phi_per_profile.end() ? phi_shared : it->second;
      const HelicityWeights w =
          std::isnan(s.alpha) ? fixed : decompose_polarization(GeneralPolarization{s.alpha, req_.delta});
      out[static_cast<Eigen::Index>(k)] = scale * ev.signed_strength(w, s.b, phi);
    }
    return out;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = predict(x);
    for (std::size_t k = 0; k < req_.data.size(); ++k) r[static_cast<Eigen::Index>(k)] -= req_.data[k].strength;
    return r;
  }

 private:
  struct Slot {
    FitParam param;
    int profile;
  };

  void add_slot(FitParam p, int profile, std::string name) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    if (p == FitParam::Pitch) {
      lo = 1e-9;
      hi = 0.5 * kPi - 1e-9;
    } else if (p == FitParam::Waist) {
      lo = 1e-9;
    }
    if (const auto it = req_.bounds.find(p); it != req_.bounds.end()) {
      lo = std::max(lo, it->second.first);
      hi = std::min(hi, it->second.second);
    }
    if (!(lo <= hi)) throw UsageError("bounds for " + param_name(p) + " leave no admissible value");
    slots_.push_back({p, profile});
    names_.push_back(std::move(name));
    lower_.push_back(lo);
    upper_.push_back(hi);
  }

  const FitRequest& req_;
  const Scenario& scenario_;
  HalfInt m_i_, m_f_;
  std::vector<int> profiles_;
  std::vector<Slot> slots_;
  std::vector<std::string> names_;
  std::vector<double> lower_, upper_;
};

}  // namespace detail

inline FitResult run_fit(const FitRequest& req, const ScenarioRegistry& registry = ScenarioRegistry()) {
  req.validate();
  req.beam.validate();
  const Scenario& scenario = registry.find(req.scenario_id);
  const detail::FitModel model(req, scenario);
  const auto n = static_cast<Eigen::Index>(model.size());
  const auto& lo = model.lower();
  const auto& hi = model.upper();

  auto project = [&](Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };
  auto jacobian = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r0) {
    Eigen::MatrixXd J(r0.size(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(std::abs(x[i]), 1e-2);
      Eigen::VectorXd xp = x, xm = x;
      xp[i] = std::min(x[i] + h, hi[i]);
      xm[i] = std::max(x[i] - h, lo[i]);
      const Eigen::VectorXd rp = (xp[i] != x[i]) ? model.residual(xp) : r0;
      const Eigen::VectorXd rm = (xm[i] != x[i]) ? model.residual(xm) : r0;
      J.col(i) = (rp - rm) / (xp[i] - xm[i]);
    }
    return J;
  };

  Eigen::VectorXd x = project(model.initial());
  Eigen::VectorXd r = model.residual(x);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  FitResult out;
  out.names = model.names();
  Eigen::MatrixXd J = jacobian(x, r);

  for (out.iterations = 1; out.iterations <= req.max_iterations; ++out.iterations) {
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() <= 1e-3 * req.tolerance * std::max(cost, 1e-300) || cost == 0.0) {
      out.converged = true;
      out.message = "gradient vanished";
      break;
    }
    bool accepted = false;
    bool small_step = false;
    while (mu < 1e20) {
      Eigen::MatrixXd M = A;
      for (Eigen::Index i = 0; i < n; ++i) M(i, i) += mu * std::max(A(i, i), 1e-30);
      const Eigen::VectorXd step = M.ldlt().solve(-g);
      const Eigen::VectorXd xt = project(x + step);
      const Eigen::VectorXd dx = xt - x;
      small_step = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(dx[i]) > req.tolerance * (std::abs(x[i]) + req.tolerance)) small_step = false;
      }
      const Eigen::VectorXd rt = model.residual(xt);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        const double drop = cost - ct;
        x = xt;
        r = rt;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (drop <= req.tolerance * req.tolerance * std::max(cost, 1e-300)) small_step = true;
        break;
      }
      if (small_step) break;
      mu *= 4.0;
    }
    if (small_step) {
      out.converged = true;
      out.message = "step below tolerance";
      break;
    }
    if (!accepted) {
      out.message = "no descent direction found";
      break;
    }
    J = jacobian(x, r);
  }
  if (!out.converged && out.message.empty()) out.message = "iteration limit reached";
  if (out.iterations > req.max_iterations) out.iterations = req.max_iterations;

  J = jacobian(x, r);
  const auto m = static_cast<double>(r.size());
  const double sigma2 = (m > static_cast<double>(n)) ? cost / (m - static_cast<double>(n))
                                                     : std::numeric_limits<double>::quiet_NaN();
  const Eigen::MatrixXd A = J.transpose() * J;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  out.covariance = lu.isInvertible()
                       ? Eigen::MatrixXd(sigma2 * lu.inverse())
                       : Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values.push_back(x[i]);
    out.errors.push_back(std::sqrt(std::max(0.0, out.covariance(i, i))));
  }
  out.residual_norm = std::sqrt(cost);
  return out;
}

}  // namespace twistabs
