// twistabs: scans, polarization maps and fits for twisted-light absorption.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenario_file.hpp"
#include "selftest.hpp"
#include "twistabs/fit.hpp"
#include "twistabs/scan.hpp"
#include "twistabs/scenarios.hpp"

using namespace twistabs;

namespace {

struct Options {
  std::string scenario = "ca40_e2";
  std::string scenario_file;
  std::string multipoles;
  std::string F_i, F_f;
  std::string mi, mf;
  int oam = 0;
  double pitch = kDefaultPitch;
  double waist = kDefaultWaist;
  std::string family = "bessel-gauss";
  double theta_z = 0.0, phi_z = 0.0, phi_b = 0.0;
  double b = 0.0;
  std::vector<std::string> pols;
  double delta = 0.0;
  int alpha_steps = 37;
  double b_min = 0.0, b_max = 6.0;
  int b_steps = 121;
  bool signed_b = false;
  double theta_min = 0.0, theta_max = kPi;
  int theta_steps = 91;
  std::string normalize = "raw";
  std::string out;
  bool ascii = false;
  // fit
  std::string data;
  std::vector<std::string> free{"pitch", "phi_b", "waist"};
  std::vector<std::string> bounds;
  double scale = 1.0;
  bool per_profile_phi_b = false;
  double tolerance = 1e-12;
  int max_iter = 200;
};

HalfInt parse_sublevel(const std::string& text, const char* flag) {
  try {
    return parse_half_int(text);
  } catch (const DomainError&) {
    throw UsageError(std::string(flag) + " expects a half-integer such as 3/2, got '" + text + "'");
  }
}

ScenarioRegistry build_registry(const Options& o) {
  ScenarioRegistry reg;
  if (!o.F_i.empty() || !o.F_f.empty()) {
    const HalfInt fi = o.F_i.empty() ? HalfInt(0) : parse_sublevel(o.F_i, "--F-i");
    const HalfInt ff = o.F_f.empty() ? HalfInt(3) : parse_sublevel(o.F_f, "--F-f");
    reg.add(make_yb171_e3(fi, ff));
  }
  if (!o.scenario_file.empty()) load_scenario_file(o.scenario_file, reg);
  if (!o.multipoles.empty()) {
    Scenario s = reg.find(o.scenario);
    s.transition.multipoles = parse_multipoles(o.multipoles);
    reg.add(std::move(s));
  }
  return reg;
}

ScanRequest build_scan(const Options& o, bool allow_sweep, bool* sweep) {
  ScanRequest req;
  req.scenario_id = o.scenario;
  if (o.mi == "all" || o.mf == "all") req.all_sublevels = true;
  if (!o.mi.empty() && o.mi != "all") req.m_i = parse_sublevel(o.mi, "--mi");
  if (!o.mf.empty() && o.mf != "all") req.m_f = parse_sublevel(o.mf, "--mf");
  req.beam = BeamSpec{o.family == "bessel" ? BeamFamily::Bessel : BeamFamily::BesselGauss, o.pitch, o.oam, o.waist};
  req.geometry = Geometry{o.b, o.phi_b, o.theta_z, o.phi_z};
  if (sweep) *sweep = false;
  if (!o.pols.empty()) {
    req.polarizations.clear();
    for (const auto& p : o.pols) {
      if (p == "sweep") {
        if (!allow_sweep) throw UsageError("--pol sweep is only valid for polmap");
        *sweep = true;
        continue;
      }
      req.polarizations.push_back(parse_polarization(p));
    }
    if (sweep && *sweep && !req.polarizations.empty()) throw UsageError("--pol sweep cannot be combined with other states");
    if (req.polarizations.empty()) req.polarizations.push_back({"H", horizontal()});
  } else if (allow_sweep) {
    *sweep = true;
  }
  req.sweep_delta = o.delta;
  req.alpha_steps = o.alpha_steps;
  req.b_min = o.b_min;
  req.b_max = o.b_max;
  req.b_steps = o.b_steps;
  req.signed_b = o.signed_b;
  req.theta_min = o.theta_min;
  req.theta_max = o.theta_max;
  req.theta_steps = o.theta_steps;
  req.normalization = o.normalize == "peak" ? Normalization::Peak : Normalization::Raw;
  return req;
}

void deliver(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text(text, path);
  }
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int cmd_scenarios(const Options& o) {
  const ScenarioRegistry reg = build_registry(o);
  std::printf("%-10s %-6s %-6s %-5s %-9s %-16s %-12s %s\n", "id", "j_i", "j_f", "I", "F_i->F_f", "multipoles",
              "default m", "description");
  for (const auto& s : reg.all()) {
    const auto& t = s.transition;
    std::string mps;
    for (const auto& mp : t.multipoles) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%s%s:%g", mps.empty() ? "" : ",", mp.label().c_str(), mp.amplitude);
      mps += buf;
    }
    const std::string I = t.hyperfine ? t.hyperfine->nuclear_spin.str() : "-";
    const std::string F = t.hyperfine ? t.hyperfine->F_i.str() + "->" + t.hyperfine->F_f.str() : "-";
    const std::string m = s.default_m_i.str() + "->" + s.default_m_f.str();
    std::printf("%-10s %-6s %-6s %-5s %-9s %-16s %-12s %s\n", s.id.c_str(), t.j_i.str().c_str(), t.j_f.str().c_str(),
                I.c_str(), F.c_str(), mps.c_str(), m.c_str(), s.description.c_str());
  }
  return 0;
}

int cmd_profile(const Options& o) {
  const ScenarioRegistry reg = build_registry(o);
  const Table t = run_profile(build_scan(o, false, nullptr), reg);
  report_warnings(t.warnings);
  deliver(to_csv(t), o.out);
  return 0;
}

int cmd_alignscan(const Options& o) {
  const ScenarioRegistry reg = build_registry(o);
  const Table t = run_alignscan(build_scan(o, false, nullptr), reg);
  report_warnings(t.warnings);
  deliver(to_csv(t), o.out);
  return 0;
}

int cmd_polmap(const Options& o) {
  const ScenarioRegistry reg = build_registry(o);
  bool sweep = false;
  const ScanRequest req = build_scan(o, true, &sweep);
  const Grid g = run_polmap(req, sweep, reg);
  report_warnings(g.warnings);
  deliver(to_csv(g), o.out);
  if (o.ascii) std::fputs(ascii_heatmap(g).c_str(), o.out.empty() || o.out == "-" ? stderr : stdout);
  return 0;
}

int cmd_fit(const Options& o) {
  const ScenarioRegistry reg = build_registry(o);
  FitRequest req;
  req.scenario_id = o.scenario;
  if (!o.mi.empty()) req.m_i = parse_sublevel(o.mi, "--mi");
  if (!o.mf.empty()) req.m_f = parse_sublevel(o.mf, "--mf");
  req.beam = BeamSpec{o.family == "bessel" ? BeamFamily::Bessel : BeamFamily::BesselGauss, o.pitch, o.oam, o.waist};
  req.geometry = Geometry{0.0, o.phi_b, o.theta_z, o.phi_z};
  if (!o.pols.empty()) {
    if (o.pols.size() > 1 || o.pols[0] == "sweep") throw UsageError("fit takes a single --pol");
    req.polarization = parse_polarization(o.pols[0]).pol;
  }
  req.delta = o.delta;
  req.scale = o.scale;
  req.free.clear();
  for (const auto& f : o.free) req.free.push_back(parse_fit_param(f));
  for (const auto& spec : o.bounds) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw UsageError("--bound expects name:lo:hi, got '" + spec + "'");
    try {
      req.bounds[parse_fit_param(spec.substr(0, c1))] = {std::stod(spec.substr(c1 + 1, c2 - c1 - 1)),
                                                         std::stod(spec.substr(c2 + 1))};
    } catch (const std::invalid_argument&) {
      throw UsageError("--bound expects name:lo:hi, got '" + spec + "'");
    }
  }
  req.shared_phi_b = !o.per_profile_phi_b;
  req.tolerance = o.tolerance;
  req.max_iterations = o.max_iter;
  req.data = samples_from_table(read_csv(o.data));

  const FitResult r = run_fit(req, reg);
  std::string csv = "parameter,value,std_error\n";
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    csv += r.names[i] + "," + format_double(r.values[i]) + "," + format_double(r.errors[i]) + "\n";
  }
  deliver(csv, o.out);
  std::fprintf(stderr, "converged: %s (%s) after %d iterations\nresidual_norm: %.6e\ncovariance:\n",
               r.converged ? "yes" : "no", r.message.c_str(), r.iterations, r.residual_norm);
  for (Eigen::Index i = 0; i < r.covariance.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.covariance.cols(); ++j) std::fprintf(stderr, " % .6e", r.covariance(i, j));
    std::fprintf(stderr, "\n");
  }
  if (!r.converged) {
    std::fprintf(stderr, "error: fit did not converge; values above are the best found\n");
    return 3;
  }
  return 0;
}

void add_scan_options(CLI::App* app, Options& o) {
  app->add_option("--b-min", o.b_min, "Smallest impact parameter (wavelengths)");
  app->add_option("--b-max", o.b_max, "Largest impact parameter (wavelengths)");
  app->add_option("--b-steps", o.b_steps, "Number of b samples");
  app->add_option("--normalize", o.normalize, "raw or peak")->check(CLI::IsMember({"raw", "peak"}));
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Transition strengths of trapped ions in twisted light beams"};
  app.set_config("--config", "", "INI file with option defaults; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--scenario", o.scenario, "Scenario id (see `scenarios`)");
  app.add_option("--scenario-file", o.scenario_file, "INI file with extra scenario definitions");
  app.add_option("--multipoles", o.multipoles, "Override multipoles, e.g. E2:1,M3:0.01")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--F-i", o.F_i, "yb171_e3 initial hyperfine level");
  app.add_option("--F-f", o.F_f, "yb171_e3 final hyperfine level");
  app.add_option("--mi", o.mi, "Initial sublevel, e.g. 1/2, or all");
  app.add_option("--mf", o.mf, "Final sublevel, e.g. 3/2, or all");
  app.add_option("--oam", o.oam, "Orbital angular momentum l_gamma");
  app.add_option("--pitch", o.pitch, "Pitch angle theta_k (rad)");
  app.add_option("--waist", o.waist, "Bessel-Gauss waist w0 (wavelengths)");
  app.add_option("--family", o.family, "bessel or bessel-gauss")->check(CLI::IsMember({"bessel", "bessel-gauss"}));
  app.add_option("--theta-z", o.theta_z, "Quantization axis polar angle (rad)");
  app.add_option("--phi-z", o.phi_z, "Quantization axis azimuth (rad)");
  app.add_option("--phi-b", o.phi_b, "Impact-parameter azimuth (rad)");
  app.add_option("--pol", o.pols, "L, R, H, V, alpha:delta or sweep (repeatable)");
  app.add_option("--out", o.out, "Output file (default stdout)");

  auto* scenarios = app.add_subcommand("scenarios", "List scenarios");

  auto* profile = app.add_subcommand("profile", "Strength versus impact parameter");
  add_scan_options(profile, o);
  profile->add_flag("--signed-b", o.signed_b, "Two half-scans at phi_b + pi and phi_b on a signed axis");

  auto* polmap = app.add_subcommand("polmap", "Strength over polarization and signed impact parameter");
  add_scan_options(polmap, o);
  polmap->add_option("--delta", o.delta, "delta for the alpha sweep (rad)");
  polmap->add_option("--alpha-steps", o.alpha_steps, "Number of alpha samples in [0, pi]");
  polmap->add_flag("--ascii", o.ascii, "Also print a character heat map");

  auto* align = app.add_subcommand("alignscan", "Strength versus quantization-axis angle at fixed b");
  align->add_option("--b", o.b, "Impact parameter (wavelengths)");
  align->add_option("--theta-min", o.theta_min, "First theta_z (rad)");
  align->add_option("--theta-max", o.theta_max, "Last theta_z (rad)");
  align->add_option("--theta-steps", o.theta_steps, "Number of theta_z samples");
  align->add_option("--normalize", o.normalize, "raw or peak")->check(CLI::IsMember({"raw", "peak"}));

  auto* fit = app.add_subcommand("fit", "Fit pitch, phi_b, waist and scale to measured strengths");
  fit->add_option("--data", o.data, "CSV with b_lambda, strength and optional alpha, profile")->required();
  fit->add_option("--free", o.free, "Free parameters: pitch, phi_b, waist, scale")->delimiter(',');
  fit->add_option("--bound", o.bounds, "name:lo:hi box constraint (repeatable)");
  fit->add_option("--scale", o.scale, "Initial or fixed overall scale");
  fit->add_option("--delta", o.delta, "delta for rows carrying alpha (rad)");
  fit->add_flag("--per-profile-phi-b", o.per_profile_phi_b, "Fit one phi_b per profile id");
  fit->add_option("--tolerance", o.tolerance, "Relative step tolerance");
  fit->add_option("--max-iter", o.max_iter, "Iteration limit");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (scenarios->parsed()) return cmd_scenarios(o);
    if (profile->parsed()) return cmd_profile(o);
    if (polmap->parsed()) return cmd_polmap(o);
    if (align->parsed()) return cmd_alignscan(o);
    if (fit->parsed()) return cmd_fit(o);
    if (selftest->parsed()) return run_selftest(stdout) == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
