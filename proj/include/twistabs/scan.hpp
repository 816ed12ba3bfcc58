#pragma once

// Profile, polarization-map and alignment scans, plus the CSV form they are
// written in.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "twistabs/amplitudes.hpp"
#include "twistabs/error.hpp"
#include "twistabs/scenarios.hpp"

namespace twistabs {

enum class Normalization { Raw, Peak };

struct LabeledPolarization {
  std::string label;
  Polarization pol;
};

/// Accepts L, R, H, V or "alpha:delta" (radians). "sweep" is handled by callers.
inline LabeledPolarization parse_polarization(const std::string& text) {
  if (text == "L") return {"L", Helicity{1}};
  if (text == "R") return {"R", Helicity{-1}};
  if (text == "H") return {"H", horizontal()};
  if (text == "V") return {"V", vertical()};
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string a = text.substr(0, colon), d = text.substr(colon + 1);
    char* end_a = nullptr;
    char* end_d = nullptr;
    const double alpha = std::strtod(a.c_str(), &end_a);
    const double delta = std::strtod(d.c_str(), &end_d);
    if (!a.empty() && !d.empty() && *end_a == '\0' && *end_d == '\0' && std::isfinite(alpha) &&
        std::isfinite(delta)) {
      return {"alpha" + a + "_delta" + d, GeneralPolarization{alpha, delta}};
    }
  }
  throw UsageError("polarization must be L, R, H, V, alpha:delta or sweep, got '" + text + "'");
}

struct ScanRequest {
  std::string scenario_id = "ca40_e2";
  std::optional<HalfInt> m_i;  // unset: scenario default, or every pair when all_sublevels
  std::optional<HalfInt> m_f;
  bool all_sublevels = false;
  BeamSpec beam{BeamFamily::BesselGauss, kDefaultPitch, 0, kDefaultWaist};
  Geometry geometry{};  // b is only used by alignscan
  std::vector<LabeledPolarization> polarizations{{"H", horizontal()}, {"V", vertical()}};
  // polmap
  int alpha_steps = 37;
  double sweep_delta = 0.0;
  // impact-parameter grid
  double b_min = 0.0;
  double b_max = 6.0;
  int b_steps = 121;
  bool signed_b = false;
  // alignscan grid
  double theta_min = 0.0;
  double theta_max = kPi;
  int theta_steps = 91;
  Normalization normalization = Normalization::Raw;

  void validate() const {
    if (b_steps < 2) throw UsageError("b grid needs at least 2 steps");
    if (!(b_min >= 0.0) || !(b_max >= b_min)) throw UsageError("b range must satisfy 0 <= b_min <= b_max");
    if (alpha_steps < 1) throw UsageError("alpha sweep needs at least 1 step");
    if (theta_steps < 2) throw UsageError("theta_z grid needs at least 2 steps");
    if (!(theta_max >= theta_min)) throw UsageError("theta_z range is empty");
    if (polarizations.empty()) throw UsageError("no polarization requested");
    beam.validate();
  }
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> warnings;
};

struct Grid {
  std::string corner = "alpha\\b_lambda";
  std::vector<std::string> row_labels;
  std::vector<double> column_values;
  std::vector<std::vector<double>> values;
  std::vector<std::string> warnings;
};

/// n points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1) out.back() = hi;
  return out;
}

/// The b-grid, or with signed_b the mirrored half-scan followed by the direct
/// one (b = 0 appears once).
inline std::vector<double> b_axis(const ScanRequest& req) {
  const std::vector<double> half = linspace(req.b_min, req.b_max, req.b_steps);
  if (!req.signed_b) return half;
  std::vector<double> out;
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it != 0.0) out.push_back(-*it);
  }
  out.insert(out.end(), half.begin(), half.end());
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::pair<HalfInt, HalfInt>> requested_pairs(const ScanRequest& req, const Scenario& s) {
  const HalfInt Ji = s.transition.initial_momentum(), Jf = s.transition.final_momentum();
  std::vector<std::pair<HalfInt, HalfInt>> out;
  if (req.all_sublevels) {
    for (HalfInt mi : projections(Ji)) {
      if (req.m_i && *req.m_i != mi) continue;
      for (HalfInt mf : projections(Jf)) {
        if (req.m_f && *req.m_f != mf) continue;
        out.emplace_back(mi, mf);
      }
    }
    if (out.empty()) throw UsageError("no sublevel pair matches the request");
    return out;
  }
  const HalfInt mi = req.m_i.value_or(s.default_m_i);
  const HalfInt mf = req.m_f.value_or(s.default_m_f);
  require_projection(Ji, mi, "m_i");
  require_projection(Jf, mf, "m_f");
  return {{mi, mf}};
}

inline std::vector<std::string> strength_columns(const std::vector<std::pair<HalfInt, HalfInt>>& pairs,
                                                 const std::vector<LabeledPolarization>& pols) {
  std::vector<std::string> out;
  for (const auto& [mi, mf] : pairs) {
    for (const auto& p : pols) {
      std::string name = "strength_" + p.label;
      if (pairs.size() > 1) name += "_mi" + mi.str() + "_mf" + mf.str();
      out.push_back(name);
    }
  }
  return out;
}

inline double peak_of(const std::vector<std::vector<double>>& rows, std::size_t first_col) {
  double peak = 0.0;
  for (const auto& r : rows) {
    for (std::size_t c = first_col; c < r.size(); ++c) peak = std::max(peak, r[c]);
  }
  return peak;
}

inline void normalize_rows(std::vector<std::vector<double>>& rows, std::size_t first_col,
                           std::vector<std::string>& warnings) {
  const double peak = peak_of(rows, first_col);
  if (peak == 0.0) {
    warnings.emplace_back("all strengths are zero; peak normalization skipped");
    return;
  }
  for (auto& r : rows) {
    for (std::size_t c = first_col; c < r.size(); ++c) {
      r[c] = (r[c] == peak) ? 1.0 : r[c] / peak;
    }
  }
}

}  // namespace detail

/// Strength versus impact parameter for each requested sublevel pair and
/// polarization. Negative b (signed mode) sits at azimuth phi_b + pi.
inline Table run_profile(const ScanRequest& req, const ScenarioRegistry& registry = ScenarioRegistry()) {
  req.validate();
  const Scenario& s = registry.find(req.scenario_id);
  const auto pairs = detail::requested_pairs(req, s);
  const auto bs = b_axis(req);

  Table t;
  t.header.push_back("b_lambda");
  for (auto& c : detail::strength_columns(pairs, req.polarizations)) t.header.push_back(c);
  t.rows.assign(bs.size(), std::vector<double>(t.header.size(), 0.0));
  for (std::size_t r = 0; r < bs.size(); ++r) t.rows[r][0] = bs[r];

  std::size_t col = 1;
  for (const auto& [mi, mf] : pairs) {
    const ProfileEvaluator ev(s.transition, req.beam, req.geometry.theta_z, req.geometry.phi_z, mi, mf);
    for (const auto& p : req.polarizations) {
      const HelicityWeights w = decompose_polarization(p.pol);
      for (std::size_t r = 0; r < bs.size(); ++r) t.rows[r][col] = ev.signed_strength(w, bs[r], req.geometry.phi_b);
      ++col;
    }
  }
  if (req.normalization == Normalization::Peak) detail::normalize_rows(t.rows, 1, t.warnings);
  return t;
}

/// Strength over (alpha, signed b) for one sublevel pair. With sweep the rows
/// are alpha in [0, pi] at fixed delta; otherwise one row per requested
/// polarization. Always peak-normalized.
inline Grid run_polmap(const ScanRequest& req, bool sweep, const ScenarioRegistry& registry = ScenarioRegistry()) {
  req.validate();
  const Scenario& s = registry.find(req.scenario_id);
  if (req.all_sublevels) throw UsageError("polmap takes a single sublevel pair");
  const auto pairs = detail::requested_pairs(req, s);
  ScanRequest signed_req = req;
  signed_req.signed_b = true;

  Grid g;
  g.column_values = b_axis(signed_req);
  std::vector<HelicityWeights> rows;
  if (sweep) {
    for (double a : linspace(0.0, kPi, req.alpha_steps)) {
      g.row_labels.push_back(format_double(a));
      rows.push_back(decompose_polarization(GeneralPolarization{a, req.sweep_delta}));
    }
  } else {
    g.corner = "pol\\b_lambda";
    for (const auto& p : req.polarizations) {
      g.row_labels.push_back(p.label);
      rows.push_back(decompose_polarization(p.pol));
    }
  }
  const auto [mi, mf] = pairs.front();
  const ProfileEvaluator ev(s.transition, req.beam, req.geometry.theta_z, req.geometry.phi_z, mi, mf);
  for (const auto& w : rows) {
    std::vector<double> line;
    line.reserve(g.column_values.size());
    for (double b : g.column_values) line.push_back(ev.signed_strength(w, b, req.geometry.phi_b));
    g.values.push_back(std::move(line));
  }
  detail::normalize_rows(g.values, 0, g.warnings);
  return g;
}

/// Strength versus theta_z at fixed (b, phi_b).
inline Table run_alignscan(const ScanRequest& req, const ScenarioRegistry& registry = ScenarioRegistry()) {
  req.validate();
  req.geometry.validate();
  const Scenario& s = registry.find(req.scenario_id);
  const auto pairs = detail::requested_pairs(req, s);
  const auto thetas = linspace(req.theta_min, req.theta_max, req.theta_steps);

  Table t;
  t.header.push_back("theta_z");
  for (auto& c : detail::strength_columns(pairs, req.polarizations)) t.header.push_back(c);
  t.rows.assign(thetas.size(), std::vector<double>(t.header.size(), 0.0));
  for (std::size_t r = 0; r < thetas.size(); ++r) {
    t.rows[r][0] = thetas[r];
    std::size_t col = 1;
    for (const auto& [mi, mf] : pairs) {
      const ProfileEvaluator ev(s.transition, req.beam, thetas[r], req.geometry.phi_z, mi, mf);
      for (const auto& p : req.polarizations) {
        t.rows[r][col++] = std::abs(ev.amplitude(p.pol, req.geometry.b, req.geometry.phi_b));
      }
    }
  }
  if (req.normalization == Normalization::Peak) detail::normalize_rows(t.rows, 1, t.warnings);
  return t;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.header.size(); ++c) out += (c ? "," : "") + t.header[c];
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + format_double(r[c]);
    out += '\n';
  }
  return out;
}

inline std::string to_csv(const Grid& g) {
  std::string out = g.corner;
  for (double b : g.column_values) out += "," + format_double(b);
  out += '\n';
  for (std::size_t r = 0; r < g.values.size(); ++r) {
    out += g.row_labels[r];
    for (double v : g.values[r]) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

inline void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

inline void emit_csv(const Table& t, const std::string& path) { write_text(to_csv(t), path); }
inline void emit_grid(const Grid& g, const std::string& path) { write_text(to_csv(g), path); }

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_cell(const std::string& cell, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0') throw UsageError(where + ": '" + cell + "' is not a number");
  return v;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

inline Table read_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw UsageError("'" + path + "' is empty");
  Table t;
  t.header = detail::split_csv_line(lines[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = detail::split_csv_line(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1);
    if (cells.size() != t.header.size()) throw UsageError(where + ": expected " + std::to_string(t.header.size()) + " columns");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(detail::parse_cell(c, where));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Grid read_grid(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw UsageError("'" + path + "' is empty");
  Grid g;
  const auto head = detail::split_csv_line(lines[0]);
  g.corner = head.at(0);
  for (std::size_t c = 1; c < head.size(); ++c) g.column_values.push_back(detail::parse_cell(head[c], path + ":1"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = detail::split_csv_line(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1);
    if (cells.size() != head.size()) throw UsageError(where + ": expected " + std::to_string(head.size()) + " columns");
    g.row_labels.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(detail::parse_cell(cells[c], where));
    g.values.push_back(std::move(row));
  }
  return g;
}

/// Coarse character rendering of a grid for terminals.
inline std::string ascii_heatmap(const Grid& g, std::size_t max_width = 72) {
  static const std::string shades = " .:-=+*#%@";
  double peak = 0.0;
  for (const auto& r : g.values) {
    for (double v : r) peak = std::max(peak, v);
  }
  const std::size_t ncol = g.column_values.size();
  const std::size_t stride = std::max<std::size_t>(1, (ncol + max_width - 1) / max_width);
  std::string out;
  for (std::size_t r = 0; r < g.values.size(); ++r) {
    std::string label = g.row_labels[r].substr(0, 8);
    label.resize(9, ' ');
    out += label + "|";
    for (std::size_t c = 0; c < ncol; c += stride) {
      const double v = peak > 0.0 ? g.values[r][c] / peak : 0.0;
      const auto idx = std::min(shades.size() - 1, static_cast<std::size_t>(v * (shades.size() - 1) + 0.5));
      out += shades[idx];
    }
    out += "|\n";
  }
  return out;
}

}  // namespace twistabs
