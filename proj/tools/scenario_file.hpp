#pragma once

// Scenario definitions from an INI file, one section per scenario:
//
//   [my_ion]
//   description = 40Ca+ with an M3 admixture
//   j_i = 1/2
//   j_f = 5/2
//   multipoles = E2:1.0, M3:0.01
//   nuclear_spin = 1/2      ; optional, needs F_i and F_f
//   F_i = 0
//   F_f = 3
//   m_i = 1/2               ; default sublevels for scans
//   m_f = 3/2

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistabs/scenarios.hpp"

namespace twistabs {

inline std::vector<Scenario> parse_scenario_file(std::istream& in, const std::string& origin) {
  // Values are read whole: descriptions may contain spaces and commas, and
  // multipole lists are split by parse_multipoles.
  CLI::ConfigINI reader;
  reader.arrayBounds('\x01', '\x02');
  std::vector<CLI::ConfigItem> items;
  try {
    items = reader.from_config(in);
  } catch (const CLI::Error& e) {
    throw UsageError(origin + ": " + e.what());
  }
  std::map<std::string, std::map<std::string, std::vector<std::string>>> sections;
  std::vector<std::string> order;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    if (it.parents.empty()) throw UsageError(origin + ": key '" + it.name + "' outside a [scenario] section");
    std::string id;
    for (const auto& p : it.parents) id += (id.empty() ? "" : ".") + p;
    if (!sections.count(id)) order.push_back(id);
    sections[id][it.name] = it.inputs;
  }

  std::vector<Scenario> out;
  for (const auto& id : order) {
    auto& keys = sections[id];
    const std::string where = origin + " [" + id + "]";
    auto take = [&](const std::string& key, const std::string& sep) -> std::optional<std::string> {
      const auto it = keys.find(key);
      if (it == keys.end()) return std::nullopt;
      std::string joined;
      for (const auto& v : it->second) joined += (joined.empty() ? "" : sep) + v;
      keys.erase(it);
      return joined;
    };
    auto require = [&](const std::string& key) {
      auto v = take(key, ",");
      if (!v) throw UsageError(where + ": missing '" + key + "'");
      return *v;
    };
    try {
      Scenario s;
      s.id = id;
      s.description = take("description", " ").value_or(id);
      s.transition.j_i = parse_half_int(require("j_i"));
      s.transition.j_f = parse_half_int(require("j_f"));
      s.transition.multipoles = parse_multipoles(require("multipoles"));
      if (auto spin = take("nuclear_spin", ",")) {
        s.transition.hyperfine =
            HyperfineCoupling{parse_half_int(*spin), parse_half_int(require("F_i")), parse_half_int(require("F_f"))};
      }
      const HalfInt Ji = s.transition.initial_momentum();
      const HalfInt Jf = s.transition.final_momentum();
      const auto mi = take("m_i", ",");
      const auto mf = take("m_f", ",");
      s.default_m_i = mi ? parse_half_int(*mi) : (Ji.is_integer() ? HalfInt(0) : kHalf);
      const HalfInt next = s.default_m_i + HalfInt(1);
      s.default_m_f = mf ? parse_half_int(*mf) : (next <= Jf ? next : s.default_m_i);
      if (!keys.empty()) throw UsageError("unknown key '" + keys.begin()->first + "'");
      out.push_back(std::move(s));
    } catch (const UsageError& e) {
      throw UsageError(where + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError(where + ": " + e.what());
    }
  }
  return out;
}

inline void load_scenario_file(const std::string& path, ScenarioRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file '" + path + "'");
  for (auto& s : parse_scenario_file(in, path)) {
    try {
      registry.add(std::move(s));
    } catch (const DomainError& e) {
      throw DomainError(path + ": " + e.what());
    }
  }
}

}  // namespace twistabs
