#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "normlab/core.hpp"

namespace normlab::verify {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr int kMaxLevel = 14;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core",    "duality", "operators",
                                              "interpolation", "dyadic", "seqspace"};
  return names;
}

struct SuiteConfig {
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = 42;
  std::vector<int> dims{2, 4, 8, 16};
  std::vector<int> levels{2, 4, 6, 8, 10, 12};
  std::vector<Exponent> p_grid{Exponent(1), Exponent(1.25), Exponent(1.5), Exponent(2),
                               Exponent(3), Exponent(4), Exponent(10), Exponent::infinity()};
  std::size_t trials = 200;
  std::map<std::string, double> overrides;
  // Restricts the run to check ids starting with one of these prefixes.
  std::vector<std::string> checks;

  bool selects_suite(const std::string& suite) const {
    for (const auto& s : suites) {
      if (s == "all" || s == suite) return true;
    }
    return false;
  }

  bool selects_check(const std::string& id) const {
    if (checks.empty()) return true;
    for (const auto& prefix : checks) {
      if (id.compare(0, prefix.size(), prefix) == 0) return true;
    }
    return false;
  }

  // Throws PreconditionViolation on an invalid config.
  void validate() const {
    if (trials < 1) throw PreconditionViolation("trials must be >= 1");
    if (suites.empty()) throw PreconditionViolation("no suites selected");
    for (const auto& s : suites) {
      if (s == "all") continue;
      bool known = false;
      for (const auto& n : suite_names()) known = known || n == s;
      if (!known) throw PreconditionViolation("unknown suite '" + s + "'");
    }
    if (dims.empty()) throw PreconditionViolation("dims must not be empty");
    for (int d : dims) {
      if (d < 1) throw PreconditionViolation("dims must be >= 1");
      if (d > 256) throw PreconditionViolation("dims must be <= 256");
    }
    if (levels.empty()) throw PreconditionViolation("levels must not be empty");
    for (int l : levels) {
      if (l < 1 || l > kMaxLevel) {
        throw PreconditionViolation("levels must lie in [1, " + std::to_string(kMaxLevel) + "]");
      }
    }
    if (p_grid.empty()) throw PreconditionViolation("p grid must not be empty");
  }

  json to_json() const {
    json j;
    j["suites"] = suites;
    j["seed"] = seed;
    j["dims"] = dims;
    j["levels"] = levels;
    std::vector<std::string> ps;
    for (const auto& p : p_grid) ps.push_back(p.to_string());
    j["p_grid"] = ps;
    j["trials"] = trials;
    j["overrides"] = overrides;
    j["checks"] = checks;
    return j;
  }
};

// "a,b,c" -> {"a", "b", "c"}; empty items are rejected.
inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string::npos ? text.size() : comma;
    std::string item = text.substr(pos, end - pos);
    if (item.empty()) throw ParseError("empty item in list '" + text + "'");
    out.push_back(item);
    pos = end + 1;
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + item + "'");
    }
    if (used != item.size()) throw ParseError("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

inline std::vector<Exponent> parse_exponent_list(const std::string& text) {
  std::vector<Exponent> out;
  for (const auto& item : split_list(text)) {
    try {
      out.push_back(Exponent::parse(item));
    } catch (const PreconditionViolation& e) {
      throw ParseError(e.what());
    }
  }
  return out;
}

// "key=value" with a finite numeric value.
inline std::pair<std::string, double> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("override must be key=value: '" + text + "'");
  const std::string key = text.substr(0, eq);
  const double v = parse_scalar<double>(text.substr(eq + 1));
  if (!std::isfinite(v)) throw ParseError("override value must be finite: '" + text + "'");
  return {key, v};
}

}  // namespace normlab::verify
