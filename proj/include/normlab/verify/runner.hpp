#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "normlab/verify/checks_core.hpp"
#include "normlab/verify/checks_duality.hpp"
#include "normlab/verify/checks_dyadic.hpp"
#include "normlab/verify/checks_interpolation.hpp"
#include "normlab/verify/checks_operators.hpp"
#include "normlab/verify/checks_seqspace.hpp"

namespace normlab::verify {

inline const std::vector<Check>& registry() {
  static const std::vector<Check> checks = [] {
    std::vector<Check> out;
    register_core(out);
    register_duality(out);
    register_operators(out);
    register_interpolation(out);
    register_dyadic(out);
    register_seqspace(out);
    std::sort(out.begin(), out.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
    return out;
  }();
  return checks;
}

inline const Check* find_check(const std::string& id) {
  for (const auto& c : registry()) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

// Overrides are "check.id.param"; the param is the last dotted component.
inline std::map<std::string, Params> resolve_params(const SuiteConfig& cfg) {
  std::map<std::string, std::map<std::string, double>> values;
  for (const auto& c : registry()) values[c.id] = c.params;
  for (const auto& [key, v] : cfg.overrides) {
    const auto dot = key.rfind('.');
    const std::string id = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    const auto it = values.find(id);
    if (it == values.end() || !it->second.count(name)) {
      throw PreconditionViolation("unknown override '" + key + "'");
    }
    it->second[name] = v;
  }
  std::map<std::string, Params> out;
  for (auto& [id, m] : values) out.emplace(id, Params(std::move(m)));
  return out;
}

struct Record {
  const Check* check = nullptr;
  Params params;
  CheckResult result;
  bool passed() const { return result.worst.margin >= 0.0; }
};

inline json witness_json(const Record& r, std::uint64_t seed) {
  return {{"format_version", kFormatVersion},
          {"kind", "witness"},
          {"check", r.check->id},
          {"params", r.params.values()},
          {"input", r.result.input},
          {"seed", seed},
          {"trial", r.result.worst_trial},
          {"margin", r.result.worst.margin}};
}

inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VERIFY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw PreconditionViolation("VERIFY_THREADS must be a positive integer");
    n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

struct RunOutput {
  json report;
  std::vector<Record> records;
  bool passed = true;
};

// Throws PreconditionViolation or ParseError on an invalid config.
inline RunOutput run(const SuiteConfig& cfg) {
  cfg.validate();
  const auto params = resolve_params(cfg);
  const unsigned threads = thread_count();
  const auto start = std::chrono::steady_clock::now();

  std::vector<Record> records;
  for (const auto& c : registry()) {
    if (cfg.selects_suite(c.suite) && cfg.selects_check(c.id)) records.push_back({&c, params.at(c.id), {}});
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < records.size();) {
      auto& r = records[i];
      try {
        r.result = r.check->run(cfg, r.params);
      } catch (const std::exception& e) {
        r.result.worst = {-1.0, {{"error", e.what()}}};
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(threads, records.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunOutput out;
  json list = json::array();
  std::size_t failed = 0, trials = 0;
  std::map<std::string, std::pair<int, int>> per_suite;
  for (const auto& r : records) {
    const bool ok = r.passed();
    failed += !ok;
    trials += r.result.trials;
    auto& s = per_suite[r.check->suite];
    ++s.first;
    s.second += !ok;
    list.push_back({{"id", r.check->id},
                    {"suite", r.check->suite},
                    {"anchor", r.check->anchor},
                    {"trials", r.result.trials},
                    {"worst_margin", r.result.worst.margin},
                    {"passed", ok},
                    {"info", r.result.worst.info},
                    {"witness", witness_json(r, cfg.seed)}});
  }
  json suites = json::object();
  for (const auto& [name, s] : per_suite) suites[name] = {{"checks", s.first}, {"failed", s.second}};
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.passed = failed == 0;
  out.report = {{"format_version", kFormatVersion},
                {"kind", "report"},
                {"config", cfg.to_json()},
                {"records", std::move(list)},
                {"summary",
                 {{"checks", records.size()}, {"failed", failed}, {"trials", trials}, {"suites", suites}, {"passed", out.passed}}},
                {"wall_time_seconds", wall}};
  out.records = std::move(records);
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct ReplayResult {
  std::string check;
  Outcome outcome;
  bool passed() const { return outcome.margin >= 0.0; }
};

// Re-runs the check named in a witness on its stored input and params.
inline ReplayResult replay_witness(const json& w) {
  if (!w.is_object() || w.value("kind", "") != "witness") throw ParseError("not a witness document");
  if (w.value("format_version", 0) != kFormatVersion) throw ParseError("unsupported witness format version");
  if (!w.contains("check") || !w["check"].is_string() || !w.contains("input") || !w.contains("params")) {
    throw ParseError("witness needs check, params and input");
  }
  const Check* c = find_check(w["check"].get<std::string>());
  if (!c) throw ParseError("unknown check '" + w["check"].get<std::string>() + "'");
  std::map<std::string, double> values = c->params;
  if (!w["params"].is_object()) throw ParseError("witness params must be an object");
  for (const auto& [k, v] : w["params"].items()) {
    if (!values.count(k) || !v.is_number()) throw ParseError("bad witness parameter '" + k + "'");
    values[k] = v.get<double>();
  }
  return {c->id, c->replay(w["input"], Params(std::move(values)))};
}

// A witness file, or a report whose failing records are replayed (all
// records when none failed).
inline std::vector<ReplayResult> replay_file(const std::string& path) {
  const json doc = read_json_file(path);
  if (doc.is_object() && doc.value("kind", "") == "report") {
    if (!doc.contains("records") || !doc["records"].is_array()) throw ParseError("report has no records");
    std::vector<json> ws;
    for (const auto& r : doc["records"]) {
      if (!r.value("passed", true)) ws.push_back(r.at("witness"));
    }
    if (ws.empty()) {
      for (const auto& r : doc["records"]) ws.push_back(r.at("witness"));
    }
    std::vector<ReplayResult> out;
    for (const auto& w : ws) out.push_back(replay_witness(w));
    return out;
  }
  return {replay_witness(doc)};
}

inline void write_witnesses(const RunOutput& out, const SuiteConfig& cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& r : out.records) {
    if (r.passed()) continue;
    std::ofstream f(std::filesystem::path(dir) / (r.check->id + ".json"));
    if (!f) throw ParseError("cannot write witness into '" + dir + "'");
    f << witness_json(r, cfg.seed).dump(2) << '\n';
  }
}

}  // namespace normlab::verify
