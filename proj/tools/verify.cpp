#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "normlab/verify/runner.hpp"

using namespace normlab;
using namespace normlab::verify;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct RunArgs {
  std::string suites = "all";
  std::uint64_t seed = 42;
  std::size_t trials = SuiteConfig{}.trials;
  std::string dims, levels, p, checks;
  std::vector<std::string> overrides;
  std::string out, witness_dir;
};

SuiteConfig build_config(const RunArgs& a) {
  SuiteConfig cfg;
  cfg.suites = split_list(a.suites);
  cfg.seed = a.seed;
  cfg.trials = a.trials;
  if (!a.dims.empty()) cfg.dims = parse_int_list(a.dims);
  if (!a.levels.empty()) cfg.levels = parse_int_list(a.levels);
  if (!a.p.empty()) cfg.p_grid = parse_exponent_list(a.p);
  if (!a.checks.empty()) cfg.checks = split_list(a.checks);
  for (const auto& o : a.overrides) {
    const auto [k, v] = parse_override(o);
    cfg.overrides[k] = v;
  }
  return cfg;
}

int do_run(const RunArgs& a) {
  SuiteConfig cfg;
  RunOutput out;
  try {
    cfg = build_config(a);
    out = run(cfg);
  } catch (const PreconditionViolation& e) {
    std::cerr << "verify: invalid config: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "verify: invalid config: " << e.what() << '\n';
    return kUsage;
  }

  const std::string text = out.report.dump(2) + "\n";
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f) {
      std::cerr << "verify: cannot write '" << a.out << "'\n";
      return kUsage;
    }
    f << text;
  }
  if (!a.witness_dir.empty()) {
    try {
      write_witnesses(out, cfg, a.witness_dir);
    } catch (const std::exception& e) {
      std::cerr << "verify: " << e.what() << '\n';
      return kUsage;
    }
  }
  for (const auto& r : out.records) {
    if (!r.passed()) std::cerr << "FAIL " << r.check->id << " margin " << r.result.worst.margin << '\n';
  }
  const auto& s = out.report["summary"];
  std::cerr << s["checks"].get<int>() - s["failed"].get<int>() << "/" << s["checks"] << " checks passed, "
            << s["trials"] << " trials, " << out.report["wall_time_seconds"].get<double>() << " s\n";
  return out.passed ? kPass : kFail;
}

int do_replay(const std::string& path) {
  std::vector<ReplayResult> results;
  try {
    results = replay_file(path);
  } catch (const ParseError& e) {
    std::cerr << "verify: malformed witness: " << e.what() << '\n';
    return kUsage;
  }
  bool ok = true;
  for (const auto& r : results) {
    const json line = {{"check", r.check}, {"margin", r.outcome.margin}, {"passed", r.passed()}, {"info", r.outcome.info}};
    std::cout << line.dump() << '\n';
    ok = ok && r.passed();
  }
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized verification of the normlab inequalities"};
  app.require_subcommand(1);

  RunArgs a;
  bool list = false;
  auto* run_cmd = app.add_subcommand("run", "run verification suites and write a JSON report");
  run_cmd->add_option("--suites", a.suites, "comma list of suites or 'all'");
  run_cmd->add_option("--seed", a.seed, "master seed");
  run_cmd->add_option("--trials", a.trials, "trials per randomized check");
  run_cmd->add_option("--dims", a.dims, "vector and matrix dimensions, e.g. 2,4,8");
  run_cmd->add_option("--levels", a.levels, "dyadic levels, e.g. 4,8,12");
  run_cmd->add_option("--p", a.p, "exponent grid, e.g. 1,1.5,2,inf");
  run_cmd->add_option("--checks", a.checks, "comma list of check id prefixes");
  run_cmd->add_option("--override", a.overrides, "check.id.param=value, repeatable");
  run_cmd->add_option("--out", a.out, "report path (stdout when omitted)");
  run_cmd->add_option("--witness-dir", a.witness_dir, "write one witness file per failing check");
  run_cmd->add_flag("--list", list, "list check ids and parameters, then exit");

  std::string witness;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a check on a stored witness");
  replay_cmd->add_option("--witness", witness, "witness or report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (*run_cmd) {
    if (list) {
      for (const auto& c : registry()) {
        std::cout << c.id << "  [" << c.anchor << "]";
        for (const auto& [k, v] : c.params) std::cout << "  " << k << "=" << v;
        std::cout << '\n';
      }
      return kPass;
    }
    return do_run(a);
  }
  return do_replay(witness);
}
