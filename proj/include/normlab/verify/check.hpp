#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <type_traits>
#include <variant>

#include "normlab/dyadic.hpp"
#include "normlab/matrix.hpp"
#include "normlab/random.hpp"
#include "normlab/seqspace.hpp"
#include "normlab/verify/config.hpp"

namespace normlab::verify {

// Effective constants and tolerances of one check.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, double> values) : values_(std::move(values)) {}

  double operator()(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw PreconditionViolation("unknown parameter '" + key + "'");
    return it->second;
  }

  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

// margin >= 0 passes. Margins are normalized by the natural scale of the
// quantities compared, so they are comparable across trials.
struct Outcome {
  double margin = 0.0;
  json info = json::object();
};

inline Outcome worse(Outcome a, Outcome b) { return b.margin < a.margin ? b : a; }

// (rhs - lhs) / scale, with slack already folded into rhs by the caller.
inline double le_margin(double lhs, double rhs, double scale) {
  return (rhs - lhs) / (scale > 0.0 ? scale : 1.0);
}

// tol - |a - b| / scale
inline double eq_margin(double a, double b, double scale, double tol) {
  return tol - std::abs(a - b) / (scale > 0.0 ? scale : 1.0);
}

struct CheckResult {
  std::size_t trials = 0;
  std::uint64_t worst_trial = 0;
  Outcome worst;
  json input;
};

struct Check {
  std::string id;
  std::string suite;
  std::string anchor;
  std::map<std::string, double> params;
  std::function<CheckResult(const SuiteConfig&, const Params&)> run;
  std::function<Outcome(const json&, const Params&)> replay;
};

template <class T>
struct is_variant : std::false_type {};
template <class... Ts>
struct is_variant<std::variant<Ts...>> : std::true_type {};

namespace detail {
template <class In, class Eval>
Outcome evaluate(const In& in, const Params& k, const Eval& eval) {
  Outcome o;
  try {
    if constexpr (is_variant<In>::value) {
      o = std::visit([&](const auto& x) { return eval(x, k); }, in);
    } else {
      o = eval(in, k);
    }
  } catch (const std::exception& e) {
    o.margin = -1.0;
    o.info = {{"error", e.what()}};
  }
  if (std::isnan(o.margin)) {
    o.margin = -1.0;
    o.info["error"] = "margin is NaN";
  }
  // finite margins keep the report representable
  o.margin = std::clamp(o.margin, -1e300, 1e300);
  return o;
}
}  // namespace detail

// Number of trials a check runs under a config.
using TrialCount = std::function<std::size_t(const SuiteConfig&)>;

inline std::size_t config_trials(const SuiteConfig& cfg) { return cfg.trials; }

// gen(rng, cfg, trial) -> In; eval(In, Params) -> Outcome. In converts to and
// from json, which is what witnesses store.
template <class In, class Gen, class Eval>
Check make_check(std::string id, std::string suite, std::string anchor,
                 std::map<std::string, double> params, Gen gen, Eval eval,
                 TrialCount count = config_trials) {
  Check c{id, std::move(suite), std::move(anchor), std::move(params), {}, {}};
  c.run = [id, gen, eval, count](const SuiteConfig& cfg, const Params& k) {
    CheckResult r;
    r.trials = count(cfg);
    for (std::size_t t = 0; t < r.trials; ++t) {
      Rng rng(cfg.seed, id, t);
      const In in = gen(rng, cfg, t);
      Outcome o = detail::evaluate(in, k, eval);
      if (t == 0 || o.margin < r.worst.margin) {
        r.worst = std::move(o);
        r.worst_trial = t;
        r.input = in;
      }
    }
    return r;
  };
  c.replay = [eval](const json& input, const Params& k) {
    In in;
    try {
      in = input.get<In>();
    } catch (const std::exception& e) {
      throw ParseError(std::string("witness input: ") + e.what());
    }
    return detail::evaluate(in, k, eval);
  };
  return c;
}

// Trial t cycles through the config lists; the field alternates per sweep.
inline int dim_for(const SuiteConfig& cfg, std::size_t t, int cap = 1 << 30) {
  return std::min(cfg.dims[t % cfg.dims.size()], cap);
}

inline int level_for(const SuiteConfig& cfg, std::size_t t, int cap = kMaxLevel) {
  return std::min(cfg.levels[t % cfg.levels.size()], cap);
}

inline std::vector<std::string> grid_strings(const std::vector<Exponent>& grid) {
  std::vector<std::string> out;
  for (const auto& p : grid) out.push_back(p.to_string());
  return out;
}

inline std::vector<Exponent> parse_grid(const std::vector<std::string>& grid) {
  std::vector<Exponent> out;
  for (const auto& s : grid) out.push_back(Exponent::parse(s));
  return out;
}

inline bool complex_trial(const SuiteConfig& cfg, std::size_t t, std::size_t cycle = 0) {
  if (cycle == 0) cycle = cfg.dims.size();
  return (t / cycle) % 2 == 1;
}

}  // namespace normlab::verify

// JSON forms of the library types. Scalars are stored as round-trippable
// strings so witnesses replay bit for bit.
namespace nlohmann {

template <>
struct adl_serializer<normlab::complex> {
  static void to_json(json& j, const normlab::complex& z) { j = normlab::format_scalar(z); }
  static void from_json(const json& j, normlab::complex& z) {
    z = normlab::parse_scalar<normlab::complex>(j.get<std::string>());
  }
};

template <>
struct adl_serializer<normlab::Exponent> {
  static void to_json(json& j, const normlab::Exponent& p) { j = p.to_string(); }
  static void from_json(const json& j, normlab::Exponent& p) {
    p = normlab::Exponent::parse(j.get<std::string>());
  }
};

template <normlab::Field S>
struct adl_serializer<normlab::Matrix<S>> {
  static void to_json(json& j, const normlab::Matrix<S>& m) {
    j = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(normlab::format_scalar(m(r, c)));
      j.push_back(row);
    }
  }
  static void from_json(const json& j, normlab::Matrix<S>& m) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    m = normlab::Matrix<S>(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (j[r].size() != cols) throw normlab::ParseError("ragged matrix");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = normlab::parse_scalar<S>(j[r][c].get<std::string>());
    }
  }
};

template <normlab::Field S>
struct adl_serializer<normlab::DyadicStepFunction<S>> {
  static void to_json(json& j, const normlab::DyadicStepFunction<S>& f) { j = normlab::serialize(f); }
  static void from_json(const json& j, normlab::DyadicStepFunction<S>& f) {
    f = normlab::parse_step_function<S>(j.get<std::string>());
  }
};

template <normlab::Field S>
struct adl_serializer<normlab::SparseFn<S>> {
  static void to_json(json& j, const normlab::SparseFn<S>& f) { j = normlab::serialize(f); }
  static void from_json(const json& j, normlab::SparseFn<S>& f) {
    f = normlab::parse_sparse<S>(j.get<std::string>());
  }
};

// Real and complex variants of the same input, tagged by field.
template <class A, class B>
struct adl_serializer<std::variant<A, B>> {
  static void to_json(json& j, const std::variant<A, B>& v) {
    if (v.index() == 0) {
      j = {{"field", "real"}, {"data", std::get<0>(v)}};
    } else {
      j = {{"field", "complex"}, {"data", std::get<1>(v)}};
    }
  }
  static void from_json(const json& j, std::variant<A, B>& v) {
    const auto field = j.at("field").get<std::string>();
    if (field == "real") {
      v = j.at("data").get<A>();
    } else if (field == "complex") {
      v = j.at("data").get<B>();
    } else {
      throw normlab::ParseError("unknown field '" + field + "'");
    }
  }
};

}  // namespace nlohmann
