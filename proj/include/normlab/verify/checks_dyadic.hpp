#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "normlab/dyadic.hpp"
#include "normlab/verify/check.hpp"

namespace normlab::verify {

namespace dyadic_inputs {

template <Field S>
struct Step {
  DyadicStepFunction<S> f;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Step, f)
};

template <Field S>
struct StepPair {
  DyadicStepFunction<S> f, g;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(StepPair, f, g)
};

using StepIn = std::variant<Step<double>, Step<complex>>;
using PairIn = std::variant<StepPair<double>, StepPair<complex>>;

struct Contraction {
  RealStep beta;
  int j = 0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Contraction, beta, j)
};

// beta_0, ..., beta_l at level l.
struct Family {
  std::vector<RealStep> betas;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Family, betas)
};

struct Exhaustive {
  int max_level = 5;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Exhaustive, max_level)
};

struct Coefficients {
  std::vector<double> a;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Coefficients, a)
};

// Four families, by trial: uniform values, sparse spikes, a scaled indicator
// of one dyadic interval, and a plateau on an interval J with one spike
// carrying about |J| times the plateau value. The last two sit near the
// extremal cases of the weak-type estimates.
template <Field S>
DyadicStepFunction<S> test_function(Rng& rng, int level, std::size_t t) {
  switch (t % 4) {
    case 0:
      return random_step<S>(rng, level);
    case 1:
      return random_step<S>(rng, level, true);
    case 2: {
      const int k = rng.between(0, level);
      const DyadicInterval i(k, rng.below(std::uint64_t{1} << k));
      return rng.scalar<S>() * DyadicStepFunction<S>::indicator(i, level);
    }
    default: {
      const int k = rng.between(0, level - 1);
      const DyadicInterval j(k, rng.below(std::uint64_t{1} << k));
      S a = rng.scalar<S>();
      if (modulus(a) == 0.0) a = S{1};
      auto f = a * DyadicStepFunction<S>::indicator(j, level);
      const auto cell = j.first_cell(level) + rng.below(j.last_cell(level) - j.first_cell(level));
      const double mass = std::ldexp(1.0, level - k) * rng.uniform(1.0, 1.05);
      f[cell] = a * (1.0 + mass);
      return f;
    }
  }
}

inline StepIn random_step_in(Rng& rng, const SuiteConfig& cfg, std::size_t t) {
  const int level = level_for(cfg, t);
  if (complex_trial(cfg, t, cfg.levels.size() * 4)) return Step<complex>{test_function<complex>(rng, level, t)};
  return Step<double>{test_function<double>(rng, level, t)};
}

inline PairIn random_pair_in(Rng& rng, const SuiteConfig& cfg, std::size_t t) {
  const int level = level_for(cfg, t);
  if (complex_trial(cfg, t, cfg.levels.size())) {
    return StepPair<complex>{random_step<complex>(rng, level), random_step<complex>(rng, level)};
  }
  return StepPair<double>{random_step<double>(rng, level), random_step<double>(rng, level)};
}

// Distribution queries on the values of a nonnegative step function.
class Distribution {
 public:
  explicit Distribution(const RealStep& g) : level_(g.level()), v_(g.values()) {
    std::sort(v_.begin(), v_.end());
    suffix_.assign(v_.size() + 1, 0.0);
    for (std::size_t i = v_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + v_[i];
  }

  // |{g > x}| and |{g >= x}|
  double measure_gt(double x) const { return cells(upper(x)); }
  double measure_ge(double x) const { return cells(lower(x)); }
  // int over {g > x} of g, and over {g >= x}
  double integral_gt(double x) const { return std::ldexp(suffix_[upper(x)], -level_); }
  double integral_ge(double x) const { return std::ldexp(suffix_[lower(x)], -level_); }

  std::vector<double> distinct_positive() const {
    std::vector<double> out;
    for (double x : v_) {
      if (x > 0.0 && (out.empty() || out.back() != x)) out.push_back(x);
    }
    return out;
  }

 private:
  std::size_t upper(double x) const {
    return static_cast<std::size_t>(std::upper_bound(v_.begin(), v_.end(), x) - v_.begin());
  }
  std::size_t lower(double x) const {
    return static_cast<std::size_t>(std::lower_bound(v_.begin(), v_.end(), x) - v_.begin());
  }
  double cells(std::size_t first) const { return std::ldexp(static_cast<double>(v_.size() - first), -level_); }

  int level_;
  std::vector<double> v_;
  std::vector<double> suffix_;
};

// sup over lambda > 0 of lambda |{g > lambda}|, evaluated at every distinct
// value, every midpoint, and as the left limit lambda -> v- at each value v.
inline Outcome weak_type(const RealStep& g, double bound, double slack) {
  const Distribution d(g);
  const auto vals = d.distinct_positive();
  Outcome o{1.0};
  if (bound <= 0.0 && vals.empty()) return o;
  const double scale = std::abs(bound) > 0.0 ? std::abs(bound) : 1.0;
  const auto note = [&](double lam, double value, const char* where) {
    const double m = le_margin(value, bound * (1 + slack), scale);
    if (m < o.margin) o = {m, {{"lambda", lam}, {"value", value}, {"bound", bound}, {"at", where}}};
  };
  for (std::size_t i = 0; i < vals.size(); ++i) {
    note(vals[i], vals[i] * d.measure_gt(vals[i]), "value");
    note(vals[i], vals[i] * d.measure_ge(vals[i]), "left limit");
    const double below = i == 0 ? 0.5 * vals[0] : 0.5 * (vals[i - 1] + vals[i]);
    note(below, below * d.measure_gt(below), "midpoint");
  }
  return o;
}

template <Field S>
double lp_integral(const DyadicStepFunction<S>& f, double p) {
  return integral(abs_pow(f, p));
}

// One named empirical ratio of the golden suites, or 0 when undefined.
template <Field S>
double golden_ratio(const std::string& name, double p, const DyadicStepFunction<S>& f) {
  if (name == "tail_square") return tail_square_report(f).constant;
  const auto s = square_fn(f);
  const double is = lp_integral(s, p);
  if (name == "s_over_m" || name == "m_over_s") {
    const double im = lp_integral(maximal_fn(f), p);
    if (is == 0.0 || im == 0.0) return 0.0;
    return name == "s_over_m" ? is / im : im / is;
  }
  const double iff = lp_integral(f, p);
  if (is == 0.0 || iff == 0.0) return 0.0;
  return name == "f_over_s" ? iff / is : is / iff;
}

}  // namespace dyadic_inputs

struct GoldenRatio {
  std::string name;
  double p;
  double value;
};

// Sample behind the golden ratios: fixed seed and size, independent of the
// run config, so the frozen maxima stay comparable.
inline constexpr std::uint64_t kGoldenSeed = 20240917;
inline constexpr std::size_t kGoldenTrials = 10000;
inline constexpr double kGoldenTolerance = 0.05;

inline std::string golden_id(const GoldenRatio& g) {
  if (g.name == "tail_square") return "dyadic.golden.tail_square";
  char buf[64];
  std::snprintf(buf, sizeof buf, "dyadic.golden.%s_p%g", g.name.c_str(), g.p);
  return buf;
}

// Observed maxima over the golden sample, frozen.
inline const std::vector<GoldenRatio>& golden_ratios() {
  static const std::vector<GoldenRatio> table{
      {"s_over_m", 0.5, 1.116099}, {"s_over_m", 1.0, 1.113899}, {"s_over_m", 1.5, 1.076371},
      {"m_over_s", 0.5, 1.073994}, {"m_over_s", 1.0, 1.145884}, {"m_over_s", 1.5, 1.308649},
      {"f_over_s", 3.0, 2.710701}, {"f_over_s", 4.0, 6.326863}, {"s_over_f", 3.0, 1.098779},
      {"s_over_f", 4.0, 1.238497}, {"tail_square", 4.0, 1.117923},
  };
  return table;
}

inline void register_dyadic(std::vector<Check>& out) {
  using namespace dyadic_inputs;
  const std::string suite = "dyadic";
  const auto once = [](const SuiteConfig&) -> std::size_t { return 1; };

  out.push_back(make_check<PairIn>(
      "dyadic.self_adjoint", suite, "conditional expectations are self-adjoint projections",
      {{"tol", 1e-13}}, random_pair_in, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const double scale = std::max(std::sqrt(lp_integral(in.f, 2) * lp_integral(in.g, 2)), 1e-300);
        for (int j = 0; j <= in.f.level(); ++j) {
          const auto ef = expectation(in.f, j), eg = expectation(in.g, j);
          const auto a = integral(ef * in.g), b = integral(in.f * eg), c = integral(ef * eg);
          const double d = std::max(modulus(a - b), modulus(a - c)) / scale;
          if (k("tol") - d < o.margin) o = {k("tol") - d, {{"j", j}, {"defect", d}}};
        }
        return o;
      }));

  out.push_back(make_check<PairIn>(
      "dyadic.martingale_orthogonality", suite, "martingale differences at different levels are orthogonal",
      {{"tol", 1e-13}}, random_pair_in, [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.f[0])>;
        const int l = in.f.level();
        std::vector<DyadicStepFunction<S>> df, dg;
        auto pf = expectation(in.f, 0).refine(l), pg = expectation(in.g, 0).refine(l);
        for (int j = 1; j <= l; ++j) {
          const auto ef = expectation(in.f, j).refine(l), eg = expectation(in.g, j).refine(l);
          df.push_back(ef - pf);
          dg.push_back(eg - pg);
          pf = ef;
          pg = eg;
        }
        const double scale = std::max(std::sqrt(lp_integral(in.f, 2) * lp_integral(in.g, 2)), 1e-300);
        Outcome o{1.0};
        for (std::size_t a = 0; a < df.size(); ++a) {
          for (std::size_t b = 0; b < dg.size(); ++b) {
            if (a == b) continue;
            const double d = modulus(integral(df[a] * dg[b])) / scale;
            if (k("tol") - d < o.margin) o = {k("tol") - d, {{"j", a + 1}, {"k", b + 1}, {"inner", d}}};
          }
        }
        return o;
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.l2_identity", suite, "the square function is an L^2 isometry", {{"tol", 1e-12}},
      random_step_in, [](const auto& in, const Params& k) {
        const double a = lp_integral(square_fn(in.f), 2), b = lp_integral(in.f, 2);
        return Outcome{eq_margin(a, b, std::max(b, 1e-300), k("tol")), {{"int_s2", a}, {"int_f2", b}}};
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.weak_m", suite, "weak-type (1,1) estimate for the dyadic maximal function",
      {{"constant", 1.0}, {"slack", 1e-12}}, random_step_in, [](const auto& in, const Params& k) {
        return weak_type(maximal_fn(in.f), k("constant") * integral(abs(in.f)), k("slack"));
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.modified_weak", suite, "modified weak-type estimate |{M f > 2 lambda}| <= (1/lambda) int_{|f| > lambda} |f|",
      {{"constant", 1.0}, {"slack", 1e-12}}, random_step_in, [](const auto& in, const Params& k) {
        const auto m = maximal_fn(in.f);
        const auto af = abs(in.f);
        const Distribution dm(m), df(af);
        std::vector<double> breaks;
        for (double v : dm.distinct_positive()) breaks.push_back(v / 2);
        for (double v : df.distinct_positive()) breaks.push_back(v);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        Outcome o{1.0};
        const double c = k("constant"), slack = k("slack");
        const auto note = [&](double lam, double lhs, double tail, const char* where) {
          if (lhs == 0.0) return;
          const double rhs = c * tail / lam;
          const double m2 = le_margin(lhs, rhs * (1 + slack), lhs);
          if (m2 < o.margin) o = {m2, {{"lambda", lam}, {"lhs", lhs}, {"rhs", rhs}, {"at", where}}};
        };
        for (std::size_t i = 0; i < breaks.size(); ++i) {
          const double b = breaks[i];
          note(b, dm.measure_gt(2 * b), df.integral_gt(b), "breakpoint");
          note(b, dm.measure_ge(2 * b), df.integral_ge(b), "left limit");
          const double mid = i == 0 ? 0.5 * b : 0.5 * (breaks[i - 1] + b);
          note(mid, dm.measure_gt(2 * mid), df.integral_gt(mid), "midpoint");
        }
        return o;
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.maximal_lp", suite, "L^p bound for the maximal function with constant 2^p p/(p-1)",
      {{"scale", 1.0}, {"numerator_sign", 1.0}, {"slack", 1e-12}}, random_step_in,
      [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const auto m = maximal_fn(in.f);
        for (double p : {1.1, 1.5, 2.0, 3.0, 4.0}) {
          const double c = k("scale") * std::pow(2.0, p) * (k("numerator_sign") * p) / (p - 1);
          const double lhs = lp_integral(m, p), base = lp_integral(in.f, p);
          if (base == 0.0 && lhs == 0.0) continue;
          const double rhs = c * base;
          const double mg = le_margin(lhs, rhs + std::abs(rhs) * k("slack"), std::abs(rhs));
          if (mg < o.margin) o = {mg, {{"p", p}, {"int_m_p", lhs}, {"bound", rhs}}};
        }
        return o;
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.weak_s", suite, "weak-type estimate for the square function with constant 3",
      {{"constant", 3.0}, {"slack", 1e-12}}, random_step_in, [](const auto& in, const Params& k) {
        return weak_type(square_fn(in.f), k("constant") * integral(abs(in.f)), k("slack"));
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.square_level_set", suite, "{S f > lambda} is a union of dyadic cells recovered by its maximal cover",
      {{"lambdas", 16}}, random_step_in, [](const auto& in, const Params& k) {
        const auto s = square_fn(in.f);
        const int l = s.level();
        const auto vals = Distribution(s).distinct_positive();
        Outcome o{1.0};
        if (vals.empty()) return o;
        const auto count = static_cast<std::size_t>(k("lambdas"));
        std::vector<double> lams;
        for (std::size_t i = 0; i < count; ++i) {
          const std::size_t idx = i * vals.size() / count;
          lams.push_back(vals[idx]);
          lams.push_back(idx == 0 ? 0.5 * vals[0] : 0.5 * (vals[idx - 1] + vals[idx]));
        }
        for (double lam : lams) {
          std::vector<bool> mask(s.size());
          for (std::size_t c = 0; c < s.size(); ++c) mask[c] = s[c] > lam;
          std::vector<int> hits(s.size(), 0);
          std::size_t bad = 0;
          const auto cover = maximal_cover(mask, l);
          for (const auto& i : cover) {
            for (auto c = i.first_cell(l); c < i.last_cell(l); ++c) ++hits[c];
            if (i.level > 0) {
              // maximal: the parent has an unmarked cell
              const auto par = i.parent();
              bool full = true;
              for (auto c = par.first_cell(l); c < par.last_cell(l) && full; ++c) full = mask[c];
              bad += full;
            }
          }
          for (std::size_t c = 0; c < s.size(); ++c) bad += hits[c] != (mask[c] ? 1 : 0);
          if (bad) return Outcome{-1.0, {{"lambda", lam}, {"defects", bad}}};
        }
        return Outcome{0.0, {{"lambdas", lams.size()}}};
      }));

  out.push_back(make_check<Contraction>(
      "dyadic.averaging_contraction", suite, "E_j contracts the p-th power integral of a nonnegative function",
      {{"constant", 1.0}, {"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const int l = level_for(cfg, t);
        return Contraction{abs(test_function<double>(rng, l, t)), rng.between(0, l)};
      },
      [](const Contraction& in, const Params& k) {
        Outcome o{1.0};
        const auto e = expectation(in.beta, in.j);
        for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
          const double lhs = lp_integral(e, p), rhs = k("constant") * lp_integral(in.beta, p);
          if (lhs == 0.0 && rhs == 0.0) continue;
          const double m = le_margin(lhs, rhs * (1 + k("slack")), rhs);
          if (m < o.margin) o = {m, {{"p", p}, {"lhs", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  // The vector-valued averaging estimate in its two base cases: r = p with
  // constant 1, and r = inf through the maximal function.
  out.push_back(make_check<Family>(
      "dyadic.vector_averaging", suite, "vector-valued averaging estimate in the cases r = p and r = inf",
      {{"constant_rp", 1.0}, {"scale_rinf", 1.0}, {"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const int l = level_for(cfg, t, 10);
        Family in;
        for (int j = 0; j <= l; ++j) {
          auto b = abs(random_step<double>(rng, l, t % 3 == 1));
          // every other trial uses beta_j constant on level-j cells, the equality case for r = p
          if (t % 2 == 0) b = expectation(b, j).refine(l);
          in.betas.push_back(b);
        }
        return in;
      },
      [](const Family& in, const Params& k) {
        if (in.betas.empty()) throw PreconditionViolation("empty family");
        const int l = in.betas.front().level();
        if (in.betas.size() != static_cast<std::size_t>(l) + 1) throw PreconditionViolation("need level + 1 functions");
        std::vector<RealStep> avg;
        for (int j = 0; j <= l; ++j) avg.push_back(expectation(in.betas[static_cast<std::size_t>(j)], j).refine(l));
        Outcome o{1.0};
        for (double p : {1.5, 2.0, 3.0}) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t j = 0; j < avg.size(); ++j) {
            lhs += lp_integral(avg[j], p);
            rhs += lp_integral(in.betas[j], p);
          }
          rhs *= k("constant_rp");
          if (rhs > 0.0) {
            const double m = le_margin(lhs, rhs * (1 + k("slack")), rhs);
            if (m < o.margin) o = {m, {{"case", "r = p"}, {"p", p}, {"lhs", lhs}, {"rhs", rhs}}};
          }
          std::vector<double> ma(static_cast<std::size_t>(1) << l, 0.0), mb(ma.size(), 0.0);
          for (std::size_t j = 0; j < avg.size(); ++j) {
            for (std::size_t c = 0; c < ma.size(); ++c) {
              ma[c] = std::max(ma[c], avg[j][c]);
              mb[c] = std::max(mb[c], in.betas[j][c]);
            }
          }
          const double li = lp_integral(RealStep(l, ma), p);
          const double ri = k("scale_rinf") * std::pow(2.0, p) * p / (p - 1) * lp_integral(RealStep(l, mb), p);
          if (ri > 0.0) {
            const double m = le_margin(li, ri * (1 + k("slack")), ri);
            if (m < o.margin) o = {m, {{"case", "r = inf"}, {"p", p}, {"lhs", li}, {"rhs", ri}}};
          }
        }
        return o;
      }));

  out.push_back(make_check<Exhaustive>(
      "dyadic.haar_orthonormality", suite, "the Haar system is orthonormal", {{"tol", 1e-14}},
      [](Rng&, const SuiteConfig&, std::size_t) { return Exhaustive{5}; },
      [](const Exhaustive& in, const Params& k) {
        Outcome o{1.0};
        for (int l = 1; l <= in.max_level; ++l) {
          std::vector<RealStep> hs{RealStep::constant(1.0, l)};
          for (int lv = 0; lv < l; ++lv) {
            for (std::uint64_t j = 0; j < (std::uint64_t{1} << lv); ++j) hs.push_back(haar_function({lv, j}, l));
          }
          for (std::size_t a = 0; a < hs.size(); ++a) {
            for (std::size_t b = 0; b < hs.size(); ++b) {
              const double d = std::abs(integral(hs[a] * hs[b]) - (a == b ? 1.0 : 0.0));
              if (k("tol") - d < o.margin) o = {k("tol") - d, {{"level", l}, {"a", a}, {"b", b}, {"defect", d}}};
            }
          }
        }
        return o;
      },
      once));

  out.push_back(make_check<Exhaustive>(
      "dyadic.walsh_orthonormality", suite, "Walsh functions are orthonormal (exact 0/1 integrals)", {},
      [](Rng&, const SuiteConfig&, std::size_t) { return Exhaustive{5}; },
      [](const Exhaustive& in, const Params&) {
        for (int l = 0; l <= in.max_level; ++l) {
          std::vector<RealStep> ws;
          for (unsigned m = 0; m < (1u << l); ++m) {
            std::set<int> a;
            for (int j = 1; j <= l; ++j) {
              if (m >> (j - 1) & 1) a.insert(j);
            }
            ws.push_back(walsh(a, l));
          }
          for (std::size_t a = 0; a < ws.size(); ++a) {
            for (std::size_t b = 0; b < ws.size(); ++b) {
              const double v = integral(ws[a] * ws[b]);
              if (v != (a == b ? 1.0 : 0.0)) return Outcome{-std::abs(v - (a == b)), {{"level", l}, {"a", a}, {"b", b}}};
            }
          }
        }
        return Outcome{0.0};
      },
      once));

  out.push_back(make_check<PairIn>(
      "dyadic.linearization", suite, "linearized maximal operator from the argmax selector",
      {}, random_pair_in, [](const auto& in, const Params&) {
        const int l = in.f.level();
        const auto sel = maximal_selector(in.f);
        const auto af = linearized_maximal(in.f, sel, l);
        const auto mf = maximal_fn(in.f);
        const auto ah = linearized_maximal(in.g, sel, l);
        const auto mh = maximal_fn(in.g);
        Outcome o{0.0};
        for (std::size_t c = 0; c < af.size(); ++c) {
          const double d1 = modulus(af[c]) - mf[c];
          if (d1 != 0.0) o = worse(o, {-std::abs(d1), {{"case", "A(f) = M(f)"}, {"cell", c}}});
          const double d2 = mh[c] - modulus(ah[c]);
          if (d2 < 0.0) o = worse(o, {d2, {{"case", "|A(h)| <= M(h)"}, {"cell", c}}});
        }
        return o;
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.haar_roundtrip", suite, "Haar expansion reconstructs f and satisfies Parseval",
      {{"tol", 1e-13}}, random_step_in, [](const auto& in, const Params& k) {
        const auto hc = haar_transform(in.f);
        const auto rec = haar_reconstruct(hc);
        double err = 0.0, top = 0.0;
        for (std::size_t c = 0; c < in.f.size(); ++c) {
          err = std::max(err, modulus(rec[c] - in.f[c]));
          top = std::max(top, modulus(in.f[c]));
        }
        std::vector<double> squares{std::norm(hc.c0)};
        for (const auto& x : hc.coeffs) squares.push_back(std::norm(x));
        const double energy = normlab::detail::compensated_total(squares);
        const double l2 = lp_integral(in.f, 2);
        const Outcome a{k("tol") - err / std::max(1.0, top), {{"case", "round trip"}, {"error", err}}};
        return worse(a, {eq_margin(energy, l2, std::max(l2, 1e-300), k("tol")),
                         {{"case", "Parseval"}, {"coefficients", energy}, {"int_f2", l2}}});
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.layer_cake", suite, "layer-cake formula for |f|, M f and S f", {{"tol", 1e-12}},
      random_step_in, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const std::pair<const char*, RealStep> gs[] = {{"|f|", abs(in.f)}, {"M f", maximal_fn(in.f)}, {"S f", square_fn(in.f)}};
        for (const auto& [name, g] : gs) {
          for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
            const auto lc = layer_cake(g, p);
            const double m = eq_margin(lc.layered, lc.direct, std::max(lc.direct, 1e-300), k("tol"));
            if (m < o.margin) o = {m, {{"g", name}, {"p", p}, {"direct", lc.direct}, {"layered", lc.layered}}};
          }
        }
        return o;
      }));

  out.push_back(make_check<StepIn>(
      "dyadic.tail_square_identity", suite,
      "cell identity int_I (|E_j f|^2 + R_{j+1}^2) = int_I |f|^2 for the tail square functions",
      {{"tol", 1e-12}}, random_step_in, [](const auto& in, const Params& k) {
        const auto rep = tail_square_report(in.f);
        const double scale = std::max(rep.scale, 1e-300);
        return Outcome{k("tol") - rep.residual / scale, {{"residual", rep.residual}, {"int_f2", rep.scale}}};
      }));

  out.push_back(make_check<Coefficients>(
      "dyadic.khintchine_sandwich", suite, "Khintchine: ||f||_p <= sigma <= ||f||_q for p <= 2 <= q",
      {{"constant", 1.0}, {"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(level_for(cfg, t, 12));
        Coefficients in{std::vector<double>(n)};
        for (auto& x : in.a) x = t % 3 == 1 && rng.coin() ? 0.0 : rng.uniform(-1.0, 1.0);
        if (max_modulus(in.a) == 0.0) in.a[0] = 1.0;
        return in;
      },
      [](const Coefficients& in, const Params& k) {
        const auto rep = khintchine_report(in.a, {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 8.0});
        Outcome o{1.0};
        const double c = k("constant"), s = rep.sigma;
        for (const auto& r : rep.rows) {
          if (r.p <= 2.0) {
            const double m = le_margin(r.norm, c * s * (1 + k("slack")), s);
            if (m < o.margin) o = {m, {{"p", r.p}, {"norm", r.norm}, {"sigma", s}}};
          }
          if (r.p >= 2.0) {
            const double m = le_margin(s, c * r.norm * (1 + k("slack")), s);
            if (m < o.margin) o = {m, {{"p", r.p}, {"norm", r.norm}, {"sigma", s}}};
          }
        }
        return o;
      }));

  out.push_back(make_check<Coefficients>(
      "dyadic.fourth_moment", suite, "fourth moment identity ||f||_4^4 = 3 sigma^4 - 2 sum a_j^4",
      {{"coefficient", 3.0}, {"tol", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(level_for(cfg, t, 12));
        Coefficients in{std::vector<double>(n)};
        for (auto& x : in.a) x = rng.uniform(-2.0, 2.0);
        return in;
      },
      [](const Coefficients& in, const Params& k) {
        const std::size_t n = in.a.size();
        if (n < 1 || n > 20) throw PreconditionViolation("fourth moment: need 1..20 coefficients");
        // exhaustive sign enumeration
        double moment = 0.0;
        for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n); ++signs) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += (signs >> j & 1) ? -in.a[j] : in.a[j];
          moment += s * s * s * s;
        }
        moment = std::ldexp(moment, -static_cast<int>(n));
        double s2 = 0.0, s4 = 0.0;
        for (double x : in.a) {
          s2 += x * x;
          s4 += x * x * x * x;
        }
        const double identity = k("coefficient") * s2 * s2 - 2.0 * s4;
        const auto rep = khintchine_report(in.a, {});
        const Outcome a{eq_margin(identity, moment, moment, k("tol")), {{"case", "identity"}, {"identity", identity}, {"enumeration", moment}}};
        return worse(a, {eq_margin(rep.fourth_power, moment, moment, k("tol")),
                         {{"case", "integration"}, {"integral", rep.fourth_power}, {"enumeration", moment}}});
      }));

  for (const auto& g : golden_ratios()) {
    const auto gen = [](Rng&, const SuiteConfig&, std::size_t t) {
      // the golden sample ignores the run seed and lists
      Rng rng(kGoldenSeed, "golden", t);
      const int level = 1 + static_cast<int>(t % 12);
      if ((t / 12) % 2 == 1) return StepIn{Step<complex>{test_function<complex>(rng, level, t / 24)}};
      return StepIn{Step<double>{test_function<double>(rng, level, t / 24)}};
    };
    const std::string name = g.name;
    const double p = g.p;
    out.push_back(make_check<StepIn>(
        golden_id(g), suite,
        g.name == "tail_square" ? "empirical constant in int S^4 <= C int S^2 M(|f|^2)"
                                : "empirical ratio bound between " + std::string(g.name == "s_over_m" || g.name == "m_over_s"
                                                                                     ? "S f and M f"
                                                                                     : "f and S f") +
                                      " in L^p",
        {{"golden", g.value}, {"tolerance", kGoldenTolerance}}, gen,
        [name, p](const auto& in, const Params& k) {
          const double r = golden_ratio(name, p, in.f);
          const double g0 = k("golden");
          return Outcome{(g0 * (1 + k("tolerance")) - r) / g0, {{"ratio", r}, {"golden", g0}}};
        },
        [](const SuiteConfig&) { return kGoldenTrials; }));
  }
}

}  // namespace normlab::verify
