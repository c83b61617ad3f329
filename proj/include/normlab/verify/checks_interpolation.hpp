#pragma once

#include <vector>

#include "normlab/interpolation.hpp"
#include "normlab/verify/checks_operators.hpp"

namespace normlab::verify {

namespace interpolation_inputs {

template <Field S>
struct Op {
  Matrix<S> a;
  std::uint64_t seed = 0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Op, a, seed)
};

template <Field S>
struct Diag {
  Vector<S> d;
  std::uint64_t seed = 0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Diag, d, seed)
};

using OpIn = std::variant<Op<double>, Op<complex>>;

// Square on two trials out of three, one extra column otherwise.
inline OpIn random_op(Rng& rng, const SuiteConfig& cfg, std::size_t t) {
  using operator_inputs::random_matrix;
  const auto n = static_cast<std::size_t>(dim_for(cfg, t, 16));
  const std::size_t c = t % 3 == 2 ? n + 1 : n;
  if (complex_trial(cfg, t)) return Op<complex>{random_matrix<complex>(rng, n, c), rng.next()};
  return Op<double>{random_matrix<double>(rng, n, c), rng.next()};
}

}  // namespace interpolation_inputs

inline void register_interpolation(std::vector<Check>& out) {
  using namespace interpolation_inputs;
  const std::string suite = "interpolation";

  out.push_back(make_check<OpIn>(
      "interpolation.endpoints", suite, "M_p is the exact operator norm at p = 1, 2, inf",
      {{"tol", 1e-12}}, random_op, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : {Exponent(1.0), Exponent(2.0), Exponent::infinity()}) {
          const auto v = m_p(in.a, p, 1, in.seed);
          const double exact = op_norm_exact(in.a, p);
          const Outcome e{v.exact ? eq_margin(v.value, exact, exact, k("tol")) : -1.0,
                          {{"p", p.to_string()}, {"m_p", v.value}, {"exact", exact}}};
          o = worse(o, e);
        }
        return o;
      }));

  out.push_back(make_check<OpIn>(
      "interpolation.monotone_restarts", suite, "the M_p lower bound never decreases with more restarts",
      {{"max_budget", 4}}, random_op, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : {Exponent(1.5), Exponent(3.0)}) {
          double prev = 0.0;
          for (int b = 1; b <= static_cast<int>(k("max_budget")); ++b) {
            const double v = m_p(in.a, p, b, in.seed).value;
            if (v < prev) o = worse(o, {(v - prev) / prev, {{"p", p.to_string()}, {"budget", b}}});
            prev = v;
          }
        }
        return o;
      }));

  out.push_back(make_check<OpIn>(
      "interpolation.log_convexity", suite,
      "Riesz convexity: log M_p is convex in 1/p (one-sided test with exact endpoints)",
      {{"slack", 1e-9}, {"budget", 1}}, random_op, [](const auto& in, const Params& k) {
        const auto rep = log_convexity_check(in.a, default_triples(), static_cast<int>(k("budget")), in.seed);
        Outcome o{1.0};
        for (const auto& e : rep.entries) {
          if (!e.genuine) continue;
          const double m = e.margin + k("slack");
          if (m < o.margin) {
            o = {m,
                 {{"p", e.triple.p().to_string()},
                  {"q", e.triple.q().to_string()},
                  {"t", e.triple.t()},
                  {"lower_r", e.mr.value},
                  {"bound", e.bound}}};
          }
        }
        return o;
      }));

  using DiagIn = std::variant<Diag<double>, Diag<complex>>;
  out.push_back(make_check<DiagIn>(
      "interpolation.diagonal_equality", suite, "diagonal operators attain equality in Riesz convexity",
      {{"tol", 1e-12}, {"budget", 2}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> DiagIn {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t, 16));
        if (complex_trial(cfg, t)) return Diag<complex>{rng.vector<complex>(n), rng.next()};
        return Diag<double>{rng.vector<double>(n), rng.next()};
      },
      [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.d[0])>;
        const auto rep = log_convexity_check(Matrix<S>::diag(in.d), default_triples(),
                                             static_cast<int>(k("budget")), in.seed);
        Outcome o{1.0};
        for (const auto& e : rep.entries) {
          const double m = k("tol") - std::abs(e.margin);
          if (m < o.margin) o = {m, {{"p", e.triple.p().to_string()}, {"q", e.triple.q().to_string()}, {"t", e.triple.t()}, {"margin", e.margin}}};
        }
        return o;
      }));

  out.push_back(make_check<OpIn>(
      "interpolation.transpose_symmetry", suite, "M_p of T equals M_p' of the transpose at p = 1, inf", {},
      random_op, [](const auto& in, const Params&) {
        Outcome o{1.0};
        const auto tt = transpose(in.a);
        for (const auto& p : {Exponent(1.0), Exponent::infinity()}) {
          const double a = m_p(in.a, p, 1, in.seed).value;
          const double b = m_p(tt, p.conjugate(), 1, in.seed).value;
          o = worse(o, {a == b ? 0.0 : -std::abs(a - b) / std::max(a, 1e-300), {{"p", p.to_string()}, {"t", a}, {"transpose", b}}});
        }
        return o;
      }));
}

}  // namespace normlab::verify
