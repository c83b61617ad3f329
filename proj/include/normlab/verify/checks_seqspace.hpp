#pragma once

#include <vector>

#include "normlab/seqspace.hpp"
#include "normlab/verify/check.hpp"

namespace normlab::verify {

namespace seqspace_inputs {

template <Field S>
struct SeqPair {
  SparseFn<S> f, g;
  std::vector<std::string> grid;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(SeqPair, f, g, grid)
};

using PairIn = std::variant<SeqPair<double>, SeqPair<complex>>;

template <Field S>
struct Product {
  SparseFn<S> f;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Product, f)
};

struct NonnegFamily {
  std::vector<SparseFn<double>> family;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(NonnegFamily, family)
};

// Keys drawn from a pool twice the support size, so supports overlap
// partially. Some keys carry bytes outside printable ASCII.
inline Key random_key(Rng& rng, std::size_t pool) {
  Key k = "x" + std::to_string(rng.below(pool));
  if (rng.below(8) == 0) k += std::string(1, static_cast<char>(0x80 + rng.below(0x7f)));
  return k;
}

template <Field S>
SparseFn<S> random_sparse(Rng& rng, std::size_t n) {
  SparseFn<S> f;
  for (std::size_t i = 0; i < n; ++i) f.set(random_key(rng, 2 * n), rng.scalar<S>());
  return f;
}

}  // namespace seqspace_inputs

inline void register_seqspace(std::vector<Check>& out) {
  using namespace seqspace_inputs;
  const std::string suite = "seqspace";

  const auto pair = [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> PairIn {
    const auto n = static_cast<std::size_t>(dim_for(cfg, t));
    if (complex_trial(cfg, t)) {
      return SeqPair<complex>{random_sparse<complex>(rng, n), random_sparse<complex>(rng, n), grid_strings(cfg.p_grid)};
    }
    return SeqPair<double>{random_sparse<double>(rng, n), random_sparse<double>(rng, n), grid_strings(cfg.p_grid)};
  };

  out.push_back(make_check<PairIn>(
      "seqspace.holder", suite, "Hoelder inequality sum |f g| <= ||f||_p ||g||_q on an arbitrary index set", {{"slack", 1e-10}}, pair,
      [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          const double rhs = lp_norm_seq(in.f, p) * lp_norm_seq(in.g, p.conjugate());
          double lhs = 0.0;
          for (const auto& [key, v] : pointwise(in.f, in.g).entries()) lhs += modulus(v);
          const double m = le_margin(lhs, rhs * (1 + k("slack")), rhs);
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"sum_abs_fg", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  out.push_back(make_check<PairIn>(
      "seqspace.dual_attainment", suite, "the l^p dual pairing on an index set attains Hoelder equality", {{"tol", 1e-10}},
      pair, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          const double dual = lp_norm_seq(in.g, p.conjugate());
          const auto e = dual_extremizer_seq(in.g, p);
          const double target = dual * lp_norm_seq(e, p);
          const auto value = pairing_seq(e, in.g);
          const Outcome a{eq_margin(modulus(value), target, target, k("tol")),
                          {{"p", p.to_string()}, {"pairing", format_scalar(value)}, {"norm_product", target}}};
          o = worse(o, a);
        }
        return o;
      }));

  out.push_back(make_check<PairIn>(
      "seqspace.quasi_norm", suite, "quasi-triangle inequality with constant 2^(1/p - 1) for 0 < p < 1",
      {{"slack", 1e-12}}, pair, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (double p : {0.25, 0.5, 0.75}) {
          const double lhs = quasi_norm_seq(in.f + in.g, p);
          const double rhs = std::pow(2.0, 1.0 / p - 1.0) * (quasi_norm_seq(in.f, p) + quasi_norm_seq(in.g, p));
          const double m = le_margin(lhs, rhs * (1 + k("slack")), rhs);
          if (m < o.margin) o = {m, {{"p", p}, {"lhs", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  out.push_back(make_check<PairIn>(
      "seqspace.small_p_pairing", suite, "for 0 < p < 1, ||f||_1 <= ||f||_p and |lambda_g(f)| <= ||g||_inf ||f||_p",
      {{"slack", 1e-12}}, pair, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const double gsup = lp_norm_seq(in.g, Exponent::infinity());
        const double l1 = lp_norm_seq(in.f, Exponent(1.0));
        const double pair_value = modulus(pairing_seq(in.f, in.g));
        for (double p : {0.25, 0.5, 0.75}) {
          const double np = quasi_norm_seq(in.f, p);
          const double m1 = le_margin(l1, np * (1 + k("slack")), np);
          if (m1 < o.margin) o = {m1, {{"p", p}, {"l1", l1}, {"quasi_norm", np}}};
          const double rhs = gsup * np;
          const double m2 = le_margin(pair_value, rhs * (1 + k("slack")), rhs);
          if (m2 < o.margin) o = {m2, {{"p", p}, {"pairing", pair_value}, {"bound", rhs}}};
        }
        return o;
      }));

  using ProductIn = std::variant<Product<double>, Product<complex>>;
  out.push_back(make_check<ProductIn>(
      "seqspace.fubini", suite, "double sums over a product index set agree with both iterated sums",
      {{"tol", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> ProductIn {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t, 64));
        const auto build = [&]<class S>(S) {
          SparseFn<S> f;
          for (std::size_t i = 0; i < n * 4; ++i) {
            f.set(product_key(random_key(rng, n), random_key(rng, n)), rng.scalar<S>());
          }
          return Product<S>{f};
        };
        if (complex_trial(cfg, t)) return build(complex{});
        return build(0.0);
      },
      [](const auto& in, const Params& k) {
        const auto rep = fubini_check(in.f);
        double mass = 0.0;
        for (const auto& [key, v] : in.f.entries()) mass += modulus(v);
        return Outcome{k("tol") - rep.discrepancy() / (mass > 0 ? mass : 1.0),
                       {{"double_sum", format_scalar(rep.double_sum)}, {"discrepancy", rep.discrepancy()}}};
      }));

  out.push_back(make_check<NonnegFamily>(
      "seqspace.fatou", suite, "Fatou: the sum of the pointwise minimum is at most the minimum of the sums",
      {{"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t, 64));
        NonnegFamily in;
        for (int j = 0; j < 4; ++j) {
          SparseFn<double> f;
          for (std::size_t i = 0; i < n; ++i) f.set(random_key(rng, n), rng.uniform());
          in.family.push_back(f);
        }
        return in;
      },
      [](const NonnegFamily& in, const Params& k) {
        if (in.family.empty()) throw PreconditionViolation("fatou: empty family");
        const auto rep = convergence_check(ConvergenceMode::fatou, in.family, SparseFn<double>{});
        if (!rep.preconditions_met) throw PreconditionViolation("fatou: preconditions not met");
        return Outcome{le_margin(rep.lhs, rep.rhs * (1 + k("slack")), rep.rhs), {{"lhs", rep.lhs}, {"rhs", rep.rhs}}};
      }));
}

}  // namespace normlab::verify
