#pragma once

#include <functional>
#include <vector>

#include "normlab/verify/check.hpp"

namespace normlab::verify {

namespace core_inputs {

template <Field S>
struct VecPair {
  Vector<S> v, w;
  std::vector<std::string> grid;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(VecPair, v, w, grid)
};

using Pair = std::variant<VecPair<double>, VecPair<complex>>;

// Entries uniform in the unit ball of the field, scaled by 10^u with u
// uniform in [-3, 3]; every tenth vector has a zero entry.
template <Field S>
Vector<S> random_vector(Rng& rng, std::size_t n) {
  auto v = rng.vector<S>(n);
  const S s = std::pow(10.0, rng.uniform(-3.0, 3.0));
  for (auto& x : v) x *= s;
  if (rng.below(10) == 0) v[rng.below(n)] = S{};
  return v;
}

inline Pair random_pair(Rng& rng, const SuiteConfig& cfg, std::size_t t) {
  const auto n = static_cast<std::size_t>(dim_for(cfg, t));
  if (complex_trial(cfg, t)) {
    return VecPair<complex>{random_vector<complex>(rng, n), random_vector<complex>(rng, n),
                            grid_strings(cfg.p_grid)};
  }
  return VecPair<double>{random_vector<double>(rng, n), random_vector<double>(rng, n),
                         grid_strings(cfg.p_grid)};
}

struct ConstantVector {
  std::size_t n = 1;
  double c = 1.0;
  std::vector<std::string> grid;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(ConstantVector, n, c, grid)
};

struct NonnegPair {
  std::vector<double> b, c;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(NonnegPair, b, c)
};

template <Field S>
struct ParallelPair {
  Vector<S> v, w;
  S a{};
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(ParallelPair, v, w, a)
};

struct Weights {
  std::vector<double> lambda, x;
  std::vector<std::string> grid;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Weights, lambda, x, grid)
};

}  // namespace core_inputs

inline void register_core(std::vector<Check>& out) {
  using namespace core_inputs;
  const std::string suite = "core";

  out.push_back(make_check<Pair>(
      "core.minkowski", suite, "Minkowski inequality for p-norms", {{"slack", 1e-10}},
      random_pair, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          const double a = p_norm(in.v, p), b = p_norm(in.w, p);
          const double lhs = p_norm(add(in.v, in.w), p);
          const double m = le_margin(lhs, (a + b) * (1 + k("slack")), a + b);
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"rhs", a + b}}};
        }
        return o;
      }));

  out.push_back(make_check<Pair>(
      "core.holder", suite, "Hoelder inequality for the bilinear pairing", {{"slack", 1e-10}},
      random_pair, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          const double rhs = p_norm(in.v, p) * p_norm(in.w, p.conjugate());
          const double lhs = modulus(pairing(in.v, in.w));
          const double m = le_margin(lhs, rhs * (1 + k("slack")), rhs);
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  // max|v_j| <= ||v||_p <= n^(1/p) max|v_j|, and for p <= q:
  // ||v||_q <= ||v||_p <= n^(1/p - 1/q) ||v||_q
  out.push_back(make_check<Pair>(
      "core.exponent_comparison", suite, "comparison of l^p norms for different exponents",
      {{"slack", 1e-10}}, random_pair, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const auto& v = in.v;
        const double n = static_cast<double>(v.size());
        const double vmax = max_modulus(v);
        const double eps = k("slack");
        const auto grid = parse_grid(in.grid);
        const auto note = [&](double m, const std::string& which, const Exponent& p, const Exponent& q) {
          if (m < o.margin) o = {m, {{"bound", which}, {"p", p.to_string()}, {"q", q.to_string()}}};
        };
        for (const auto& p : grid) {
          const double np = p_norm(v, p);
          note(le_margin(vmax, np * (1 + eps), np), "sup <= p-norm", p, p);
          const double up = std::pow(n, p.reciprocal()) * vmax;
          note(le_margin(np, up * (1 + eps), up), "p-norm <= n^(1/p) sup", p, p);
          for (const auto& q : grid) {
            if (q.value() < p.value()) continue;
            const double nq = p_norm(v, q);
            note(le_margin(nq, np * (1 + eps), np), "q-norm <= p-norm", p, q);
            const double f = std::pow(n, p.reciprocal() - q.reciprocal()) * nq;
            note(le_margin(np, f * (1 + eps), f), "p-norm <= n^(1/p-1/q) q-norm", p, q);
          }
        }
        return o;
      }));

  out.push_back(make_check<ConstantVector>(
      "core.comparison_equality", suite, "equality in the l^p comparison on constant vectors",
      {{"tol", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        return ConstantVector{static_cast<std::size_t>(dim_for(cfg, t)), rng.uniform(0.01, 100.0),
                              grid_strings(cfg.p_grid)};
      },
      [](const ConstantVector& in, const Params& k) {
        Outcome o{1.0};
        const Vector<double> v(in.n, in.c);
        const auto grid = parse_grid(in.grid);
        for (const auto& p : grid) {
          for (const auto& q : grid) {
            if (q.value() < p.value()) continue;
            const double np = p_norm(v, p);
            const double f = std::pow(static_cast<double>(in.n), p.reciprocal() - q.reciprocal()) * p_norm(v, q);
            const double m = eq_margin(np, f, np, k("tol"));
            if (m < o.margin) o = {m, {{"p", p.to_string()}, {"q", q.to_string()}, {"lhs", np}, {"rhs", f}}};
          }
        }
        return o;
      }));

  out.push_back(make_check<NonnegPair>(
      "core.power_subadditivity", suite, "subadditivity of p-th powers for 0 < p < 1",
      {{"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        NonnegPair in{std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t j = 0; j < n; ++j) {
          in.b[j] = rng.uniform();
          in.c[j] = rng.below(4) == 0 ? 0.0 : rng.uniform();
        }
        return in;
      },
      [](const NonnegPair& in, const Params& k) {
        Outcome o{1.0};
        for (double p : {0.25, 0.5, 0.75}) {
          const double lhs = power_sum(add(in.b, in.c), p);
          const double rhs = power_sum(in.b, p) + power_sum(in.c, p);
          const double m = le_margin(lhs, rhs * (1 + k("slack")), rhs);
          if (m < o.margin) o = {m, {{"p", p}, {"lhs", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  out.push_back(make_check<std::variant<ParallelPair<double>, ParallelPair<complex>>>(
      "core.cauchy_schwarz", suite, "Cauchy-Schwarz inequality with equality for parallel vectors",
      {{"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t)
          -> std::variant<ParallelPair<double>, ParallelPair<complex>> {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        if (complex_trial(cfg, t)) {
          return ParallelPair<complex>{random_vector<complex>(rng, n), random_vector<complex>(rng, n),
                                       rng.scalar<complex>()};
        }
        return ParallelPair<double>{random_vector<double>(rng, n), random_vector<double>(rng, n),
                                    rng.scalar<double>()};
      },
      [](const auto& in, const Params& k) {
        const double rhs = norm2(in.v) * norm2(in.w);
        const double lhs = modulus(inner_product(in.v, in.w));
        Outcome o{le_margin(lhs, rhs * (1 + k("slack")), rhs), {{"case", "random pair"}}};
        const auto u = scale(in.a, in.v);
        const double par = norm2(in.v) * norm2(u);
        const double m = eq_margin(modulus(inner_product(in.v, u)), par, par, k("slack"));
        return worse(o, {m, {{"case", "parallel pair"}}});
      }));

  out.push_back(make_check<Pair>(
      "core.parallelogram", suite, "parallelogram law for the Euclidean norm", {{"tol", 1e-12}},
      random_pair, [](const auto& in, const Params& k) {
        const double lhs = std::pow(norm2(add(in.v, in.w)), 2) + std::pow(norm2(subtract(in.v, in.w)), 2);
        const double rhs = 2 * (std::pow(norm2(in.v), 2) + std::pow(norm2(in.w), 2));
        return Outcome{eq_margin(lhs, rhs, rhs, k("tol")), {{"lhs", lhs}, {"rhs", rhs}}};
      }));

  out.push_back(make_check<Weights>(
      "core.jensen", suite, "Jensen inequality for convex powers and finite convex combinations",
      {{"slack", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        Weights in{std::vector<double>(n), std::vector<double>(n), grid_strings(cfg.p_grid)};
        double total = 0.0;
        for (auto& l : in.lambda) total += (l = rng.uniform() + 1e-3);
        for (auto& l : in.lambda) l /= total;
        for (auto& x : in.x) x = rng.uniform(-5.0, 5.0);
        return in;
      },
      [](const Weights& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          if (p.is_infinite()) continue;
          double mean = 0.0, avg = 0.0;
          for (std::size_t i = 0; i < in.x.size(); ++i) {
            mean += in.lambda[i] * in.x[i];
            avg += in.lambda[i] * std::pow(std::abs(in.x[i]), p.value());
          }
          const double lhs = std::pow(std::abs(mean), p.value());
          const double m = le_margin(lhs, avg * (1 + k("slack")) + 1e-300, avg);
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"rhs", avg}}};
        }
        return o;
      }));

  out.push_back(make_check<Pair>(
      "core.polarization", suite, "polarization identity recovers the inner product", {{"tol", 1e-12}},
      random_pair, [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.v[0])>;
        const std::function<double(const Vector<S>&)> nsq = [](const Vector<S>& x) {
          return std::pow(norm2(x), 2);
        };
        const S a = polarize(nsq, in.v, in.w);
        const S b = inner_product(in.v, in.w);
        // the norms polarized are of v +- w, so rounding scales with (|v| + |w|)^2
        const double scale = std::pow(norm2(in.v) + norm2(in.w), 2);
        return Outcome{k("tol") - modulus(a - b) / (scale > 0 ? scale : 1.0),
                       {{"polarized", format_scalar(a)}, {"inner", format_scalar(b)}}};
      }));
}

}  // namespace normlab::verify
