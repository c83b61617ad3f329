#pragma once

#include <vector>

#include "normlab/operators.hpp"
#include "normlab/verify/check.hpp"

namespace normlab::verify {

namespace operator_inputs {

template <Field S>
Matrix<S> random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix<S> m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.gaussian<S>();
  }
  return m;
}

template <Field S>
Matrix<S> random_unitary(Rng& rng, std::size_t n) {
  std::vector<Vector<S>> vs;
  for (std::size_t j = 0; j < n; ++j) vs.push_back(rng.vector<S>(n));
  return Matrix<S>::from_columns(gram_schmidt(vs));
}

template <Field S>
struct One {
  Matrix<S> a;
  std::vector<std::string> grid;
  std::uint64_t seed = 0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(One, a, grid, seed)
};

template <Field S>
struct Two {
  Matrix<S> a, b;
  std::vector<std::string> grid;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Two, a, b, grid)
};

// T and two unitaries whose columns are the orthonormal families.
template <Field S>
struct Frames {
  Matrix<S> a, y, z;
  std::vector<std::string> grid;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Frames, a, y, z, grid)
};

// Complementary subspaces: the first k columns span the range of P.
template <Field S>
struct Oblique {
  Matrix<S> columns;
  std::size_t k = 1;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Oblique, columns, k)
};

template <Field S>
struct Diagonal {
  Vector<S> d;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Diagonal, d)
};

template <template <class> class In>
using Either = std::variant<In<double>, In<complex>>;

// Square n x n, or n x (n+1) on every third trial.
template <Field S>
One<S> one(Rng& rng, const SuiteConfig& cfg, std::size_t t, bool square, bool hermitian) {
  const auto n = static_cast<std::size_t>(dim_for(cfg, t));
  const std::size_t c = square || t % 3 != 2 ? n : n + 1;
  auto a = random_matrix<S>(rng, n, c);
  if (hermitian) a = S{0.5} * (a + adjoint(a));
  return {a, grid_strings(cfg.p_grid), rng.next()};
}

template <bool Square, bool Hermitian = false>
Either<One> random_one(Rng& rng, const SuiteConfig& cfg, std::size_t t) {
  if (complex_trial(cfg, t)) return one<complex>(rng, cfg, t, Square, Hermitian);
  return one<double>(rng, cfg, t, Square, Hermitian);
}

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace operator_inputs

inline void register_operators(std::vector<Check>& out) {
  using namespace operator_inputs;
  const std::string suite = "operators";
  const Exponent two(2.0);

  out.push_back(make_check<Either<One>>(
      "operators.eig_reconstruction", suite, "spectral theorem for self-adjoint matrices (Jacobi eigensolver)",
      {{"tol", 1e-9}, {"orthonormality_tol", 1e-12}}, random_one<true, true>,
      [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.a(0, 0))>;
        const auto e = hermitian_eig(in.a);
        const auto qd = e.q * Matrix<S>::diag(Vector<S>(e.eigs.begin(), e.eigs.end()));
        const double scale = std::max(1.0, hs_norm(in.a));
        const double res = hs_norm(qd * adjoint(e.q) - in.a);
        const auto n = in.a.rows();
        const double orth = hs_norm(adjoint(e.q) * e.q - Matrix<S>::identity(n));
        const Outcome a{k("tol") - res / scale, {{"case", "reconstruction"}, {"residual", res}}};
        return worse(a, {k("orthonormality_tol") * static_cast<double>(n) - orth,
                         {{"case", "orthonormality"}, {"defect", orth}}});
      }));

  out.push_back(make_check<Either<One>>(
      "operators.svd_reconstruction", suite, "Schmidt decomposition reconstructs T with orthonormal frames",
      {{"tol", 1e-9}, {"orthonormality_tol", 1e-10}}, random_one<false>,
      [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.a(0, 0))>;
        const auto s = schmidt(in.a);
        Matrix<S> rec(in.a.rows(), in.a.cols());
        for (std::size_t j = 0; j < s.values.size(); ++j) {
          for (std::size_t r = 0; r < rec.rows(); ++r) {
            for (std::size_t c = 0; c < rec.cols(); ++c) rec(r, c) += s.values[j] * s.left[j][r] * conj_of(s.right[j][c]);
          }
        }
        const double hs = hs_norm(in.a);
        const double res = hs_norm(rec - in.a);
        Outcome o{k("tol") - res / std::max(hs, 1e-300), {{"case", "reconstruction"}, {"residual", res}}};
        const auto defect = [](const std::vector<Vector<S>>& vs) {
          double d = 0.0;
          for (std::size_t i = 0; i < vs.size(); ++i) {
            for (std::size_t j = 0; j < vs.size(); ++j) {
              d = std::max(d, modulus(inner_product(vs[i], vs[j]) - S{i == j ? 1.0 : 0.0}));
            }
          }
          return d;
        };
        const double d = std::max(defect(s.left), defect(s.right));
        return worse(o, {k("orthonormality_tol") - d, {{"case", "orthonormality"}, {"defect", d}}});
      }));

  out.push_back(make_check<Either<Diagonal>>(
      "operators.svd_diagonal", suite, "singular values of a diagonal matrix are the moduli of its entries",
      {{"tol", 1e-14}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> Either<Diagonal> {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        if (complex_trial(cfg, t)) return Diagonal<complex>{rng.vector<complex>(n)};
        return Diagonal<double>{rng.vector<double>(n)};
      },
      [](const auto& in, const Params& k) {
        std::vector<double> mods;
        for (const auto& x : in.d) mods.push_back(modulus(x));
        std::sort(mods.rbegin(), mods.rend());
        const auto s = schmidt(Matrix<std::decay_t<decltype(in.d[0])>>::diag(in.d));
        Outcome o{1.0};
        const double top = std::max(1.0, mods.front());
        for (std::size_t i = 0; i < mods.size(); ++i) {
          const double got = i < s.values.size() ? s.values[i] : 0.0;
          o = worse(o, {eq_margin(got, mods[i], top, k("tol")), {{"index", i}, {"value", got}, {"expected", mods[i]}}});
        }
        return o;
      }));

  out.push_back(make_check<Either<One>>(
      "operators.c_star", suite, "C*-identity for the operator norm", {{"tol", 1e-9}},
      random_one<false>, [two](const auto& in, const Params& k) {
        const double n2 = op_norm_exact(in.a, two);
        const double lhs = op_norm_exact(adjoint(in.a) * in.a, two);
        return Outcome{eq_margin(lhs, n2 * n2, n2 * n2, k("tol")), {{"lhs", lhs}, {"rhs", n2 * n2}}};
      }));

  out.push_back(make_check<Either<One>>(
      "operators.adjoint_symmetry", suite, "the adjoint has the dual operator norm (column and row sums)", {},
      random_one<false>, [](const auto& in, const Params&) {
        const double a = op_norm_exact(adjoint(in.a), Exponent(1.0));
        const double b = op_norm_exact(in.a, Exponent::infinity());
        return Outcome{a == b ? 0.0 : -rel_gap(a, b), {{"adjoint_1", a}, {"t_inf", b}}};
      }));

  out.push_back(make_check<Either<One>>(
      "operators.schur_domination", suite, "Schur bound dominates the operator norm",
      {{"slack", 1e-10}, {"iterations", 50}}, random_one<false>,
      [](const auto& in, const Params& k) {
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          const auto lb = op_norm_lower(in.a, p, static_cast<int>(k("iterations")), in.seed);
          const double ub = schur_bound(in.a, p);
          const double m = le_margin(lb.bound, ub + k("slack") * std::max(1.0, ub), std::max(1.0, ub));
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lower", lb.bound}, {"schur", ub}}};
        }
        return o;
      }));

  out.push_back(make_check<Either<One>>(
      "operators.trace_norm", suite, "trace is bounded by the trace norm", {{"slack", 1e-10}},
      random_one<true>, [](const auto& in, const Params& k) {
        const double lhs = modulus(trace(in.a));
        const double rhs = schatten_norm(in.a, Exponent(1.0));
        return Outcome{le_margin(lhs, rhs + k("slack"), std::max(1.0, rhs)), {{"trace", lhs}, {"trace_norm", rhs}}};
      }));

  out.push_back(make_check<Either<One>>(
      "operators.schatten_monotone", suite, "Schatten norms decrease in the exponent", {{"slack", 1e-12}},
      random_one<false>, [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const auto grid = parse_grid(in.grid);
        for (const auto& p : grid) {
          for (const auto& q : grid) {
            if (q.value() < p.value()) continue;
            const double sp = schatten_norm(in.a, p), sq = schatten_norm(in.a, q);
            const double m = le_margin(sq, sp * (1 + k("slack")), sp);
            if (m < o.margin) o = {m, {{"p", p.to_string()}, {"q", q.to_string()}, {"sp", sp}, {"sq", sq}}};
          }
        }
        return o;
      }));

  out.push_back(make_check<Either<Two>>(
      "operators.schatten_triangle", suite, "triangle inequality for Schatten norms", {{"slack", 1e-9}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> Either<Two> {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        const auto c = t % 3 == 2 ? n + 1 : n;
        if (complex_trial(cfg, t)) {
          return Two<complex>{random_matrix<complex>(rng, n, c), random_matrix<complex>(rng, n, c), grid_strings(cfg.p_grid)};
        }
        return Two<double>{random_matrix<double>(rng, n, c), random_matrix<double>(rng, n, c), grid_strings(cfg.p_grid)};
      },
      [](const auto& in, const Params& k) {
        Outcome o{1.0};
        const double scale = hs_norm(in.a) + hs_norm(in.b);
        for (const auto& p : parse_grid(in.grid)) {
          const double lhs = schatten_norm(in.a + in.b, p);
          const double rhs = schatten_norm(in.a, p) + schatten_norm(in.b, p);
          const double m = le_margin(lhs, rhs + k("slack") * scale, std::max(1.0, rhs));
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  const auto frames = [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> Either<Frames> {
    const auto n = static_cast<std::size_t>(dim_for(cfg, t));
    const auto build = [&]<Field S>(Frames<S> in) {
      in.a = random_matrix<S>(rng, n, n);
      in.y = random_unitary<S>(rng, n);
      in.z = random_unitary<S>(rng, n);
      in.grid = grid_strings(cfg.p_grid);
      return in;
    };
    if (complex_trial(cfg, t)) return build(Frames<complex>{});
    return build(Frames<double>{});
  };
  // (sum |x_h|^p)^(1/p), max for p = inf
  const auto lp_of = [](const std::vector<double>& xs, const Exponent& p) { return p_norm(xs, p); };

  out.push_back(make_check<Either<Frames>>(
      "operators.orthonormal_pairs", suite,
      "S_p bound for diagonal entries against orthonormal families", {{"slack", 1e-9}}, frames,
      [lp_of](const auto& in, const Params& k) {
        Outcome o{1.0};
        const std::size_t n = in.a.rows();
        for (const auto& p : parse_grid(in.grid)) {
          std::vector<double> xs;
          for (std::size_t h = 0; h < n; ++h) {
            xs.push_back(modulus(inner_product(normlab::apply(in.a, in.y.column(h)), in.z.column(h))));
          }
          const double lhs = lp_of(xs, p), sp = schatten_norm(in.a, p);
          const double m = le_margin(lhs, sp + k("slack"), std::max(1.0, sp));
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"schatten", sp}}};
        }
        return o;
      }));

  out.push_back(make_check<Either<Frames>>(
      "operators.column_bound", suite, "for p >= 2 the column norms along an orthonormal basis are bounded by S_p",
      {{"slack", 1e-9}}, frames, [lp_of](const auto& in, const Params& k) {
        Outcome o{1.0};
        const std::size_t n = in.a.rows();
        for (const auto& p : parse_grid(in.grid)) {
          if (p.value() < 2.0) continue;
          std::vector<double> xs;
          for (std::size_t h = 0; h < n; ++h) xs.push_back(norm2(normlab::apply(in.a, in.y.column(h))));
          const double lhs = lp_of(xs, p), sp = schatten_norm(in.a, p);
          const double m = le_margin(lhs, sp + k("slack"), std::max(1.0, sp));
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"schatten", sp}}};
        }
        return o;
      }));

  out.push_back(make_check<Either<Two>>(
      "operators.trace_duality", suite,
      "S_p and S_q duality through the trace, attained by the Schmidt partial isometry",
      {{"slack", 1e-10}, {"tol", 1e-9}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> Either<Two> {
        const auto r = static_cast<std::size_t>(dim_for(cfg, t));
        const auto c = t % 3 == 2 ? r + 1 : r;
        if (complex_trial(cfg, t)) {
          return Two<complex>{random_matrix<complex>(rng, r, c), random_matrix<complex>(rng, c, r), grid_strings(cfg.p_grid)};
        }
        return Two<double>{random_matrix<double>(rng, r, c), random_matrix<double>(rng, c, r), grid_strings(cfg.p_grid)};
      },
      [two](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.a(0, 0))>;
        Outcome o{1.0};
        for (const auto& p : parse_grid(in.grid)) {
          const auto rep = sp_duality_report(in.a, in.b, p);
          const double m = le_margin(rep.lhs, rep.rhs * (1 + k("slack")) + k("slack"), std::max(1.0, rep.rhs));
          if (m < o.margin) o = {m, {{"case", "duality"}, {"p", p.to_string()}, {"lhs", rep.lhs}, {"rhs", rep.rhs}}};
        }
        // R = sum_j u_j w_j^*: ||R||_op <= 1 and tr(R T) = ||T||_tr
        const auto s = schmidt(in.a);
        Matrix<S> rr(in.a.cols(), in.a.rows());
        for (std::size_t j = 0; j < s.values.size(); ++j) rr = rr + outer(s.right[j], s.left[j]);
        const double hs = std::max(hs_norm(in.a), 1e-300);
        const double opn = op_norm_exact(rr, two);
        o = worse(o, {le_margin(opn, 1 + k("tol"), 1.0), {{"case", "partial isometry norm"}, {"norm", opn}}});
        const double tr = modulus(trace(rr * in.a)), tn = schatten_norm(in.a, Exponent(1.0));
        return worse(o, {eq_margin(tr, tn, hs, k("tol")), {{"case", "attainment"}, {"trace", tr}, {"trace_norm", tn}}});
      }));

  out.push_back(make_check<Either<Two>>(
      "operators.psd_trace", suite, "tr(AB) >= 0 for nonnegative self-adjoint A and B", {{"slack", 1e-10}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> Either<Two> {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        if (complex_trial(cfg, t)) {
          return Two<complex>{random_matrix<complex>(rng, n, n), random_matrix<complex>(rng, n, n), {}};
        }
        return Two<double>{random_matrix<double>(rng, n, n), random_matrix<double>(rng, n, n), {}};
      },
      [](const auto& in, const Params& k) {
        const auto a = adjoint(in.a) * in.a, b = adjoint(in.b) * in.b;
        const double tr = real_part(trace(a * b));
        const double scale = std::max(1.0, hs_norm(a) * hs_norm(b));
        return Outcome{(tr + k("slack") * scale) / scale, {{"trace", tr}}};
      }));

  out.push_back(make_check<Either<Oblique>>(
      "operators.projection_norm", suite, "every nonzero projection has operator norm at least 1",
      {{"tol", 1e-12}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> Either<Oblique> {
        const auto n = static_cast<std::size_t>(std::max(dim_for(cfg, t), 1));
        const auto k = static_cast<std::size_t>(rng.between(1, static_cast<int>(n)));
        if (complex_trial(cfg, t)) return Oblique<complex>{random_matrix<complex>(rng, n, n), k};
        return Oblique<double>{random_matrix<double>(rng, n, n), k};
      },
      [two](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.columns(0, 0))>;
        const std::size_t n = in.columns.rows();
        if (in.k < 1 || in.k > n) throw PreconditionViolation("projection rank out of range");
        // P = M diag(1..1, 0..0) M^-1
        Matrix<S> inv(n, n);
        for (std::size_t j = 0; j < n; ++j) {
          Vector<S> e(n, S{});
          e[j] = S{1};
          inv.set_column(j, solve(in.columns, e));
        }
        Vector<S> mask(n, S{});
        for (std::size_t j = 0; j < in.k; ++j) mask[j] = S{1};
        const auto p = in.columns * Matrix<S>::diag(mask) * inv;
        const double idem = (p * p - p).max_abs() / std::max(1.0, p.max_abs());
        const double norm = op_norm_exact(p, two);
        const Outcome a{norm - 1 + k("tol"), {{"norm", norm}}};
        // a badly conditioned instance is still a projection up to rounding
        return worse(a, {1e-6 - idem, {{"case", "idempotence"}, {"defect", idem}}});
      }));

  out.push_back(make_check<Either<One>>(
      "operators.spectral_radius_power", suite, "spectral radius of powers of a self-adjoint matrix",
      {{"tol", 1e-8}}, random_one<true, true>, [](const auto& in, const Params& k) {
        const auto rad = [](const auto& m) {
          const auto e = hermitian_eig(m);
          return std::max(std::abs(e.eigs.front()), std::abs(e.eigs.back()));
        };
        const double r1 = rad(in.a);
        Outcome o{1.0};
        auto pw = in.a;
        for (int n = 2; n <= 4; ++n) {
          pw = pw * in.a;
          // powers are self-adjoint up to rounding
          const double lhs = rad(0.5 * (pw + adjoint(pw))), rhs = std::pow(r1, n);
          o = worse(o, {eq_margin(lhs, rhs, std::max(rhs, 1e-300), k("tol")), {{"n", n}, {"lhs", lhs}, {"rhs", rhs}}});
        }
        return o;
      }));
}

}  // namespace normlab::verify
