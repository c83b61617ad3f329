#pragma once

#include <vector>

#include "normlab/duality.hpp"
#include "normlab/verify/checks_core.hpp"

namespace normlab::verify {

namespace duality_inputs {

inline std::vector<Exponent> extremizer_grid() {
  return {Exponent(1), Exponent(1.5), Exponent(2), Exponent(3), Exponent::infinity()};
}

template <Field S>
struct Functional {
  Vector<S> w;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Functional, w)
};

// v plus a seed from which the random functionals are regenerated.
template <Field S>
struct SecondDual {
  Vector<S> v;
  std::uint64_t lambda_seed = 0;
  std::size_t samples = 0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(SecondDual, v, lambda_seed, samples)
};

// Gauge rows (non-absolute), a basis of W and the values of mu on it. For the
// complex field the gauge acts on R^{2n} and basis/mu are complex.
template <Field S>
struct Extension {
  std::vector<Vector<double>> rows;
  std::vector<Vector<S>> basis;
  std::vector<S> mu;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Extension, rows, basis, mu)
};

template <Field S>
struct Euclid {
  std::vector<Vector<S>> basis;
  std::vector<S> mu;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(Euclid, basis, mu)
};

struct GaugeInput {
  Vector<double> v;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(GaugeInput, v)
};

struct OrthantInput {
  std::size_t n = 1;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(OrthantInput, n)
};

struct ConeInput {
  std::vector<Vector<double>> generators;
  Vector<double> v;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE(ConeInput, generators, v)
};

// Bounded unit ball: +-e_j scaled, plus a few random functionals.
inline std::vector<Vector<double>> random_gauge_rows(Rng& rng, std::size_t n) {
  std::vector<Vector<double>> rows;
  for (std::size_t j = 0; j < n; ++j) {
    Vector<double> e(n, 0.0);
    e[j] = rng.uniform(0.5, 2.0);
    rows.push_back(e);
    e[j] = -rng.uniform(0.5, 2.0);
    rows.push_back(e);
  }
  const int extra = rng.between(0, 4);
  for (int k = 0; k < extra; ++k) rows.push_back(rng.vector<double>(n));
  return rows;
}

// A point of the convex hull of the rows: its restriction to any subspace is
// dominated by the gauge there.
inline Vector<double> hull_point(Rng& rng, const std::vector<Vector<double>>& rows) {
  Vector<double> y(rows.size());
  double total = 0.0;
  for (auto& x : y) total += (x = rng.uniform() + 1e-3);
  Vector<double> out(rows.front().size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += y[i] / total * rows[i][j];
  }
  return out;
}

}  // namespace duality_inputs

inline void register_duality(std::vector<Check>& out) {
  using namespace duality_inputs;
  using core_inputs::random_vector;
  const std::string suite = "duality";

  using FunctionalIn = std::variant<Functional<double>, Functional<complex>>;
  out.push_back(make_check<FunctionalIn>(
      "duality.extremizer_tightness", suite, "the dual extremizer attains equality in Hoelder",
      {{"tol", 1e-10}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> FunctionalIn {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        if (complex_trial(cfg, t)) return Functional<complex>{random_vector<complex>(rng, n)};
        return Functional<double>{random_vector<double>(rng, n)};
      },
      [](const auto& in, const Params& k) {
        Outcome o{1.0};
        if (max_modulus(in.w) == 0.0) return o;
        for (const auto& p : extremizer_grid()) {
          const auto v = dual_extremizer(in.w, p);
          const double lhs = modulus(pairing(v, in.w));
          const double rhs = p_norm(in.w, p.conjugate()) * p_norm(v, p);
          const double m = eq_margin(lhs, rhs, rhs, k("tol"));
          if (m < o.margin) o = {m, {{"p", p.to_string()}, {"lhs", lhs}, {"rhs", rhs}}};
        }
        return o;
      }));

  using SecondIn = std::variant<SecondDual<double>, SecondDual<complex>>;
  out.push_back(make_check<SecondIn>(
      "duality.second_dual", suite, "the norm of v is the supremum of |lambda(v)| over the dual unit ball",
      {{"tol", 1e-8}, {"samples", 1000}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> SecondIn {
        const auto n = static_cast<std::size_t>(dim_for(cfg, t));
        const std::uint64_t seed = rng.next();
        if (complex_trial(cfg, t)) return SecondDual<complex>{random_vector<complex>(rng, n), seed, 0};
        return SecondDual<double>{random_vector<double>(rng, n), seed, 0};
      },
      [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.v[0])>;
        Outcome o{1.0};
        const double nv0 = max_modulus(in.v);
        if (nv0 == 0.0) return o;
        const auto samples = in.samples ? in.samples : static_cast<std::size_t>(k("samples"));
        for (const auto& p : extremizer_grid()) {
          const Exponent q = p.conjugate();
          const double target = p_norm(in.v, p);
          Rng rng(in.lambda_seed, p.to_string(), 0);
          double sup = 0.0;
          for (std::size_t s = 0; s < samples; ++s) {
            const auto lam = rng.vector<S>(in.v.size());
            const double nl = p_norm(lam, q);
            if (nl > 0.0) sup = std::max(sup, modulus(pairing(in.v, lam)) / nl);
          }
          // the random functionals never exceed the norm
          o = worse(o, {le_margin(sup, target * (1 + 1e-12), target), {{"p", p.to_string()}, {"case", "random"}}});
          const auto lam = dual_extremizer(in.v, q);
          sup = std::max(sup, modulus(pairing(in.v, lam)) / p_norm(lam, q));
          o = worse(o, {eq_margin(sup, target, target, k("tol")),
                        {{"p", p.to_string()}, {"case", "extremal"}, {"sup", sup}, {"norm", target}}});
        }
        return o;
      }));

  using ExtIn = std::variant<Extension<double>, Extension<complex>>;
  out.push_back(make_check<ExtIn>(
      "duality.hahn_banach", suite,
      "Hahn-Banach extension agrees with mu on W and is dominated by the sublinear gauge",
      {{"tol", 1e-10}, {"domination_tol", 1e-9}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> ExtIn {
        if (complex_trial(cfg, t)) {
          const auto n = static_cast<std::size_t>(std::clamp(dim_for(cfg, t), 1, 3));
          auto rows = random_gauge_rows(rng, 2 * n);
          const auto inside = hull_point(rng, rows);
          Vector<complex> psi(n);
          for (std::size_t j = 0; j < n; ++j) psi[j] = {inside[j], -inside[n + j]};
          const auto k = static_cast<std::size_t>(rng.between(1, static_cast<int>(n)));
          Extension<complex> in{rows, {}, {}};
          for (std::size_t l = 0; l < k; ++l) {
            in.basis.push_back(rng.vector<complex>(n));
            in.mu.push_back(pairing(in.basis.back(), psi));
          }
          return in;
        }
        const auto n = static_cast<std::size_t>(std::clamp(dim_for(cfg, t), 2, 6));
        auto rows = random_gauge_rows(rng, n);
        const auto inside = hull_point(rng, rows);
        const auto k = static_cast<std::size_t>(rng.between(1, static_cast<int>(n) - 1));
        Extension<double> in{rows, {}, {}};
        for (std::size_t l = 0; l < k; ++l) {
          in.basis.push_back(rng.vector<double>(n));
          in.mu.push_back(pairing(in.basis.back(), inside));
        }
        return in;
      },
      [](const auto& in, const Params& k) {
        using S = std::decay_t<decltype(in.mu[0])>;
        const MaxLinearGauge gauge(in.rows, false);
        Outcome o{1.0};
        LinearFunctional<double> real_part_fn;
        if constexpr (is_complex_v<S>) {
          const auto ext = hahn_banach_extend_complex(in.basis, in.mu, gauge);
          for (std::size_t l = 0; l < in.basis.size(); ++l) {
            const double err = modulus(ext.functional(in.basis[l]) - in.mu[l]);
            o = worse(o, {k("tol") - err / (1 + modulus(in.mu[l])), {{"case", "agreement"}, {"index", l}}});
          }
          // Re psi(x + iy) = <a, x> - <b, y> for psi = a + ib
          const std::size_t n = ext.functional.coeffs.size();
          real_part_fn.coeffs.resize(2 * n);
          for (std::size_t j = 0; j < n; ++j) {
            real_part_fn.coeffs[j] = ext.functional.coeffs[j].real();
            real_part_fn.coeffs[n + j] = -ext.functional.coeffs[j].imag();
          }
        } else {
          const auto ext = hahn_banach_extend(in.basis, in.mu, gauge);
          for (std::size_t l = 0; l < in.basis.size(); ++l) {
            const double err = std::abs(ext.functional(in.basis[l]) - in.mu[l]);
            o = worse(o, {k("tol") - err / (1 + std::abs(in.mu[l])), {{"case", "agreement"}, {"index", l}}});
          }
          real_part_fn = ext.functional;
        }
        double scale = 1.0;
        for (const auto& r : in.rows) scale = std::max(scale, max_modulus(r));
        const double res = domination_residual(gauge, real_part_fn);
        return worse(o, {k("domination_tol") - res / scale, {{"case", "domination"}, {"residual", res}}});
      }));

  using EuclidIn = std::variant<Euclid<double>, Euclid<complex>>;
  out.push_back(make_check<EuclidIn>(
      "duality.euclidean_extension", suite,
      "Euclidean extension through the orthogonal projection preserves the dual norm",
      {{"tol", 1e-10}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) -> EuclidIn {
        const int n = std::clamp(dim_for(cfg, t), 2, 8);
        const auto k = static_cast<std::size_t>(rng.between(1, n));
        const auto build = [&]<Field S>(Euclid<S> in) {
          for (std::size_t l = 0; l < k; ++l) {
            in.basis.push_back(rng.vector<S>(static_cast<std::size_t>(n)));
            in.mu.push_back(rng.scalar<S>());
          }
          return in;
        };
        if (complex_trial(cfg, t)) return build(Euclid<complex>{});
        return build(Euclid<double>{});
      },
      [](const auto& in, const Params& k) {
        const auto lam = euclidean_extend(in.basis, in.mu);
        Outcome o{1.0};
        for (std::size_t l = 0; l < in.basis.size(); ++l) {
          o = worse(o, {k("tol") - modulus(lam(in.basis[l]) - in.mu[l]), {{"case", "agreement"}}});
        }
        const double on_w = restricted_euclidean_dual_norm(in.basis, in.mu);
        const double full = dual_norm(lam, Exponent(2));
        return worse(o, {eq_margin(full, on_w, 1 + on_w, k("tol")),
                         {{"case", "dual norm"}, {"extension", full}, {"on_w", on_w}}});
      }));

  out.push_back(make_check<GaugeInput>(
      "duality.gauge_norms", suite, "the Minkowski functional of the l^1 and l^inf balls is the norm",
      {{"tol", 1e-9}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(std::clamp(dim_for(cfg, t), 1, 10));
        return GaugeInput{scale(rng.uniform(0.01, 100.0), rng.vector<double>(n))};
      },
      [](const GaugeInput& in, const Params& k) {
        const std::size_t n = in.v.size();
        const double tol = k("tol") * (1 + p_norm(in.v, Exponent(1)));
        const double ginf = gauge_value(MaxLinearGauge::linf_ball(n), in.v, tol);
        const double g1 = gauge_value(MaxLinearGauge::l1_ball(n), in.v, tol);
        const double s = 1 + p_norm(in.v, Exponent(1));
        const Outcome a{eq_margin(ginf, p_norm(in.v, Exponent::infinity()), s, k("tol")), {{"ball", "linf"}}};
        return worse(a, {eq_margin(g1, p_norm(in.v, Exponent(1)), s, k("tol")), {{"ball", "l1"}}});
      }));

  out.push_back(make_check<OrthantInput>(
      "duality.orthant_self_dual", suite, "the positive orthant is its own dual cone",
      {{"tol", 1e-10}},
      [](Rng&, const SuiteConfig&, std::size_t t) { return OrthantInput{1 + t % 4}; },
      [](const OrthantInput& in, const Params& k) {
        if (in.n < 1 || in.n > 8) throw PreconditionViolation("orthant dimension out of range");
        const auto orth = PolyhedralCone::orthant(in.n);
        const auto cons = dual_cone(orth);
        std::size_t patterns = 1;
        for (std::size_t j = 0; j < in.n; ++j) patterns *= 3;
        std::size_t mismatches = 0;
        for (std::size_t code = 0; code < patterns; ++code) {
          Vector<double> v(in.n);
          std::size_t c = code;
          for (std::size_t j = 0; j < in.n; ++j, c /= 3) v[j] = static_cast<double>(c % 3) - 1.0;
          mismatches += cone_contains(orth, v, k("tol")) != satisfies_constraints(cons, v, 1e-12);
        }
        return Outcome{mismatches ? -1.0 : 0.0, {{"patterns", patterns}, {"mismatches", mismatches}}};
      }));

  out.push_back(make_check<ConeInput>(
      "duality.double_dual", suite, "a closed convex cone equals its second dual",
      {{"tol", 1e-9}},
      [](Rng& rng, const SuiteConfig& cfg, std::size_t t) {
        const auto n = static_cast<std::size_t>(std::clamp(dim_for(cfg, t), 1, 4));
        const int m = rng.between(1, 5);
        ConeInput in;
        for (int i = 0; i < m; ++i) in.generators.push_back(rng.vector<double>(n));
        in.v = rng.vector<double>(n);
        if (t % 2 == 0) {
          in.v.assign(n, 0.0);
          for (const auto& g : in.generators) in.v = add(in.v, scale(rng.uniform(), g));
        }
        return in;
      },
      [](const ConeInput& in, const Params& k) {
        const PolyhedralCone cone(in.generators);
        const bool a = cone_contains(cone, in.v, k("tol"));
        const bool b = double_dual_contains(cone, in.v, k("tol"));
        return Outcome{a == b ? 0.0 : -1.0, {{"in_cone", a}, {"in_double_dual", b}}};
      }));
}

}  // namespace normlab::verify
