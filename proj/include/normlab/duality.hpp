#pragma once

// Linear functionals, dual norms and extremizers, extension of dominated
// functionals, gauges of polyhedral sets, and polyhedral cone duality.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "normlab/core.hpp"
#include "normlab/lp.hpp"
#include "normlab/matrix.hpp"

namespace normlab {

// lambda(v) = pairing(v, coeffs).
template <Field S>
struct LinearFunctional {
  Vector<S> coeffs;

  S operator()(const Vector<S>& v) const { return pairing(v, coeffs); }
  std::size_t dim() const { return coeffs.size(); }
};

// v -> max_i <c_i, v>  (sublinear), or max_i |<c_i, v>|  (seminorm) when
// absolute is set. Real field only; complex problems are realified.
class MaxLinearGauge {
 public:
  MaxLinearGauge(std::vector<Vector<double>> rows, bool absolute)
      : rows_(std::move(rows)), absolute_(absolute) {
    if (rows_.empty()) throw PreconditionViolation("gauge needs at least one row");
    for (const auto& r : rows_) {
      detail::require_same_dim(r, rows_.front(), "gauge rows");
      if (r.empty()) throw PreconditionViolation("gauge rows must be non-empty");
    }
  }

  double operator()(const Vector<double>& v) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows_) {
      const double x = pairing(v, r);
      best = std::max(best, absolute_ ? std::abs(x) : x);
    }
    return best;
  }

  const std::vector<Vector<double>>& rows() const { return rows_; }
  bool absolute() const { return absolute_; }
  std::size_t dim() const { return rows_.front().size(); }

  // Rows of the equivalent non-absolute gauge: {c_i}, plus {-c_i} if absolute.
  std::vector<Vector<double>> linear_rows() const {
    if (!absolute_) return rows_;
    std::vector<Vector<double>> out = rows_;
    for (const auto& r : rows_) out.push_back(scale(-1.0, r));
    return out;
  }

  // Unit-ball gauges of l_inf (rows +-e_j) and l_1 (rows = all sign vectors).
  static MaxLinearGauge linf_ball(std::size_t n) {
    std::vector<Vector<double>> rows;
    for (std::size_t j = 0; j < n; ++j) {
      Vector<double> e(n, 0.0);
      e[j] = 1.0;
      rows.push_back(e);
    }
    return MaxLinearGauge(rows, true);
  }

  static MaxLinearGauge l1_ball(std::size_t n) {
    if (n > 20) throw Unsupported("l1_ball gauge limited to n <= 20");
    std::vector<Vector<double>> rows;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Vector<double> s(n);
      for (std::size_t j = 0; j < n; ++j) s[j] = (mask >> j) & 1 ? -1.0 : 1.0;
      rows.push_back(s);
    }
    return MaxLinearGauge(rows, false);
  }

 private:
  std::vector<Vector<double>> rows_;
  bool absolute_;
};

template <Field S>
double dual_norm(const LinearFunctional<S>& lambda, const Exponent& p) {
  return p_norm(lambda.coeffs, p.conjugate());
}

// A nonzero v attaining |pairing(v, w)| = ||w||_q ||v||_p.
template <Field S>
Vector<S> dual_extremizer(const Vector<S>& w, const Exponent& p) {
  const double wmax = max_modulus(w);
  if (wmax == 0.0) throw PreconditionViolation("dual_extremizer: zero vector");
  Vector<S> v(w.size(), S{});
  if (p.is_one()) {
    std::size_t l = 0;
    for (std::size_t j = 1; j < w.size(); ++j) {
      if (modulus(w[j]) > modulus(w[l])) l = j;
    }
    v[l] = conj_of(w[l]) / modulus(w[l]);
    return v;
  }
  const Exponent q = p.conjugate();
  const auto build = [&](double factor) {
    bool ok = false;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const S wj = w[j] * factor;
      const double a = modulus(wj);
      if (a == 0.0) {
        v[j] = S{};
        continue;
      }
      const double mag = q.is_one() ? 1.0 / a : std::pow(a, q.value() - 2.0);
      v[j] = conj_of(wj) * mag;
      if (!std::isfinite(modulus(v[j]))) return false;
      if (v[j] != S{}) ok = true;
    }
    return ok;
  };
  if (build(1.0)) return v;
  if (build(1.0 / wmax)) return v;
  throw PreconditionViolation("dual_extremizer: scaling failed");
}

struct ExtensionStep {
  double lower = 0.0;  // A
  double upper = 0.0;  // B
  double alpha = 0.0;
};

template <Field S>
struct Extension {
  LinearFunctional<S> functional;
  std::vector<ExtensionStep> steps;
};

namespace detail {

// Feasible set {y in simplex : <C^T y, b_l> = m_l}; optional objective <C^T y, z>.
inline lp::Problem simplex_slice(const std::vector<Vector<double>>& rows,
                                 const std::vector<Vector<double>>& basis,
                                 const std::vector<double>& mu) {
  lp::Problem prob;
  const std::size_t n_rows = rows.size();
  prob.a.emplace_back(n_rows, 1.0);
  prob.b.push_back(1.0);
  for (std::size_t l = 0; l < basis.size(); ++l) {
    std::vector<double> row(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) row[i] = pairing(basis[l], rows[i]);
    prob.a.push_back(std::move(row));
    prob.b.push_back(mu[l]);
  }
  prob.c.assign(n_rows, 0.0);
  return prob;
}

}  // namespace detail

// Residual of the best representation lambda = sum y_i c_i with y in the
// simplex over the gauge's linear rows. Zero (up to rounding) iff
// lambda(v) <= gauge(v) for every v.
inline double domination_residual(const MaxLinearGauge& gauge,
                                  const LinearFunctional<double>& lambda) {
  detail::require_same_dim(lambda.coeffs, gauge.rows().front(), "domination");
  const auto rows = gauge.linear_rows();
  std::vector<Vector<double>> units;
  for (std::size_t j = 0; j < gauge.dim(); ++j) {
    Vector<double> e(gauge.dim(), 0.0);
    e[j] = 1.0;
    units.push_back(e);
  }
  const auto prob = detail::simplex_slice(rows, units, lambda.coeffs);
  return lp::solve(prob).infeasibility;
}

inline bool certify_domination(const MaxLinearGauge& gauge,
                               const LinearFunctional<double>& lambda, double tol = 1e-9) {
  double scale = 1.0;
  for (const auto& r : gauge.rows()) scale = std::max(scale, max_modulus(r));
  return domination_residual(gauge, lambda) <= tol * scale;
}

// Extends mu (given by its values on a basis of W) to all of R^n, dominated
// by the gauge. One coordinate direction is added at a time; the admissible
// values of the new coordinate form [A, B] and the midpoint is taken.
inline Extension<double> hahn_banach_extend(const std::vector<Vector<double>>& basis,
                                            const std::vector<double>& mu,
                                            const MaxLinearGauge& gauge) {
  const std::size_t n = gauge.dim();
  if (basis.size() != mu.size()) throw DimensionMismatch("basis and mu values");
  for (const auto& b : basis) {
    if (b.size() != n) throw DimensionMismatch("basis vector vs gauge");
  }
  if (rank_of(basis) != basis.size()) {
    throw PreconditionViolation("hahn_banach_extend: basis is linearly dependent");
  }
  const auto rows = gauge.linear_rows();
  std::vector<Vector<double>> cur = basis;
  std::vector<double> vals = mu;

  if (lp::solve(detail::simplex_slice(rows, cur, vals)).status != lp::Status::optimal) {
    throw PreconditionViolation("hahn_banach_extend: functional exceeds the gauge on W");
  }

  Extension<double> out;
  for (std::size_t j = 0; j < n && cur.size() < n; ++j) {
    Vector<double> z(n, 0.0);
    z[j] = 1.0;
    auto trial = cur;
    trial.push_back(z);
    if (rank_of(trial) == cur.size()) continue;

    auto prob = detail::simplex_slice(rows, cur, vals);
    for (std::size_t i = 0; i < rows.size(); ++i) prob.c[i] = pairing(z, rows[i]);
    const auto lo = lp::solve(prob);
    for (auto& c : prob.c) c = -c;
    const auto hi = lp::solve(prob);
    if (lo.status != lp::Status::optimal || hi.status != lp::Status::optimal) {
      throw ConvergenceFailure("hahn_banach_extend: extension interval lost feasibility");
    }
    ExtensionStep step{lo.objective, -hi.objective, 0.0};
    step.alpha = 0.5 * (step.lower + step.upper);
    out.steps.push_back(step);
    cur = std::move(trial);
    vals.push_back(step.alpha);
  }

  // lambda is determined by its values on the completed basis.
  out.functional.coeffs = solve(Matrix<double>::from_rows(cur), vals);
  return out;
}

namespace detail {
inline Vector<double> realify(const Vector<complex>& v) {
  Vector<double> out(2 * v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = v[j].real();
    out[v.size() + j] = v[j].imag();
  }
  return out;
}
}  // namespace detail

// Complex extension. The gauge acts on the realification
// (Re v_1..Re v_n, Im v_1..Im v_n). The real part of mu is extended and the
// complex functional recovered as psi(v) = phi(v) - i phi(i v).
// Contract: psi = mu on W and Re psi(v) <= gauge(realify(v)).
inline Extension<complex> hahn_banach_extend_complex(const std::vector<Vector<complex>>& basis,
                                                     const std::vector<complex>& mu,
                                                     const MaxLinearGauge& gauge) {
  if (basis.size() != mu.size()) throw DimensionMismatch("basis and mu values");
  if (gauge.dim() % 2 != 0) throw DimensionMismatch("complex gauge must act on R^{2n}");
  const std::size_t n = gauge.dim() / 2;
  std::vector<Vector<double>> rbasis;
  std::vector<double> rmu;
  const complex i{0.0, 1.0};
  for (std::size_t l = 0; l < basis.size(); ++l) {
    if (basis[l].size() != n) throw DimensionMismatch("basis vector vs gauge");
    rbasis.push_back(detail::realify(basis[l]));
    rmu.push_back(mu[l].real());
    rbasis.push_back(detail::realify(scale(i, basis[l])));
    rmu.push_back((i * mu[l]).real());
  }
  auto real_ext = hahn_banach_extend(rbasis, rmu, gauge);
  Extension<complex> out;
  out.steps = std::move(real_ext.steps);
  out.functional.coeffs.resize(n);
  const auto& ab = real_ext.functional.coeffs;
  for (std::size_t j = 0; j < n; ++j) out.functional.coeffs[j] = {ab[j], -ab[n + j]};
  return out;
}

namespace detail {
// Orthonormalizes basis (assumed independent) and returns, for each
// orthonormal vector e_k, its coefficients in the original basis.
template <Field S>
std::vector<Vector<S>> orthonormal_coefficients(const std::vector<Vector<S>>& basis) {
  const std::size_t k = basis.size();
  std::vector<Vector<S>> es;
  std::vector<Vector<S>> coef;
  for (std::size_t l = 0; l < k; ++l) {
    Vector<S> v = basis[l];
    Vector<S> c(k, S{});
    c[l] = S{1};
    for (std::size_t m = 0; m < es.size(); ++m) {
      const S h = inner_product(v, es[m]);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= h * es[m][j];
      for (std::size_t j = 0; j < k; ++j) c[j] -= h * coef[m][j];
    }
    const double nv = norm2(v);
    if (nv <= 1e-12 * std::max(1.0, norm2(basis[l]))) {
      throw PreconditionViolation("basis is linearly dependent");
    }
    for (auto& x : v) x /= nv;
    for (auto& x : c) x /= nv;
    es.push_back(std::move(v));
    coef.push_back(std::move(c));
  }
  return coef;
}
}  // namespace detail

// Extension for the Euclidean norm via the representer of mu inside W:
// lambda(v) = <v, w_mu> with w_mu in span(basis).
template <Field S>
LinearFunctional<S> euclidean_extend(const std::vector<Vector<S>>& basis,
                                     const std::vector<S>& mu) {
  if (basis.empty()) throw PreconditionViolation("euclidean_extend: empty basis");
  if (basis.size() != mu.size()) throw DimensionMismatch("basis and mu values");
  const std::size_t k = basis.size();
  Matrix<S> gram(k, k);
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t l = 0; l < k; ++l) gram(m, l) = inner_product(basis[m], basis[l]);
  }
  const Vector<S> gamma = solve(gram, mu);
  Vector<S> coeffs(basis.front().size(), S{});
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] += gamma[l] * conj_of(basis[l][j]);
  }
  return {coeffs};
}

// sup{|mu(x)| : x in W, ||x||_2 <= 1} computed through an orthonormal basis.
template <Field S>
double restricted_euclidean_dual_norm(const std::vector<Vector<S>>& basis,
                                      const std::vector<S>& mu) {
  if (basis.size() != mu.size()) throw DimensionMismatch("basis and mu values");
  const auto coef = detail::orthonormal_coefficients(basis);
  Vector<S> vals(coef.size());
  for (std::size_t k = 0; k < coef.size(); ++k) {
    S s{};
    for (std::size_t l = 0; l < mu.size(); ++l) s += coef[k][l] * mu[l];
    vals[k] = s;
  }
  return norm2(vals);
}

// inf{r > 0 : member(v / r)} by bisection, to absolute tolerance tol.
inline double gauge_value(const std::function<bool(const Vector<double>&)>& member,
                          const Vector<double>& v, double tol) {
  if (!(tol > 0.0)) throw PreconditionViolation("gauge_value: tol must be positive");
  if (max_modulus(v) == 0.0) return 0.0;
  const auto in = [&](double r) { return member(scale(1.0 / r, v)); };
  double hi = 1.0;
  while (!in(hi)) {
    hi *= 2.0;
    if (hi > 0x1.0p60) throw NonAbsorbing("gauge_value: direction is not absorbed up to r = 2^60");
  }
  double lo = hi / 2.0;
  while (in(lo)) {
    hi = lo;
    lo /= 2.0;
    if (hi < tol) return 0.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (in(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double gauge_value(const MaxLinearGauge& a, const Vector<double>& v, double tol) {
  detail::require_same_dim(v, a.rows().front(), "gauge_value");
  return gauge_value([&a](const Vector<double>& u) { return a(u) <= 1.0; }, v, tol);
}

// N(v) = max(p(v), p(-v)).
inline MaxLinearGauge seminorm_from_sublinear(const MaxLinearGauge& p) {
  if (p.absolute()) throw PreconditionViolation("seminorm_from_sublinear: gauge is already absolute");
  std::vector<Vector<double>> rows = p.rows();
  for (const auto& r : p.rows()) rows.push_back(scale(-1.0, r));
  return MaxLinearGauge(std::move(rows), true);
}

struct PolyhedralCone {
  std::vector<Vector<double>> generators;

  explicit PolyhedralCone(std::vector<Vector<double>> gens) : generators(std::move(gens)) {
    if (generators.empty()) throw PreconditionViolation("cone needs generators");
    for (const auto& g : generators) detail::require_same_dim(g, generators.front(), "cone");
  }

  std::size_t dim() const { return generators.front().size(); }

  static PolyhedralCone orthant(std::size_t n) {
    std::vector<Vector<double>> gens;
    for (std::size_t j = 0; j < n; ++j) {
      Vector<double> e(n, 0.0);
      e[j] = 1.0;
      gens.push_back(e);
    }
    return PolyhedralCone(gens);
  }
};

// The dual cone {lambda : <lambda, g_i> >= 0 for all i}, as its constraint rows.
inline std::vector<Vector<double>> dual_cone(const PolyhedralCone& cone) {
  return cone.generators;
}

inline bool satisfies_constraints(const std::vector<Vector<double>>& constraints,
                                  const Vector<double>& v, double tol) {
  for (const auto& c : constraints) {
    if (pairing(v, c) < -tol * std::max(1.0, norm2(c) * norm2(v))) return false;
  }
  return true;
}

// Membership v = sum t_i g_i, t >= 0: every subset of generators is tried by
// least squares (a member is a nonnegative combination of an independent
// subset, so this is exhaustive).
inline bool cone_contains(const PolyhedralCone& cone, const Vector<double>& v, double tol) {
  detail::require_same_dim(v, cone.generators.front(), "cone_contains");
  const std::size_t m = cone.generators.size();
  if (m > 8) throw Unsupported("cone_contains supports at most 8 generators");
  const double scale_v = std::max(1.0, norm2(v));
  if (norm2(v) <= tol * scale_v) return true;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<Vector<double>> sub;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) sub.push_back(cone.generators[i]);
    }
    if (sub.size() > v.size() || rank_of(sub) != sub.size()) continue;
    const std::size_t k = sub.size();
    Matrix<double> gram(k, k);
    Vector<double> rhs(k);
    for (std::size_t a = 0; a < k; ++a) {
      rhs[a] = pairing(v, sub[a]);
      for (std::size_t b = 0; b < k; ++b) gram(a, b) = pairing(sub[a], sub[b]);
    }
    Vector<double> t;
    try {
      t = solve(gram, rhs);
    } catch (const PreconditionViolation&) {
      continue;
    }
    bool nonneg = true;
    for (double x : t) nonneg = nonneg && x >= -tol;
    if (!nonneg) continue;
    Vector<double> r = v;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t j = 0; j < r.size(); ++j) r[j] -= std::max(t[a], 0.0) * sub[a][j];
    }
    if (norm2(r) <= tol * scale_v) return true;
  }
  return false;
}

// Membership in the double dual E'' = {v : <lambda, v> >= 0 for all lambda in
// E'}, decided by minimizing <lambda, v> over E' intersected with the box
// [-1, 1]^n.
inline bool double_dual_contains(const PolyhedralCone& cone, const Vector<double>& v,
                                 double tol) {
  detail::require_same_dim(v, cone.generators.front(), "double_dual_contains");
  const std::size_t n = cone.dim();
  const std::size_t m = cone.generators.size();
  // Variables: l (n, lambda = l - 1), s (n, l + s = 2), t (m, surplus).
  lp::Problem prob;
  const std::size_t nv = 2 * n + m;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(nv, 0.0);
    row[j] = 1.0;
    row[n + j] = 1.0;
    prob.a.push_back(row);
    prob.b.push_back(2.0);
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(nv, 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = cone.generators[i][j];
      sum += cone.generators[i][j];
    }
    row[2 * n + i] = -1.0;
    prob.a.push_back(row);
    prob.b.push_back(sum);
  }
  prob.c.assign(nv, 0.0);
  double shift = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    prob.c[j] = v[j];
    shift += v[j];
  }
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::optimal) {
    throw ConvergenceFailure("double_dual_contains: lambda = 0 must be feasible");
  }
  return res.objective - shift >= -tol * std::max(1.0, norm2(v));
}

}  // namespace normlab
