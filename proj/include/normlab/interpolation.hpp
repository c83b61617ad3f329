#pragma once

// Norms M_p of the bilinear form (x, y) -> sum y_j a_jk x_k, their extremal
// stationarity conditions, and a one-sided test of log-convexity of M_p in
// 1/p.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "normlab/core.hpp"
#include "normlab/operators.hpp"
#include "normlab/random.hpp"

namespace normlab {

// 1/r = t/p + (1-t)/q with p < q and t in (0, 1).
class InterpolationTriple {
 public:
  InterpolationTriple(Exponent p, Exponent q, double t) : p_(p), q_(q), t_(t), r_(Exponent(1.0)) {
    if (!(p.value() < q.value())) throw PreconditionViolation("triple needs p < q");
    if (!(t > 0.0 && t < 1.0)) throw PreconditionViolation("triple needs t in (0, 1)");
    r_ = Exponent::from_reciprocal(t * p.reciprocal() + (1.0 - t) * q.reciprocal());
  }

  const Exponent& p() const { return p_; }
  const Exponent& q() const { return q_; }
  const Exponent& r() const { return r_; }
  double t() const { return t_; }

 private:
  Exponent p_;
  Exponent q_;
  double t_;
  Exponent r_;
};

inline bool has_closed_form(const Exponent& p) {
  return p.is_one() || p.is_infinite() || p.value() == 2.0;
}

struct MpValue {
  double value = 0.0;
  bool exact = false;
};

// Exact for p in {1, 2, inf}; otherwise the best certified lower bound over
// `budget` seeded starts (iteration cap 500 each).
template <Field S>
MpValue m_p(const Matrix<S>& t, const Exponent& p, int budget = 8, std::uint64_t seed = 0) {
  if (budget < 1) throw PreconditionViolation("m_p: budget must be >= 1");
  if (has_closed_form(p)) return {op_norm_exact(t, p), true};
  constexpr int iters = 500;
  double best = op_norm_lower(t, p, iters, derive_seed(seed, "m_p", 0)).bound;
  const Matrix<S> tt = transpose(t);
  for (int r = 1; r < budget; ++r) {
    Rng rng(seed, "m_p", static_cast<std::uint64_t>(r));
    best = std::max(best, detail::dual_power_iteration(t, tt, p, rng.vector<S>(t.cols()), iters).bound);
  }
  return {best, false};
}

struct LogConvexityEntry {
  InterpolationTriple triple;
  MpValue mr;
  MpValue mp;
  MpValue mq;
  double bound = 0.0;   // M_p^t M_q^(1-t)
  double margin = 0.0;  // (bound - L_r) / bound
  bool genuine = false; // both endpoints exact, so the test is sound
};

struct LogConvexityReport {
  std::vector<LogConvexityEntry> entries;

  // Only genuine entries can fail; the others are advisory.
  bool passed(double slack = 1e-9) const {
    for (const auto& e : entries) {
      if (e.genuine && e.margin < -slack) return false;
    }
    return true;
  }

  double worst_genuine_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
      if (e.genuine) m = std::min(m, e.margin);
    }
    return m;
  }
};

// Pairs (1,2), (2,inf), (1,inf) with t in {0.25, 0.5, 0.75, 0.9}.
inline std::vector<InterpolationTriple> default_triples() {
  const Exponent one(1.0), two(2.0), inf = Exponent::infinity();
  std::vector<InterpolationTriple> out;
  for (const auto& [p, q] : {std::pair{one, two}, std::pair{two, inf}, std::pair{one, inf}}) {
    for (double t : {0.25, 0.5, 0.75, 0.9}) out.emplace_back(p, q, t);
  }
  return out;
}

template <Field S>
LogConvexityReport log_convexity_check(const Matrix<S>& t,
                                       const std::vector<InterpolationTriple>& triples,
                                       int budget = 8, std::uint64_t seed = 0) {
  LogConvexityReport rep;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& tr = triples[i];
    const std::uint64_t s = derive_seed(seed, "triple", i);
    LogConvexityEntry e{tr, m_p(t, tr.r(), budget, s), m_p(t, tr.p(), budget, s),
                        m_p(t, tr.q(), budget, s)};
    e.bound = std::pow(e.mp.value, tr.t()) * std::pow(e.mq.value, 1.0 - tr.t());
    e.margin = e.bound > 0.0 ? (e.bound - e.mr.value) / e.bound : (e.mr.value > 0.0 ? -1.0 : 0.0);
    e.genuine = e.mp.exact && e.mq.exact;
    rep.entries.push_back(e);
  }
  return rep;
}

struct Stationarity {
  double mu = 0.0;
  double nu = 0.0;
  double mu_residual = 0.0;
  double nu_residual = 0.0;
};

// Fits |(T x)_j| = mu |y_j|^(r'-1) and |(T^t y)_k| = nu |x_k|^(r-1) by least
// squares and reports the max residuals relative to the largest left side.
template <Field S>
Stationarity stationarity_residual(const Matrix<S>& t, const Vector<S>& x, const Vector<S>& y,
                                   const Exponent& r) {
  if (r.is_one() || r.is_infinite()) {
    throw Unsupported("stationarity_residual needs 1 < r < inf");
  }
  if (x.size() != t.cols() || y.size() != t.rows()) {
    throw DimensionMismatch("stationarity_residual: x, y vs " + t.shape());
  }
  const Exponent rc = r.conjugate();
  if (std::abs(p_norm(x, r) - 1.0) > 1e-10 || std::abs(p_norm(y, rc) - 1.0) > 1e-10) {
    throw PreconditionViolation("stationarity_residual: x and y must be normalized");
  }
  const auto fit = [](const Vector<S>& lhs, const Vector<S>& base, double power,
                      double& coef, double& res) {
    double ab = 0.0, bb = 0.0, amax = 0.0;
    std::vector<double> a(lhs.size()), b(lhs.size());
    for (std::size_t j = 0; j < lhs.size(); ++j) {
      a[j] = modulus(lhs[j]);
      const double m = modulus(base[j]);
      b[j] = m == 0.0 ? 0.0 : std::pow(m, power);
      ab += a[j] * b[j];
      bb += b[j] * b[j];
      amax = std::max(amax, a[j]);
    }
    coef = bb > 0.0 ? ab / bb : 0.0;
    res = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) res = std::max(res, std::abs(a[j] - coef * b[j]));
    if (amax > 0.0) res /= amax;
  };
  Stationarity out;
  fit(normlab::apply(t, x), y, rc.value() - 1.0, out.mu, out.mu_residual);
  fit(normlab::apply(transpose(t), y), x, r.value() - 1.0, out.nu, out.nu_residual);
  return out;
}

inline double interpolate_bound(double n_p, double n_q, const InterpolationTriple& triple) {
  if (n_p < 0.0 || n_q < 0.0) throw PreconditionViolation("interpolate_bound: negative norm");
  return std::pow(n_p, triple.t()) * std::pow(n_q, 1.0 - triple.t());
}

}  // namespace normlab
