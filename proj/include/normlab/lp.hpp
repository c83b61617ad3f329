#pragma once

// Small dense linear programs: minimize c.y subject to A y = b, y >= 0.
// Two-phase tableau simplex with Bland's rule, sized for the handful of
// variables the polyhedral routines need.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "normlab/error.hpp"

namespace normlab::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  std::vector<double> y;
  double objective = 0.0;
  // Phase-one residual: sum of artificial variables at the end of phase one.
  double infeasibility = 0.0;
};

struct Problem {
  std::vector<std::vector<double>> a;  // m rows of length n
  std::vector<double> b;               // length m
  std::vector<double> c;               // length n
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t width) : m_(m), w_(width), t_((m + 1) * (width + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (w_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, w_); }
  double& cost(std::size_t j) { return at(m_, j); }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= w_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= w_; ++j) at(i, j) -= f * at(r, j);
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t width() const { return w_; }

 private:
  std::size_t m_;
  std::size_t w_;
  std::vector<double> t_;
};

// Runs simplex iterations over columns [0, active) of the tableau. Returns
// false if the objective is unbounded below.
inline bool iterate(Tableau& t, std::vector<std::size_t>& basis, std::size_t active,
                    double eps) {
  const std::size_t cap = 50000;
  for (std::size_t it = 0; it < cap; ++it) {
    std::size_t enter = active;
    for (std::size_t j = 0; j < active; ++j) {
      if (t.cost(j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == active) return true;
    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, enter);
      if (a <= eps) continue;
      const double ratio = t.rhs(i) / a;
      if (ratio < best - 1e-15 ||
          (std::abs(ratio - best) <= 1e-15 && leave < t.rows() && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == t.rows()) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  throw ConvergenceFailure("simplex iteration cap reached");
}

}  // namespace detail

inline Result solve(const Problem& prob, double eps = 1e-11) {
  const std::size_t m = prob.a.size();
  const std::size_t n = prob.c.size();
  if (prob.b.size() != m) throw DimensionMismatch("lp: rhs length");
  for (const auto& row : prob.a) {
    if (row.size() != n) throw DimensionMismatch("lp: constraint row length");
  }

  // Columns: n originals, then m artificials.
  detail::Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = prob.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * prob.a[i][j];
    t.at(i, n + i) = 1.0;
    t.rhs(i) = sign * prob.b[i];
    basis[i] = n + i;
  }
  // Phase one: minimize the sum of artificials.
  for (std::size_t j = 0; j <= n + m; ++j) {
    if (j >= n && j < n + m) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += j == n + m ? t.rhs(i) : t.at(i, j);
    t.at(m, j) = -s;
  }
  detail::iterate(t, basis, n + m, eps);

  Result res;
  res.infeasibility = -t.at(m, n + m);
  double scale = 1.0;
  for (double v : prob.b) scale = std::max(scale, std::abs(v));
  if (res.infeasibility > 1e-9 * scale) {
    res.status = Status::infeasible;
    return res;
  }

  // Drive artificials out of the basis; rows where that is impossible are
  // redundant and are dropped by zeroing them.
  std::vector<bool> dead(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.at(i, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col == n) {
      dead[i] = true;
      continue;
    }
    t.pivot(i, col);
    basis[i] = col;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!dead[i]) continue;
    for (std::size_t j = 0; j <= n + m; ++j) t.at(i, j) = 0.0;
  }

  // Phase two objective, expressed in terms of the nonbasic variables.
  for (std::size_t j = 0; j <= n + m; ++j) t.at(m, j) = 0.0;
  for (std::size_t j = 0; j < n; ++j) t.cost(j) = prob.c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (dead[i] || basis[i] >= n) continue;
    const double cb = prob.c[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= n + m; ++j) t.at(m, j) -= cb * t.at(i, j);
  }
  // Artificial columns stay out: only the first n columns may enter.
  if (!detail::iterate(t, basis, n, eps)) {
    res.status = Status::unbounded;
    return res;
  }

  res.status = Status::optimal;
  res.y.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!dead[i] && basis[i] < n) res.y[basis[i]] = std::max(0.0, t.rhs(i));
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.objective += prob.c[j] * res.y[j];
  return res;
}

}  // namespace normlab::lp
