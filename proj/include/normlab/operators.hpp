#pragma once

// Matrices as linear maps: operator and Schatten norms, a cyclic Jacobi
// eigensolver for Hermitian matrices, Schmidt decompositions, PSD calculus,
// projections and Neumann series.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "normlab/core.hpp"
#include "normlab/duality.hpp"
#include "normlab/matrix.hpp"
#include "normlab/random.hpp"

namespace normlab {

template <Field S>
double hs_norm(const Matrix<S>& t) {
  return p_norm(t.data(), Exponent(2.0));
}

template <Field S>
S trace(const Matrix<S>& t) {
  if (!t.square()) throw DimensionMismatch("trace of non-square " + t.shape());
  S s{};
  for (std::size_t i = 0; i < t.rows(); ++i) s += t(i, i);
  return s;
}

template <Field S>
struct EigenDecomposition {
  Matrix<S> q;                // columns are eigenvectors
  std::vector<double> eigs;   // descending
  int sweeps = 0;
};

template <Field S>
bool is_hermitian(const Matrix<S>& a, double tol = 1e-12) {
  if (!a.square()) return false;
  const double bound = tol * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      if (modulus(a(i, j) - conj_of(a(j, i))) > bound) return false;
    }
  }
  return true;
}

// Cyclic-by-row Jacobi. Each rotation J = diag(1, conj(e)) * R zeroes one
// off-diagonal pair, where e is the phase of a_pq and R the real rotation of
// the resulting real symmetric 2x2 block.
template <Field S>
EigenDecomposition<S> hermitian_eig(const Matrix<S>& input, double tol = 1e-12,
                                    int max_sweeps = 60) {
  if (!input.square()) throw DimensionMismatch("hermitian_eig of non-square " + input.shape());
  if (!is_hermitian(input)) throw PreconditionViolation("hermitian_eig: matrix is not Hermitian");
  const std::size_t n = input.rows();
  Matrix<S> a = input;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = S{real_part(a(i, i))};
    for (std::size_t j = i + 1; j < n; ++j) {
      const S h = 0.5 * (a(i, j) + conj_of(a(j, i)));
      a(i, j) = h;
      a(j, i) = conj_of(h);
    }
  }
  Matrix<S> q = Matrix<S>::identity(n);
  const double target = tol * hs_norm(a);

  const auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += std::norm(a(i, j));
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; off() > target; ++sweep) {
    if (sweep >= max_sweeps) {
      throw ConvergenceFailure("hermitian_eig: no convergence in " + std::to_string(max_sweeps) +
                               " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double mag = modulus(a(p, r));
        if (mag == 0.0) continue;
        const S e = a(p, r) / mag;
        const double app = real_part(a(p, p));
        const double arr = real_part(a(r, r));
        const double theta = (arr - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        const S jpp = S{c};
        const S jpq = S{s};
        const S jqp = -s * conj_of(e);
        const S jqq = c * conj_of(e);
        for (std::size_t k = 0; k < n; ++k) {
          const S akp = a(k, p);
          const S akr = a(k, r);
          a(k, p) = akp * jpp + akr * jqp;
          a(k, r) = akp * jpq + akr * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const S apk = a(p, k);
          const S ark = a(r, k);
          a(p, k) = conj_of(jpp) * apk + conj_of(jqp) * ark;
          a(r, k) = conj_of(jpq) * apk + conj_of(jqq) * ark;
        }
        a(p, r) = S{};
        a(r, p) = S{};
        a(p, p) = S{app - t * mag};
        a(r, r) = S{arr + t * mag};
        for (std::size_t k = 0; k < n; ++k) {
          const S qkp = q(k, p);
          const S qkr = q(k, r);
          q(k, p) = qkp * jpp + qkr * jqp;
          q(k, r) = qkp * jpq + qkr * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return real_part(a(x, x)) > real_part(a(y, y));
  });
  EigenDecomposition<S> out{Matrix<S>(n, n), std::vector<double>(n), sweep};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigs[k] = real_part(a(order[k], order[k]));
    out.q.set_column(k, q.column(order[k]));
  }
  return out;
}

// Orthonormalizes vs in order (modified Gram-Schmidt, two passes); a vector
// whose residual is below tol times its norm is dropped.
template <Field S>
std::vector<Vector<S>> gram_schmidt(const std::vector<Vector<S>>& vs, double tol = 1e-10) {
  std::vector<Vector<S>> out;
  for (const auto& v0 : vs) {
    if (!out.empty()) detail::require_same_dim(v0, out.front(), "gram_schmidt");
    const double n0 = norm2(v0);
    if (n0 == 0.0) continue;
    Vector<S> v = v0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : out) {
        const S h = inner_product(v, e);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= h * e[j];
      }
    }
    const double nv = norm2(v);
    if (nv < tol * n0) continue;
    for (auto& x : v) x /= nv;
    out.push_back(std::move(v));
  }
  return out;
}

template <Field S>
struct SchmidtDecomposition {
  std::vector<Vector<S>> left;   // output directions w_j
  std::vector<Vector<S>> right;  // input directions u_j
  std::vector<double> values;    // descending, >= 0
  std::size_t rank = 0;

  // sum_j lambda_j <v, u_j> w_j
  Vector<S> apply(const Vector<S>& v) const {
    Vector<S> out(left.front().size(), S{});
    for (std::size_t j = 0; j < values.size(); ++j) {
      const S c = values[j] * inner_product(v, right[j]);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * left[j][i];
    }
    return out;
  }
};

// Schmidt decomposition from the eigendecomposition of T* T. A negative
// rank_tol selects the default 1e-10 * ||T||_HS.
template <Field S>
SchmidtDecomposition<S> schmidt(const Matrix<S>& t, double rank_tol = -1.0) {
  if (rank_tol < 0.0) rank_tol = 1e-10 * hs_norm(t);
  const auto eig = hermitian_eig(adjoint(t) * t);
  const std::size_t k = std::min(t.rows(), t.cols());

  struct Item {
    double value;
    Vector<S> u;
    Vector<S> w;
  };
  std::vector<Item> items;
  for (std::size_t j = 0; j < k; ++j) {
    Vector<S> u = eig.q.column(j);
    Vector<S> w = normlab::apply(t, u);
    const double sigma = norm2(w);
    items.push_back({sigma, std::move(u), std::move(w)});
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.value > y.value; });

  SchmidtDecomposition<S> out;
  std::vector<Vector<S>> kept;
  for (auto& it : items) {
    out.values.push_back(it.value);
    out.right.push_back(it.u);
    if (it.value > rank_tol) {
      ++out.rank;
      for (auto& x : it.w) x /= it.value;
      kept.push_back(it.w);
    }
  }
  // Re-orthonormalize the left vectors (forming T u_j squares the
  // conditioning), then complete them with standard basis vectors.
  std::vector<Vector<S>> left;
  for (const auto& w : kept) {
    auto trial = left;
    trial.push_back(w);
    trial = gram_schmidt(trial, 1e-3);
    if (trial.size() == left.size()) break;  // numerically rank deficient from here on
    left = std::move(trial);
  }
  out.rank = left.size();
  for (std::size_t i = 0; i < t.rows() && left.size() < k; ++i) {
    Vector<S> e(t.rows(), S{});
    e[i] = S{1};
    auto trial = left;
    trial.push_back(e);
    trial = gram_schmidt(trial, 1e-6);
    if (trial.size() > left.size()) left = std::move(trial);
  }
  out.left = std::move(left);
  return out;
}

template <Field S>
double schatten_norm(const Matrix<S>& t, const Exponent& p) {
  return p_norm(schmidt(t).values, p);
}

template <Field S>
double op_norm_exact(const Matrix<S>& t, const Exponent& p) {
  if (p.is_one()) {
    double best = 0.0;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < t.rows(); ++i) s += modulus(t(i, j));
      best = std::max(best, s);
    }
    return best;
  }
  if (p.is_infinite()) {
    double best = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < t.cols(); ++j) s += modulus(t(i, j));
      best = std::max(best, s);
    }
    return best;
  }
  if (p.value() == 2.0) return schmidt(t).values.front();
  throw Unsupported("op_norm_exact: no closed form for p = " + p.to_string());
}

template <Field S>
double schur_bound(const Matrix<S>& t, const Exponent& p) {
  const double n1 = op_norm_exact(t, Exponent(1.0));
  const double ninf = op_norm_exact(t, Exponent::infinity());
  if (p.is_one()) return n1;
  if (p.is_infinite()) return ninf;
  const double r = p.reciprocal();
  return std::pow(n1, r) * std::pow(ninf, 1.0 - r);
}

template <Field S>
struct NormLowerBound {
  double bound = 0.0;
  Vector<S> witness;
};

namespace detail {
// From the start x, iterate x -> extremizer of (T^t w) with w the dual
// extremizer of T x. The ratio ||T x||_p / ||x||_p never decreases; stops
// when the relative gain is below 1e-12 or after iters evaluations.
template <Field S>
NormLowerBound<S> dual_power_iteration(const Matrix<S>& t, const Matrix<S>& tt, const Exponent& p,
                                       Vector<S> x, int iters) {
  const Exponent q = p.conjugate();
  const auto ratio = [&](const Vector<S>& v) {
    const double nv = p_norm(v, p);
    return nv == 0.0 ? 0.0 : p_norm(normlab::apply(t, v), p) / nv;
  };
  if (max_modulus(x) == 0.0) return {0.0, x};
  double cur = ratio(x);
  for (int it = 1; it < iters; ++it) {
    const Vector<S> y = normlab::apply(t, x);
    if (max_modulus(y) == 0.0) break;
    const Vector<S> g = normlab::apply(tt, dual_extremizer(y, q));
    if (max_modulus(g) == 0.0) break;
    Vector<S> nx = dual_extremizer(g, p);
    const double nn = p_norm(nx, p);
    for (auto& v : nx) v /= nn;
    const double next = ratio(nx);
    if (!(next > cur)) break;
    const bool small = next - cur <= 1e-12 * next;
    x = std::move(nx);
    cur = next;
    if (small) break;
  }
  return {cur, std::move(x)};
}
}  // namespace detail

// Certified lower bound ||T x||_p / ||x||_p: the best of the dual power
// iteration from the best unit column, the all-ones vector and one seeded
// random start.
template <Field S>
NormLowerBound<S> op_norm_lower(const Matrix<S>& t, const Exponent& p, int iters,
                                std::uint64_t seed) {
  if (iters < 1) throw PreconditionViolation("op_norm_lower: iters must be >= 1");
  const Matrix<S> tt = transpose(t);
  const std::size_t n = t.cols();

  std::vector<Vector<S>> starts;
  {
    std::size_t best_col = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = p_norm(t.column(k), p);
      if (r > best) {
        best = r;
        best_col = k;
      }
    }
    Vector<S> e(n, S{});
    e[best_col] = S{1};
    starts.push_back(e);
    starts.emplace_back(n, S{1});
    Rng rng(seed, "op_norm_lower", 0);
    starts.push_back(rng.vector<S>(n));
  }

  NormLowerBound<S> best{0.0, starts.front()};
  for (auto& x : starts) {
    auto r = detail::dual_power_iteration(t, tt, p, std::move(x), iters);
    if (r.bound > best.bound) best = std::move(r);
  }
  return best;
}

template <Field S>
bool is_psd(const Matrix<S>& a, double tol = 1e-10) {
  if (!is_hermitian(a)) throw PreconditionViolation("is_psd: matrix is not Hermitian");
  return hermitian_eig(a).eigs.back() >= -tol;
}

template <Field S>
Matrix<S> psd_sqrt(const Matrix<S>& a) {
  const double tol = 1e-10 * std::max(1.0, hs_norm(a));
  if (!is_psd(a, tol)) throw PreconditionViolation("psd_sqrt: matrix is not nonnegative");
  const auto eig = hermitian_eig(a);
  Vector<S> d(eig.eigs.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = S{std::sqrt(std::max(eig.eigs[i], 0.0))};
  return eig.q * Matrix<S>::diag(d) * adjoint(eig.q);
}

// ||T^(2^k)||_2^(1/2^k) by repeated squaring, rescaled each step.
template <Field S>
double spectral_radius_estimate(const Matrix<S>& t, int k) {
  if (!t.square()) throw DimensionMismatch("spectral radius of non-square " + t.shape());
  if (k < 0) throw PreconditionViolation("spectral_radius_estimate: k must be >= 0");
  Matrix<S> b = t;
  double log_scale = 0.0;
  for (int i = 0; i < k; ++i) {
    const double s = b.max_abs();
    if (s == 0.0) return 0.0;
    b = S{1.0 / s} * b;
    log_scale = 2.0 * (log_scale + std::log(s));
    b = b * b;
  }
  const double nb = op_norm_exact(b, Exponent(2.0));
  if (nb == 0.0) return 0.0;
  const double out = std::exp((log_scale + std::log(nb)) / std::ldexp(1.0, k));
  if (!std::isfinite(out)) throw Error("spectral_radius_estimate: overflow");
  return out;
}

template <Field S>
Matrix<S> orthogonal_projection(const std::vector<Vector<S>>& basis) {
  if (basis.empty()) throw PreconditionViolation("orthogonal_projection: empty basis");
  const auto es = gram_schmidt(basis);
  if (es.size() != basis.size()) {
    throw PreconditionViolation("orthogonal_projection: basis is linearly dependent");
  }
  Matrix<S> p(basis.front().size(), basis.front().size());
  for (const auto& e : es) p = p + outer(e, e);
  return p;
}

template <Field S>
struct NeumannResult {
  Matrix<S> sum;         // sum_{j=0}^n T^j
  double residual = 0;   // ||(I - T) S_n - I||_2
  double bound = 0;      // ||T||_2^(n+1)
};

template <Field S>
NeumannResult<S> neumann_inverse(const Matrix<S>& t, int n) {
  if (!t.square()) throw DimensionMismatch("neumann_inverse of non-square " + t.shape());
  if (n < 0) throw PreconditionViolation("neumann_inverse: n must be >= 0");
  const double norm = op_norm_exact(t, Exponent(2.0));
  if (!(norm < 1.0)) throw PreconditionViolation("neumann_inverse: ||T||_2 must be < 1");
  const auto id = Matrix<S>::identity(t.rows());
  Matrix<S> s = id;
  for (int j = 0; j < n; ++j) s = id + t * s;
  NeumannResult<S> out{s, 0.0, std::pow(norm, n + 1)};
  out.residual = op_norm_exact((id - t) * s - id, Exponent(2.0));
  const double slack = 1e-12 * static_cast<double>(t.rows()) / (1.0 - norm);
  if (out.residual > out.bound + slack) {
    throw ConvergenceFailure("neumann_inverse: residual exceeds the geometric bound");
  }
  return out;
}

struct DualityReport {
  double lhs = 0.0;
  double rhs = 0.0;
};

// |tr(R T)| against ||T||_{S_p} ||R||_{S_q}.
template <Field S>
DualityReport sp_duality_report(const Matrix<S>& t, const Matrix<S>& r, const Exponent& p) {
  if (r.cols() != t.rows() || r.rows() != t.cols()) {
    throw DimensionMismatch("sp_duality_report: " + r.shape() + " * " + t.shape());
  }
  return {modulus(trace(r * t)), schatten_norm(t, p) * schatten_norm(r, p.conjugate())};
}

}  // namespace normlab
