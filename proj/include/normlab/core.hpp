#pragma once

// Scalars, exponents, vectors and the convexity/inequality toolkit shared by
// every other module.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "normlab/error.hpp"

namespace normlab {

using complex = std::complex<double>;

// The scalar field of a computation: the reals or the complex numbers.
template <class S>
concept Field = std::same_as<S, double> || std::same_as<S, complex>;

template <class S>
inline constexpr bool is_complex_v = std::same_as<S, complex>;

inline double modulus(double x) { return std::abs(x); }
inline double modulus(const complex& z) { return std::abs(z); }

inline double conj_of(double x) { return x; }
inline complex conj_of(const complex& z) { return std::conj(z); }

inline double real_part(double x) { return x; }
inline double real_part(const complex& z) { return z.real(); }

inline double imag_part(double) { return 0.0; }
inline double imag_part(const complex& z) { return z.imag(); }

// Default slack policy. Inequalities get additive slack scaled by the
// magnitudes involved; identities are compared relatively.
struct Tolerance {
  static constexpr double inequality = 1e-10;
  static constexpr double identity = 1e-12;
};

// An exponent p in [1, inf]. Infinity is a distinguished value, never a large
// float, so conjugation 1 <-> inf is exact.
class Exponent {
 public:
  explicit Exponent(double p) {
    if (std::isnan(p) || p < 1.0) {
      throw PreconditionViolation("exponent must lie in [1, inf], got " +
                                  std::to_string(p));
    }
    infinite_ = std::isinf(p);
    value_ = infinite_ ? 0.0 : p;
    conj_infinite_ = value_ == 1.0;
    conj_value_ = infinite_ ? 1.0 : (conj_infinite_ ? 0.0 : p / (p - 1.0));
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  // Exponent with 1/p = r; r = 0 gives infinity.
  static Exponent from_reciprocal(double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw PreconditionViolation("reciprocal exponent must lie in [0, 1]");
    }
    if (r == 0.0) return infinity();
    return Exponent(1.0 / r);
  }

  bool is_infinite() const { return infinite_; }
  bool is_one() const { return !infinite_ && value_ == 1.0; }

  // +inf for the infinite exponent.
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  // The pair (p, p') is carried together, so conjugating twice is exact.
  Exponent conjugate() const {
    Exponent c = *this;
    std::swap(c.infinite_, c.conj_infinite_);
    std::swap(c.value_, c.conj_value_);
    return c;
  }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && a.value_ == b.value_;
  }

  // "inf" or a round-trippable decimal.
  std::string to_string() const {
    if (infinite_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }

  static Exponent parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(text, &used);
    } catch (const std::exception&) {
      throw ParseError("bad exponent '" + text + "'");
    }
    if (used != text.size()) throw ParseError("bad exponent '" + text + "'");
    return Exponent(p);
  }

 private:
  bool infinite_ = false;
  double value_ = 1.0;
  bool conj_infinite_ = true;
  double conj_value_ = 0.0;
};

inline Exponent conjugate_exponent(const Exponent& p) { return p.conjugate(); }

template <Field S>
using Vector = std::vector<S>;

namespace detail {
template <class A, class B>
void require_same_dim(const A& a, const B& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
  }
}
}  // namespace detail

template <Field S>
Vector<S> add(const Vector<S>& v, const Vector<S>& w) {
  detail::require_same_dim(v, w, "add");
  Vector<S> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] + w[j];
  return out;
}

template <Field S>
Vector<S> subtract(const Vector<S>& v, const Vector<S>& w) {
  detail::require_same_dim(v, w, "subtract");
  Vector<S> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] - w[j];
  return out;
}

template <Field S>
Vector<S> scale(S a, const Vector<S>& v) {
  Vector<S> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = a * v[j];
  return out;
}

template <Field S>
double max_modulus(const Vector<S>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, modulus(x));
  return m;
}

// ||v||_p. Finite p factors out max|v_j| first so that neither huge nor tiny
// entries overflow or underflow when raised to the p-th power.
template <Field S>
double p_norm(const Vector<S>& v, const Exponent& p) {
  const double m = max_modulus(v);
  if (m == 0.0 || p.is_infinite()) return m;
  if (p.is_one()) {
    double s = 0.0;
    for (const auto& x : v) s += modulus(x);
    return s;
  }
  const double pv = p.value();
  double s = 0.0;
  for (const auto& x : v) {
    const double a = modulus(x) / m;
    if (a > 0.0) s += std::pow(a, pv);
  }
  return m * std::pow(s, 1.0 / pv);
}

// sum_j |v_j|^p for any p > 0 (used for the 0 < p < 1 power-sum bounds,
// which are not norms).
template <Field S>
double power_sum(const Vector<S>& v, double p) {
  if (!(p > 0.0)) throw PreconditionViolation("power_sum needs p > 0");
  double s = 0.0;
  for (const auto& x : v) {
    const double a = modulus(x);
    if (a > 0.0) s += std::pow(a, p);
  }
  return s;
}

// Duality pairing sum_j w_j v_j (no conjugation).
template <Field S>
S pairing(const Vector<S>& v, const Vector<S>& w) {
  detail::require_same_dim(v, w, "pairing");
  S s{};
  for (std::size_t j = 0; j < v.size(); ++j) s += w[j] * v[j];
  return s;
}

// Standard inner product, linear in the first argument:
// sum_j v_j conj(w_j).
template <Field S>
S inner_product(const Vector<S>& v, const Vector<S>& w) {
  detail::require_same_dim(v, w, "inner_product");
  S s{};
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * conj_of(w[j]);
  return s;
}

template <Field S>
double norm2(const Vector<S>& v) {
  return p_norm(v, Exponent(2.0));
}

// Recovers the inner product from a squared norm:
//   real:    4<v,w> = |v+w|^2 - |v-w|^2
//   complex: 4<v,w> = sum_{k=0..3} i^k |v + i^k w|^2
template <Field S>
S polarize(const std::function<double(const Vector<S>&)>& norm_sq,
           const Vector<S>& v, const Vector<S>& w) {
  detail::require_same_dim(v, w, "polarize");
  if constexpr (is_complex_v<S>) {
    const complex units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    complex acc{};
    for (const auto& u : units) acc += u * norm_sq(add(v, scale(u, w)));
    return acc / 4.0;
  } else {
    return (norm_sq(add(v, w)) - norm_sq(subtract(v, w))) / 4.0;
  }
}

// Samples of a real function on a strictly increasing grid.
class ConvexSampledFunction {
 public:
  ConvexSampledFunction(std::vector<double> grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size()) {
      throw DimensionMismatch("grid and values differ in length");
    }
    if (grid_.size() < 2) throw PreconditionViolation("need at least two samples");
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) {
        throw PreconditionViolation("grid must be strictly increasing");
      }
    }
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return grid_.size(); }

  double slope(std::size_t i, std::size_t j) const {
    return (values_[j] - values_[i]) / (grid_[j] - grid_[i]);
  }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

// True iff every triple s < t < u of grid points has increasing difference
// quotients (slack 1e-12).
inline bool difference_quotient_check(const ConvexSampledFunction& f) {
  constexpr double slack = 1e-12;
  const std::size_t n = f.size();
  if (n < 3) throw PreconditionViolation("difference_quotient_check needs >= 3 samples");
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      for (std::size_t u = t + 1; u < n; ++u) {
        const double st = f.slope(s, t);
        const double su = f.slope(s, u);
        const double tu = f.slope(t, u);
        if (st > su + slack || su > tu + slack) return false;
      }
    }
  }
  return true;
}

struct SupportLine {
  double slope = 0.0;
  double intercept = 0.0;
  double anchor_x = 0.0;
  double anchor_y = 0.0;

  // Evaluated about the anchor so that the touching point is reproduced
  // exactly.
  double operator()(double x) const { return slope * (x - anchor_x) + anchor_y; }
};

// Affine minorant touching f at grid[t_index]. The slope is the midpoint of
// [D_l, D_r] (max left slope, min right slope); at an endpoint only the
// available side is used.
inline SupportLine support_line(const ConvexSampledFunction& f, std::size_t t_index) {
  if (t_index >= f.size()) throw PreconditionViolation("support_line: index out of range");
  if (f.size() >= 3 && !difference_quotient_check(f)) {
    throw NotConvex("support_line: samples are not convex");
  }
  const bool has_left = t_index > 0;
  const bool has_right = t_index + 1 < f.size();
  double left = -std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_index; ++i) left = std::max(left, f.slope(i, t_index));
  for (std::size_t i = t_index + 1; i < f.size(); ++i) {
    right = std::min(right, f.slope(t_index, i));
  }
  double slope = 0.0;
  if (has_left && has_right) {
    slope = 0.5 * (left + right);
  } else if (has_left) {
    slope = left;
  } else {
    slope = right;
  }
  const double t = f.grid()[t_index];
  const double y = f.values()[t_index];
  return {slope, y - slope * t, t, y};
}

// Round-trippable decimal text (%.17g); complex values as re+imi.
inline std::string format_scalar(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_scalar(const complex& z) {
  std::string im = format_scalar(z.imag());
  if (im.front() != '-' && im.front() != '+') im = "+" + im;
  return format_scalar(z.real()) + im + "i";
}

template <Field S>
S parse_scalar(const std::string& text) {
  const auto bad = [&] { return ParseError("bad scalar '" + text + "'"); };
  if (text.empty()) throw bad();
  if constexpr (is_complex_v<S>) {
    if (text.back() != 'i') {
      return {parse_scalar<double>(text), 0.0};
    }
    // Split at the last sign that is not part of an exponent.
    for (std::size_t k = text.size() - 1; k-- > 1;) {
      if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
        return {parse_scalar<double>(text.substr(0, k)),
                parse_scalar<double>(text.substr(k, text.size() - k - 1))};
      }
    }
    throw bad();
  } else {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != text.size()) throw bad();
    return x;
  }
}

}  // namespace normlab
