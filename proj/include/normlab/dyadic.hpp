#pragma once

// Dyadic step functions on [0, 1): conditional expectations, maximal and
// square functions, Haar/Rademacher/Walsh systems, distribution functions
// and stopping-time decompositions. All integrals are exact finite sums.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "normlab/core.hpp"
#include "normlab/random.hpp"

namespace normlab {

inline constexpr int kMaxDyadicLevel = 24;

// [index * 2^-level, (index + 1) * 2^-level)
struct DyadicInterval {
  int level = 0;
  std::uint64_t index = 0;

  DyadicInterval() = default;
  DyadicInterval(int level_, std::uint64_t index_) : level(level_), index(index_) {
    if (level < 0 || level > 62) throw PreconditionViolation("dyadic level out of range");
    if (index >= (std::uint64_t{1} << level)) {
      throw PreconditionViolation("dyadic index out of range");
    }
  }

  double length() const { return std::ldexp(1.0, -level); }
  double left() const { return std::ldexp(static_cast<double>(index), -level); }

  bool contains(const DyadicInterval& other) const {
    return other.level >= level && (other.index >> (other.level - level)) == index;
  }

  DyadicInterval parent() const {
    if (level == 0) throw PreconditionViolation("[0,1) has no parent");
    return {level - 1, index >> 1};
  }
  DyadicInterval left_half() const { return {level + 1, 2 * index}; }
  DyadicInterval right_half() const { return {level + 1, 2 * index + 1}; }

  // Cells of level l >= this->level covered by the interval: [first, last).
  std::uint64_t first_cell(int l) const { return index << (l - level); }
  std::uint64_t last_cell(int l) const { return (index + 1) << (l - level); }

  auto operator<=>(const DyadicInterval&) const = default;

  std::string to_string() const {
    return "[" + std::to_string(index) + "/2^" + std::to_string(level) + ", " +
           std::to_string(index + 1) + "/2^" + std::to_string(level) + ")";
  }
};

inline bool nested_or_disjoint(const DyadicInterval& a, const DyadicInterval& b) {
  if (a.contains(b) || b.contains(a)) return true;
  const double a0 = a.left(), a1 = a0 + a.length();
  const double b0 = b.left(), b1 = b0 + b.length();
  return a1 <= b0 || b1 <= a0;
}

template <Field S>
class DyadicStepFunction {
 public:
  DyadicStepFunction() : level_(0), values_(1, S{}) {}

  DyadicStepFunction(int level, std::vector<S> values) : level_(level), values_(std::move(values)) {
    if (level < 0 || level > kMaxDyadicLevel) {
      throw PreconditionViolation("dyadic level must lie in [0, " +
                                  std::to_string(kMaxDyadicLevel) + "]");
    }
    if (values_.size() != (std::size_t{1} << level)) {
      throw DimensionMismatch("level " + std::to_string(level) + " needs " +
                              std::to_string(std::size_t{1} << level) + " values, got " +
                              std::to_string(values_.size()));
    }
  }

  static DyadicStepFunction constant(S c, int level = 0) {
    return DyadicStepFunction(level, std::vector<S>(std::size_t{1} << level, c));
  }

  static DyadicStepFunction indicator(const DyadicInterval& i, int level) {
    if (level < i.level) throw PreconditionViolation("indicator: level below interval level");
    std::vector<S> v(std::size_t{1} << level, S{});
    for (auto c = i.first_cell(level); c < i.last_cell(level); ++c) v[c] = S{1};
    return DyadicStepFunction(level, std::move(v));
  }

  int level() const { return level_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<S>& values() const& { return values_; }
  std::vector<S> values() && { return std::move(values_); }
  const S& operator[](std::size_t c) const { return values_[c]; }
  S& operator[](std::size_t c) { return values_[c]; }

  // Same function written at a finer level.
  DyadicStepFunction refine(int new_level) const {
    if (new_level < level_) throw PreconditionViolation("refine: cannot coarsen");
    if (new_level == level_) return *this;
    const int shift = new_level - level_;
    std::vector<S> v(std::size_t{1} << new_level);
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = values_[c >> shift];
    return DyadicStepFunction(new_level, std::move(v));
  }

  // Value on the level-k cell containing cell c of this function's level.
  S value_at(std::size_t c) const { return values_[c]; }

 private:
  int level_;
  std::vector<S> values_;
};

using RealStep = DyadicStepFunction<double>;

// Values uniform in [-1, 1] (real) or the unit disc (complex). The sparse
// family keeps each cell with probability 1/8 and scales survivors up, which
// is where the weak-type estimates are tight.
template <Field S>
DyadicStepFunction<S> random_step(Rng& rng, int level, bool sparse = false) {
  std::vector<S> v(std::size_t{1} << level);
  for (auto& x : v) {
    x = rng.scalar<S>();
    if (sparse) x = rng.below(8) == 0 ? 8.0 * x : S{};
  }
  return {level, std::move(v)};
}

namespace detail {
template <Field S, class Op>
auto combine(const DyadicStepFunction<S>& f, const DyadicStepFunction<S>& g, Op op) {
  const int l = std::max(f.level(), g.level());
  const auto a = f.refine(l), b = g.refine(l);
  using R = decltype(op(a[0], b[0]));
  std::vector<R> v(a.size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = op(a[c], b[c]);
  return DyadicStepFunction<R>(l, std::move(v));
}
}  // namespace detail

template <Field S>
DyadicStepFunction<S> operator+(const DyadicStepFunction<S>& f, const DyadicStepFunction<S>& g) {
  return detail::combine(f, g, [](S a, S b) { return a + b; });
}
template <Field S>
DyadicStepFunction<S> operator-(const DyadicStepFunction<S>& f, const DyadicStepFunction<S>& g) {
  return detail::combine(f, g, [](S a, S b) { return a - b; });
}
template <Field S>
DyadicStepFunction<S> operator*(const DyadicStepFunction<S>& f, const DyadicStepFunction<S>& g) {
  return detail::combine(f, g, [](S a, S b) { return a * b; });
}
template <Field S>
DyadicStepFunction<S> operator*(S a, const DyadicStepFunction<S>& f) {
  auto v = f.values();
  for (auto& x : v) x *= a;
  return {f.level(), std::move(v)};
}

template <Field S>
RealStep abs(const DyadicStepFunction<S>& f) {
  std::vector<double> v(f.size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = modulus(f[c]);
  return {f.level(), std::move(v)};
}

// |f|^p pointwise.
template <Field S>
RealStep abs_pow(const DyadicStepFunction<S>& f, double p) {
  std::vector<double> v(f.size());
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double a = modulus(f[c]);
    v[c] = a == 0.0 ? 0.0 : std::pow(a, p);
  }
  return {f.level(), std::move(v)};
}

namespace detail {
// Neumaier compensated sum; cell values can span many orders of magnitude.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value();
}

inline complex compensated_total(const std::vector<complex>& v) {
  CompensatedSum re, im;
  for (const auto& x : v) {
    re.add(x.real());
    im.add(x.imag());
  }
  return {re.value(), im.value()};
}
}  // namespace detail

template <Field S>
S integral(const DyadicStepFunction<S>& f) {
  return detail::compensated_total(f.values()) * std::ldexp(1.0, -f.level());
}

// Integral of f over the dyadic interval i (i.level <= f.level refines f).
template <Field S>
S integral_over(const DyadicStepFunction<S>& f, const DyadicInterval& i) {
  const int l = std::max(f.level(), i.level);
  const auto g = f.refine(l);
  S s{};
  for (auto c = i.first_cell(l); c < i.last_cell(l); ++c) s += g[c];
  return s * std::ldexp(1.0, -l);
}

template <Field S>
S average_over(const DyadicStepFunction<S>& f, const DyadicInterval& i) {
  return integral_over(f, i) / i.length();
}

// avg[k][j] is the average of f over the j-th level-k interval, k = 0..level.
template <Field S>
std::vector<std::vector<S>> average_pyramid(const DyadicStepFunction<S>& f) {
  std::vector<std::vector<S>> avg(static_cast<std::size_t>(f.level()) + 1);
  avg.back() = f.values();
  for (int k = f.level() - 1; k >= 0; --k) {
    const auto& fine = avg[static_cast<std::size_t>(k) + 1];
    auto& coarse = avg[static_cast<std::size_t>(k)];
    coarse.resize(fine.size() / 2);
    for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = 0.5 * (fine[2 * j] + fine[2 * j + 1]);
  }
  return avg;
}

// E_k(f): averages over level-k cells. For k >= level(f) this is f itself.
template <Field S>
DyadicStepFunction<S> expectation(const DyadicStepFunction<S>& f, int k) {
  if (k < 0) throw PreconditionViolation("expectation: k must be >= 0");
  if (k >= f.level()) return f;
  auto avg = average_pyramid(f);
  return {k, std::move(avg[static_cast<std::size_t>(k)])};
}

// M(f) = sup_k |E_k f|, computed at level(f).
template <Field S>
RealStep maximal_fn(const DyadicStepFunction<S>& f) {
  const auto avg = average_pyramid(f);
  const int l = f.level();
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    double m = 0.0;
    for (int k = 0; k <= l; ++k) m = std::max(m, modulus(avg[static_cast<std::size_t>(k)][c >> (l - k)]));
    out[c] = m;
  }
  return {l, std::move(out)};
}

// S(f) = (|E_0 f|^2 + sum_{j=1}^{level} |E_j f - E_{j-1} f|^2)^(1/2).
template <Field S>
RealStep square_fn(const DyadicStepFunction<S>& f) {
  const auto avg = average_pyramid(f);
  const int l = f.level();
  std::vector<double> out(f.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    double s = std::norm(avg[0][0]);
    for (int j = 1; j <= l; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      s += std::norm(avg[uj][c >> (l - j)] - avg[uj - 1][c >> (l - j + 1)]);
    }
    out[c] = std::sqrt(s);
  }
  return {l, std::move(out)};
}

// R_j(f) = (sum_{k=j}^{level} |E_k f - E_{k-1} f|^2)^(1/2) for j >= 1; zero
// beyond the level.
template <Field S>
RealStep tail_square_fn(const DyadicStepFunction<S>& f, int j) {
  if (j < 1) throw PreconditionViolation("tail_square_fn: j must be >= 1");
  const auto avg = average_pyramid(f);
  const int l = f.level();
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    double s = 0.0;
    for (int k = j; k <= l; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      s += std::norm(avg[uk][c >> (l - k)] - avg[uk - 1][c >> (l - k + 1)]);
    }
    out[c] = std::sqrt(s);
  }
  return {l, std::move(out)};
}

// Linearization of M at f: alpha(c) is the smallest level k attaining
// M(f) on cell c, and A(h)(c) = E_alpha(c)(h)(c).
template <Field S>
std::vector<int> maximal_selector(const DyadicStepFunction<S>& f) {
  const auto avg = average_pyramid(f);
  const int l = f.level();
  std::vector<int> sel(f.size(), 0);
  for (std::size_t c = 0; c < sel.size(); ++c) {
    double m = -1.0;
    for (int k = 0; k <= l; ++k) {
      const double a = modulus(avg[static_cast<std::size_t>(k)][c >> (l - k)]);
      if (a > m) {
        m = a;
        sel[c] = k;
      }
    }
  }
  return sel;
}

template <Field S>
DyadicStepFunction<S> linearized_maximal(const DyadicStepFunction<S>& h,
                                         const std::vector<int>& selector, int level) {
  if (selector.size() != (std::size_t{1} << level)) throw DimensionMismatch("selector size");
  const auto g = h.refine(std::max(level, h.level()));
  if (g.level() != level) throw DimensionMismatch("h is finer than the selector");
  const auto avg = average_pyramid(g);
  std::vector<S> out(selector.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const int k = selector[c];
    out[c] = avg[static_cast<std::size_t>(k)][c >> (level - k)];
  }
  return {level, std::move(out)};
}

// Haar coefficients: c0 = <f, 1>, and coeffs[(2^k - 1) + j] = <f, h_I> for
// I = [j 2^-k, (j+1) 2^-k), k < level. h_I = -|I|^(-1/2) on the left half of
// I and +|I|^(-1/2) on the right half.
template <Field S>
struct HaarCoefficients {
  int level = 0;
  S c0{};
  std::vector<S> coeffs;

  static std::size_t slot(const DyadicInterval& i) {
    return ((std::size_t{1} << i.level) - 1) + static_cast<std::size_t>(i.index);
  }
  const S& at(const DyadicInterval& i) const { return coeffs.at(slot(i)); }
  S& at(const DyadicInterval& i) { return coeffs.at(slot(i)); }
};

inline RealStep haar_function(const DyadicInterval& i, int level) {
  if (level <= i.level) throw PreconditionViolation("haar_function needs level > interval level");
  std::vector<double> v(std::size_t{1} << level, 0.0);
  const double amp = std::sqrt(std::ldexp(1.0, i.level));
  const auto left = i.left_half(), right = i.right_half();
  for (auto c = left.first_cell(level); c < left.last_cell(level); ++c) v[c] = -amp;
  for (auto c = right.first_cell(level); c < right.last_cell(level); ++c) v[c] = amp;
  return {level, std::move(v)};
}

template <Field S>
HaarCoefficients<S> haar_transform(const DyadicStepFunction<S>& f) {
  const auto avg = average_pyramid(f);
  HaarCoefficients<S> out;
  out.level = f.level();
  out.c0 = avg[0][0];
  out.coeffs.resize(f.size() - 1);
  for (int k = 0; k < f.level(); ++k) {
    const double factor = 0.5 / std::sqrt(std::ldexp(1.0, k));
    const auto& fine = avg[static_cast<std::size_t>(k) + 1];
    for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
      out.coeffs[((std::size_t{1} << k) - 1) + j] = factor * (fine[2 * j + 1] - fine[2 * j]);
    }
  }
  return out;
}

template <Field S>
DyadicStepFunction<S> haar_reconstruct(const HaarCoefficients<S>& hc) {
  std::vector<S> cur{hc.c0};
  for (int k = 0; k < hc.level; ++k) {
    const double amp = std::sqrt(std::ldexp(1.0, k));
    std::vector<S> next(cur.size() * 2);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      const S d = hc.coeffs[((std::size_t{1} << k) - 1) + j] * amp;
      next[2 * j] = cur[j] - d;
      next[2 * j + 1] = cur[j] + d;
    }
    cur = std::move(next);
  }
  return {hc.level, std::move(cur)};
}

namespace detail {
template <Field S>
std::vector<double> real_values(const DyadicStepFunction<S>& g, const char* what) {
  std::vector<double> v(g.size());
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (imag_part(g[c]) != 0.0) throw PreconditionViolation(std::string(what) + ": complex values");
    v[c] = real_part(g[c]);
  }
  return v;
}
}  // namespace detail

// |{g > lam}|.
template <Field S>
double distribution_measure(const DyadicStepFunction<S>& g, double lam) {
  const auto v = detail::real_values(g, "distribution_measure");
  std::size_t count = 0;
  for (double x : v) count += x > lam;
  return std::ldexp(static_cast<double>(count), -g.level());
}

// |{g >= lam}|: the left limit of the distribution function at lam.
template <Field S>
double distribution_measure_closed(const DyadicStepFunction<S>& g, double lam) {
  const auto v = detail::real_values(g, "distribution_measure");
  std::size_t count = 0;
  for (double x : v) count += x >= lam;
  return std::ldexp(static_cast<double>(count), -g.level());
}

struct LayerCake {
  double direct = 0.0;
  double layered = 0.0;
};

// int g^p two ways: directly, and as int_0^inf p lam^(p-1) |{g > lam}| dlam
// evaluated exactly between the sorted distinct values of g.
template <Field S>
LayerCake layer_cake(const DyadicStepFunction<S>& g, double p) {
  if (!(p > 0.0)) throw PreconditionViolation("layer_cake: p must be > 0");
  auto v = detail::real_values(g, "layer_cake");
  for (double x : v) {
    if (x < 0.0) throw PreconditionViolation("layer_cake: g must be nonnegative");
  }
  LayerCake out;
  double s = 0.0;
  for (double x : v) s += x == 0.0 ? 0.0 : std::pow(x, p);
  out.direct = std::ldexp(s, -g.level());

  std::sort(v.begin(), v.end());
  double prev_pow = 0.0;
  double layered = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    const double x = v[i];
    if (x == 0.0) {
      ++i;
      continue;
    }
    const double above = static_cast<double>(v.size() - i);  // count of values >= x
    const double xp = std::pow(x, p);
    layered += (xp - prev_pow) * above;
    prev_pow = xp;
    while (i < v.size() && v[i] == x) ++i;
  }
  out.layered = std::ldexp(layered, -g.level());
  return out;
}

// Maximal dyadic intervals whose cells (at `level`) are all marked.
inline std::vector<DyadicInterval> maximal_cover(const std::vector<bool>& mask, int level) {
  if (mask.size() != (std::size_t{1} << level)) throw DimensionMismatch("maximal_cover mask");
  // full[k][j]: every cell under the j-th level-k interval is marked.
  std::vector<std::vector<bool>> full(static_cast<std::size_t>(level) + 1);
  full.back() = mask;
  for (int k = level - 1; k >= 0; --k) {
    const auto& fine = full[static_cast<std::size_t>(k) + 1];
    auto& coarse = full[static_cast<std::size_t>(k)];
    coarse.resize(fine.size() / 2);
    for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = fine[2 * j] && fine[2 * j + 1];
  }
  std::vector<DyadicInterval> out;
  for (int k = 0; k <= level; ++k) {
    for (std::size_t j = 0; j < full[static_cast<std::size_t>(k)].size(); ++j) {
      if (!full[static_cast<std::size_t>(k)][j]) continue;
      if (k > 0 && full[static_cast<std::size_t>(k) - 1][j >> 1]) continue;
      out.emplace_back(k, j);
    }
  }
  return out;
}

// Maximal elements of a family of dyadic intervals.
inline std::vector<DyadicInterval> maximal_elements(std::vector<DyadicInterval> family) {
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<DyadicInterval> out;
  for (const auto& i : family) {
    bool covered = false;
    for (const auto& j : family) {
      if (j.level < i.level && j.contains(i)) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back(i);
  }
  return out;
}

enum class StoppingMode { average, square };

template <Field S>
struct StoppingDecomposition {
  std::vector<DyadicInterval> selected;         // F (average mode) or the cells of {S > lam}
  std::vector<DyadicInterval> maximal_intervals;  // F_0 / G_0
  std::vector<DyadicInterval> parents;          // F_1 / G_1
  std::vector<DyadicInterval> halved_parents;   // F_10 / G_10
  DyadicStepFunction<S> replaced;               // f_lam / g_lam
  double threshold = 0.0;
  bool degenerate = false;                      // [0,1) itself was selected
};

// Calderon-Zygmund style decomposition. Average mode selects the dyadic
// intervals whose average exceeds lam in modulus; square mode selects
// {S(f) > lam}. f is replaced by its averages on the maximal parents of the
// maximal selected intervals.
template <Field S>
StoppingDecomposition<S> stopping_decompose(const DyadicStepFunction<S>& f, double lam,
                                            StoppingMode mode) {
  if (!(lam > 0.0)) throw PreconditionViolation("stopping_decompose: lambda must be > 0");
  StoppingDecomposition<S> out;
  out.threshold = lam;
  out.replaced = f;
  const int l = f.level();

  if (mode == StoppingMode::average) {
    const auto avg = average_pyramid(f);
    for (int k = 0; k <= l; ++k) {
      const auto& row = avg[static_cast<std::size_t>(k)];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (modulus(row[j]) > lam) out.selected.emplace_back(k, j);
      }
    }
    out.maximal_intervals = maximal_elements(out.selected);
  } else {
    const auto sf = square_fn(f);
    std::vector<bool> mask(f.size());
    for (std::size_t c = 0; c < mask.size(); ++c) {
      mask[c] = sf[c] > lam;
      if (mask[c]) out.selected.emplace_back(l, c);
    }
    out.maximal_intervals = maximal_cover(mask, l);
  }

  for (const auto& j : out.maximal_intervals) {
    if (j.level == 0) out.degenerate = true;
  }
  if (out.degenerate) return out;

  for (const auto& j : out.maximal_intervals) out.parents.push_back(j.parent());
  out.halved_parents = maximal_elements(out.parents);
  auto values = f.values();
  for (const auto& p : out.halved_parents) {
    const S a = average_over(f, p);
    for (auto c = p.first_cell(l); c < p.last_cell(l); ++c) values[c] = a;
  }
  out.replaced = DyadicStepFunction<S>(l, std::move(values));
  return out;
}

// r_j: constant on level-j cells, alternating +1, -1 starting with +1.
inline RealStep rademacher(int j, int level) {
  if (j < 1 || j > level) throw PreconditionViolation("rademacher: need 1 <= j <= level");
  std::vector<double> v(std::size_t{1} << level);
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = ((c >> (level - j)) & 1) ? -1.0 : 1.0;
  return {level, std::move(v)};
}

// w_A = prod_{j in A} r_j; w_{} = 1.
inline RealStep walsh(const std::set<int>& a, int level) {
  if (level < 0 || level > kMaxDyadicLevel) throw PreconditionViolation("walsh: bad level");
  std::vector<double> v(std::size_t{1} << level, 1.0);
  for (int j : a) {
    if (j < 1 || j > level) throw PreconditionViolation("walsh: index out of range");
    for (std::size_t c = 0; c < v.size(); ++c) {
      if ((c >> (level - j)) & 1) v[c] = -v[c];
    }
  }
  return {level, std::move(v)};
}

struct KhintchineRow {
  double p = 0.0;
  double norm = 0.0;  // ||f||_p
};

struct KhintchineReport {
  double sigma = 0.0;             // (sum a_j^2)^(1/2)
  double sup = 0.0;               // max |f|
  double fourth_power = 0.0;      // ||f||_4^4 by integration
  double fourth_identity = 0.0;   // 3 sigma^4 - 2 sum a_j^4
  std::vector<KhintchineRow> rows;

  // ||f||_p <= sigma <= ||f||_q for p <= 2 <= q, with relative slack.
  bool sandwich_holds(double slack = 1e-12) const {
    for (const auto& r : rows) {
      if (r.p <= 2.0 && r.norm > sigma * (1 + slack)) return false;
      if (r.p >= 2.0 && r.norm < sigma * (1 - slack)) return false;
    }
    return true;
  }
};

// Statistics of f = sum_j a_j r_j (j = 1..n), integrated exactly at level n.
inline KhintchineReport khintchine_report(const std::vector<double>& a,
                                          const std::vector<double>& p_grid) {
  const int n = static_cast<int>(a.size());
  if (n < 1 || n > kMaxDyadicLevel) throw PreconditionViolation("khintchine_report: bad length");
  std::vector<double> f(std::size_t{1} << n, 0.0);
  for (int j = 1; j <= n; ++j) {
    const auto r = rademacher(j, n);
    for (std::size_t c = 0; c < f.size(); ++c) f[c] += a[static_cast<std::size_t>(j) - 1] * r[c];
  }
  const RealStep fs(n, f);
  KhintchineReport rep;
  double s2 = 0.0, s4 = 0.0;
  for (double x : a) {
    s2 += x * x;
    s4 += x * x * x * x;
  }
  rep.sigma = std::sqrt(s2);
  rep.fourth_identity = 3.0 * s2 * s2 - 2.0 * s4;
  rep.sup = 0.0;
  for (double x : f) rep.sup = std::max(rep.sup, std::abs(x));
  rep.fourth_power = integral(abs_pow(fs, 4.0));
  for (double p : p_grid) {
    if (!(p > 0.0)) throw PreconditionViolation("khintchine_report: p must be > 0");
    rep.rows.push_back({p, std::pow(integral(abs_pow(fs, p)), 1.0 / p)});
  }
  return rep;
}

struct TailSquareReport {
  double residual = 0.0;      // max over cells I of |int_I(|E_j f|^2 + R_{j+1}^2) - int_I |f|^2|
  double scale = 0.0;         // int |f|^2
  double s4 = 0.0;            // int S(f)^4
  double s2_m = 0.0;          // int S(f)^2 M(|f|^2)
  double constant = 0.0;      // s4 / s2_m (0 when f = 0)
};

template <Field S>
TailSquareReport tail_square_report(const DyadicStepFunction<S>& f) {
  const int l = f.level();
  const auto avg = average_pyramid(f);
  const auto f2 = abs_pow(f, 2.0);
  TailSquareReport rep;
  rep.scale = integral(f2);
  for (int j = 0; j <= l; ++j) {
    const auto rj = j + 1 <= l ? tail_square_fn(f, j + 1) : RealStep::constant(0.0, l);
    const auto& ej = avg[static_cast<std::size_t>(j)];
    for (std::size_t idx = 0; idx < ej.size(); ++idx) {
      const DyadicInterval cell(j, idx);
      double lhs = 0.0, rhs = 0.0;
      for (auto c = cell.first_cell(l); c < cell.last_cell(l); ++c) {
        lhs += std::norm(ej[idx]) + rj[c] * rj[c];
        rhs += f2[c];
      }
      rep.residual = std::max(rep.residual, std::abs(lhs - rhs) * std::ldexp(1.0, -l));
    }
  }
  const auto sf = square_fn(f);
  const auto m = maximal_fn(f2);
  for (std::size_t c = 0; c < sf.size(); ++c) {
    const double s2 = sf[c] * sf[c];
    rep.s4 += s2 * s2;
    rep.s2_m += s2 * m[c];
  }
  rep.s4 = std::ldexp(rep.s4, -l);
  rep.s2_m = std::ldexp(rep.s2_m, -l);
  rep.constant = rep.s2_m > 0.0 ? rep.s4 / rep.s2_m : 0.0;
  return rep;
}

// Text form "level;v0,v1,...".
template <Field S>
std::string serialize(const DyadicStepFunction<S>& f) {
  std::string out = std::to_string(f.level()) + ";";
  for (std::size_t c = 0; c < f.size(); ++c) {
    if (c) out += ",";
    out += format_scalar(f[c]);
  }
  return out;
}

template <Field S>
DyadicStepFunction<S> parse_step_function(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw ParseError("step function needs 'level;values'");
  int level = 0;
  try {
    std::size_t used = 0;
    level = std::stoi(text.substr(0, semi), &used);
    if (used != semi) throw ParseError("bad level");
  } catch (const std::logic_error&) {
    throw ParseError("bad level in '" + text.substr(0, semi) + "'");
  }
  std::vector<S> values;
  std::size_t pos = semi + 1;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string::npos ? text.size() : comma;
    values.push_back(parse_scalar<S>(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  try {
    return DyadicStepFunction<S>(level, std::move(values));
  } catch (const Error& e) {
    throw ParseError(std::string("step function: ") + e.what());
  }
}

}  // namespace normlab
