#pragma once

// Finitely supported functions on an arbitrary index set. Keys are opaque
// byte strings; their order is used only to make summation deterministic.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "normlab/core.hpp"
#include "normlab/duality.hpp"

namespace normlab {

using Key = std::string;

template <Field S>
class SparseFn {
 public:
  SparseFn() = default;
  SparseFn(std::initializer_list<std::pair<const Key, S>> entries) {
    for (const auto& [k, v] : entries) {
      if (entries_.count(k)) throw PreconditionViolation("SparseFn: duplicate key '" + k + "'");
      set(k, v);
    }
  }

  static SparseFn delta(const Key& z) {
    SparseFn f;
    f.set(z, S{1});
    return f;
  }

  // Zero values are removed, so the stored keys are exactly the support.
  void set(const Key& k, S v) {
    if (v == S{}) {
      entries_.erase(k);
    } else {
      entries_[k] = v;
    }
  }

  S operator()(const Key& k) const {
    const auto it = entries_.find(k);
    return it == entries_.end() ? S{} : it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<Key, S>& entries() const& { return entries_; }
  std::map<Key, S> entries() && { return std::move(entries_); }

  std::vector<Key> support() const {
    std::vector<Key> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  Vector<S> values() const {
    Vector<S> out;
    for (const auto& [k, v] : entries_) out.push_back(v);
    return out;
  }

  friend bool operator==(const SparseFn&, const SparseFn&) = default;

 private:
  std::map<Key, S> entries_;
};

template <Field S>
SparseFn<S> operator+(const SparseFn<S>& f, const SparseFn<S>& g) {
  SparseFn<S> out = f;
  for (const auto& [k, v] : g.entries()) out.set(k, f(k) + v);
  return out;
}

template <Field S>
SparseFn<S> operator*(S a, const SparseFn<S>& f) {
  SparseFn<S> out;
  for (const auto& [k, v] : f.entries()) out.set(k, a * v);
  return out;
}

// Pointwise product on matched keys.
template <Field S>
SparseFn<S> pointwise(const SparseFn<S>& f, const SparseFn<S>& g) {
  SparseFn<S> out;
  for (const auto& [k, v] : f.entries()) out.set(k, v * g(k));
  return out;
}

// Accumulated in key order, so the result does not depend on insertion order.
template <Field S>
S unordered_sum(const SparseFn<S>& f) {
  S s{};
  for (const auto& [k, v] : f.entries()) s += v;
  return s;
}

template <Field S>
double lp_norm_seq(const SparseFn<S>& f, const Exponent& p) {
  return p_norm(f.values(), p);
}

// (sum |f|^p)^(1/p) for any p > 0; a quasi-norm below 1.
template <Field S>
double quasi_norm_seq(const SparseFn<S>& f, double p) {
  const double s = power_sum(f.values(), p);
  return s == 0.0 ? 0.0 : std::pow(s, 1.0 / p);
}

// lambda_g(f) = sum_x f(x) g(x).
template <Field S>
S pairing_seq(const SparseFn<S>& f, const SparseFn<S>& g) {
  return unordered_sum(pointwise(f, g));
}

// The core extremizer applied to the values of g, kept on g's keys.
template <Field S>
SparseFn<S> dual_extremizer_seq(const SparseFn<S>& g, const Exponent& p) {
  const auto v = dual_extremizer(g.values(), p);
  SparseFn<S> out;
  std::size_t i = 0;
  for (const auto& [k, x] : g.entries()) out.set(k, v[i++]);
  return out;
}

struct Truncation {
  std::vector<Key> kept;  // largest moduli first
  double tail = 0.0;      // sum of |f| off kept
};

// Greedy finite set A with sum_{x not in A} |f(x)| <= eps: keys are taken in
// order of decreasing modulus (ties by key) until the remainder fits.
template <Field S>
Truncation truncate(const SparseFn<S>& f, double eps) {
  if (!(eps >= 0.0)) throw PreconditionViolation("truncate: eps must be >= 0");
  std::vector<std::pair<double, Key>> items;
  for (const auto& [k, v] : f.entries()) items.emplace_back(modulus(v), k);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  // suffix sums, smallest entries last
  std::vector<double> rest(items.size() + 1, 0.0);
  for (std::size_t i = items.size(); i-- > 0;) rest[i] = rest[i + 1] + items[i].first;
  Truncation out;
  std::size_t n = 0;
  while (rest[n] > eps) ++n;
  for (std::size_t i = 0; i < n; ++i) out.kept.push_back(items[i].second);
  out.tail = rest[n];
  return out;
}

// Product keys (x, y) are stored as x + '\x1f' + y.
inline constexpr char kProductSeparator = '\x1f';

inline Key product_key(const Key& x, const Key& y) {
  if (x.find(kProductSeparator) != Key::npos || y.find(kProductSeparator) != Key::npos) {
    throw PreconditionViolation("product_key: component contains the separator");
  }
  return x + kProductSeparator + y;
}

inline std::pair<Key, Key> split_product_key(const Key& k) {
  const auto pos = k.find(kProductSeparator);
  if (pos == Key::npos || k.find(kProductSeparator, pos + 1) != Key::npos) {
    throw PreconditionViolation("malformed product key");
  }
  return {k.substr(0, pos), k.substr(pos + 1)};
}

template <Field S>
struct FubiniReport {
  S double_sum{};
  S iterated_xy{};  // sum_x sum_y
  S iterated_yx{};  // sum_y sum_x

  double discrepancy() const {
    return std::max(modulus(double_sum - iterated_xy), modulus(double_sum - iterated_yx));
  }
};

template <Field S>
FubiniReport<S> fubini_check(const SparseFn<S>& f) {
  std::map<Key, std::map<Key, S>> by_x, by_y;
  for (const auto& [k, v] : f.entries()) {
    const auto [x, y] = split_product_key(k);
    by_x[x][y] = v;
    by_y[y][x] = v;
  }
  const auto iterated = [](const std::map<Key, std::map<Key, S>>& rows) {
    S outer{};
    for (const auto& [a, row] : rows) {
      S inner{};
      for (const auto& [b, v] : row) inner += v;
      outer += inner;
    }
    return outer;
  };
  return {unordered_sum(f), iterated(by_x), iterated(by_y)};
}

enum class ConvergenceMode { monotone, fatou, dominated };

struct ConvergenceReport {
  bool preconditions_met = true;
  bool passed = false;
  std::vector<std::string> violations;
  std::vector<double> sums;         // sum f_j (real part for the real modes)
  std::vector<double> tail_bounds;  // sup_{k >= j} |sum f_k - sum limit|
  double lhs = 0.0;                 // fatou: sum of the pointwise minimum
  double rhs = 0.0;                 // fatou: minimum of the sums
  bool strict = false;              // fatou: lhs < rhs
};

// Finite-family shadows of the monotone convergence theorem, Fatou's lemma
// and dominated convergence. Every f_j and the limit must live on a common
// key universe: the union of the supports of the limit and the dominator
// (or of the family when neither constrains it).
template <Field S>
ConvergenceReport convergence_check(ConvergenceMode mode, const std::vector<SparseFn<S>>& family,
                                    const SparseFn<S>& limit,
                                    const std::optional<SparseFn<S>>& dominator = std::nullopt,
                                    double tol = 1e-12) {
  if (family.empty()) throw PreconditionViolation("convergence_check: empty family");
  ConvergenceReport rep;
  const auto fail = [&](std::string why) {
    rep.preconditions_met = false;
    rep.violations.push_back(std::move(why));
  };

  std::vector<Key> universe = limit.support();
  for (const auto& f : family) {
    for (const auto& k : f.support()) universe.push_back(k);
  }
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  double scale = lp_norm_seq(limit, Exponent(1.0));
  for (const auto& f : family) scale = std::max(scale, lp_norm_seq(f, Exponent(1.0)));
  const double slack = tol * std::max(1.0, scale);

  const auto real_nonnegative = [&](const SparseFn<S>& f, const std::string& name) {
    for (const auto& [k, v] : f.entries()) {
      if (imag_part(v) != 0.0 || real_part(v) < 0.0) {
        fail(name + " is not nonnegative real at key '" + k + "'");
        return;
      }
    }
  };

  const S target = unordered_sum(limit);
  for (const auto& f : family) rep.sums.push_back(real_part(unordered_sum(f)));
  std::vector<double> errors;
  for (const auto& f : family) errors.push_back(modulus(unordered_sum(f) - target));
  rep.tail_bounds.assign(errors.size(), 0.0);
  double running = 0.0;
  for (std::size_t j = errors.size(); j-- > 0;) {
    running = std::max(running, errors[j]);
    rep.tail_bounds[j] = running;
  }

  switch (mode) {
    case ConvergenceMode::monotone: {
      for (std::size_t j = 0; j < family.size(); ++j) {
        real_nonnegative(family[j], "f_" + std::to_string(j));
      }
      real_nonnegative(limit, "limit");
      if (!rep.preconditions_met) break;
      for (const auto& k : universe) {
        for (std::size_t j = 0; j + 1 < family.size(); ++j) {
          if (real_part(family[j](k)) > real_part(family[j + 1](k)) + slack) {
            fail("not increasing at key '" + k + "' between f_" + std::to_string(j) + " and f_" +
                 std::to_string(j + 1));
            break;
          }
        }
        if (real_part(family.back()(k)) > real_part(limit(k)) + slack) {
          fail("family exceeds the limit at key '" + k + "'");
        }
      }
      rep.passed = rep.preconditions_met && rep.tail_bounds.back() <= slack;
      for (std::size_t j = 0; j + 1 < rep.sums.size(); ++j) {
        if (rep.sums[j] > rep.sums[j + 1] + slack) rep.passed = false;
      }
      break;
    }
    case ConvergenceMode::fatou: {
      for (std::size_t j = 0; j < family.size(); ++j) {
        real_nonnegative(family[j], "f_" + std::to_string(j));
      }
      real_nonnegative(limit, "limit");
      if (!rep.preconditions_met) break;
      double lhs = 0.0;
      for (const auto& k : universe) {
        double m = real_part(family.front()(k));
        for (const auto& f : family) m = std::min(m, real_part(f(k)));
        lhs += m;
      }
      rep.lhs = lhs;
      rep.rhs = *std::min_element(rep.sums.begin(), rep.sums.end());
      rep.strict = rep.lhs < rep.rhs - slack;
      rep.passed = rep.lhs <= rep.rhs + slack && real_part(target) <= rep.rhs + slack;
      break;
    }
    case ConvergenceMode::dominated: {
      if (!dominator) {
        fail("no dominating function supplied");
        break;
      }
      real_nonnegative(*dominator, "dominator");
      for (std::size_t j = 0; j < family.size(); ++j) {
        for (const auto& [k, v] : family[j].entries()) {
          if (modulus(v) > real_part((*dominator)(k)) + slack) {
            fail("|f_" + std::to_string(j) + "| exceeds the dominator at key '" + k + "'");
          }
        }
      }
      for (const auto& [k, v] : limit.entries()) {
        if (modulus(v) > real_part((*dominator)(k)) + slack) {
          fail("|limit| exceeds the dominator at key '" + k + "'");
        }
      }
      rep.passed = rep.preconditions_met && rep.tail_bounds.back() <= slack;
      break;
    }
  }
  if (!rep.preconditions_met) rep.passed = false;
  return rep;
}

namespace detail {
inline std::string escape_key(const Key& k) {
  std::string out;
  for (char c : k) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '=') {
      out += "\\e";
    } else if (c == kProductSeparator) {
      out += "\\s";
    } else if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
      // keeps the text form ASCII
      static const char* hex = "0123456789abcdef";
      const auto u = static_cast<unsigned char>(c);
      out += "\\x";
      out += hex[u >> 4];
      out += hex[u & 15];
    } else {
      out += c;
    }
  }
  return out;
}

inline Key unescape_key(const std::string& s) {
  Key out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw ParseError("dangling escape in key");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 'e': out += '='; break;
      case 's': out += kProductSeparator; break;
      case 'x': {
        if (i + 2 >= s.size()) throw ParseError("short \\x escape in key");
        const auto digit = [](char h) -> int {
          if (h >= '0' && h <= '9') return h - '0';
          if (h >= 'a' && h <= 'f') return h - 'a' + 10;
          if (h >= 'A' && h <= 'F') return h - 'A' + 10;
          throw ParseError(std::string("bad hex digit in key escape: ") + h);
        };
        out += static_cast<char>(digit(s[i + 1]) * 16 + digit(s[i + 2]));
        i += 2;
        break;
      }
      default: throw ParseError(std::string("bad escape \\") + s[i]);
    }
  }
  return out;
}
}  // namespace detail

// One "key=value" line per support point, in key order.
template <Field S>
std::string serialize(const SparseFn<S>& f) {
  std::string out;
  for (const auto& [k, v] : f.entries()) out += detail::escape_key(k) + "=" + format_scalar(v) + "\n";
  return out;
}

template <Field S>
SparseFn<S> parse_sparse(const std::string& text) {
  SparseFn<S> f;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("sparse line without '=': " + line);
    const Key k = detail::unescape_key(line.substr(0, eq));
    if (f.entries().count(k)) throw ParseError("duplicate key in sparse function");
    f.set(k, parse_scalar<S>(line.substr(eq + 1)));
  }
  return f;
}

}  // namespace normlab
