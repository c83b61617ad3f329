#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "normlab/dyadic.hpp"

using namespace normlab;

namespace {

std::vector<double> vals(const RealStep& f) { return f.values(); }

// Brute-force average-mode stopping families: every dyadic interval's
// average is summed cell by cell, maximality is checked pairwise.
struct Families {
  std::set<DyadicInterval> f0, f10;
  std::vector<double> replaced;
};

Families stopping_oracle(const RealStep& f, double lam) {
  const int l = f.level();
  std::vector<DyadicInterval> fam;
  for (int k = 0; k <= l; ++k) {
    for (std::uint64_t j = 0; j < (1u << k); ++j) {
      const DyadicInterval i(k, j);
      double s = 0.0;
      for (auto c = i.first_cell(l); c < i.last_cell(l); ++c) s += f[c];
      if (std::abs(s / static_cast<double>(i.last_cell(l) - i.first_cell(l))) > lam) fam.push_back(i);
    }
  }
  const auto maximal = [](const std::vector<DyadicInterval>& v) {
    std::set<DyadicInterval> out;
    for (const auto& a : v) {
      bool top = true;
      for (const auto& b : v) top = top && !(b != a && b.contains(a));
      if (top) out.insert(a);
    }
    return out;
  };
  Families out;
  out.f0 = maximal(fam);
  out.replaced = f.values();
  if (out.f0.count({0, 0})) return out;
  std::vector<DyadicInterval> parents;
  for (const auto& j : out.f0) parents.push_back(j.parent());
  out.f10 = maximal(parents);
  for (const auto& p : out.f10) {
    double s = 0.0;
    for (auto c = p.first_cell(l); c < p.last_cell(l); ++c) s += f[c];
    s /= static_cast<double>(p.last_cell(l) - p.first_cell(l));
    for (auto c = p.first_cell(l); c < p.last_cell(l); ++c) out.replaced[c] = s;
  }
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST(DyadicInterval, NestedOrDisjointExhaustive) {
  std::vector<DyadicInterval> all;
  for (int k = 0; k <= 6; ++k) {
    for (std::uint64_t j = 0; j < (1u << k); ++j) all.emplace_back(k, j);
  }
  for (const auto& a : all) {
    EXPECT_DOUBLE_EQ(a.length(), std::ldexp(1.0, -a.level));
    for (const auto& b : all) {
      // endpoints as integers over 2^6
      const auto a0 = a.first_cell(6), a1 = a.last_cell(6);
      const auto b0 = b.first_cell(6), b1 = b.last_cell(6);
      const bool nested = (a0 <= b0 && b1 <= a1) || (b0 <= a0 && a1 <= b1);
      const bool disjoint = a1 <= b0 || b1 <= a0;
      EXPECT_TRUE(nested || disjoint);
      EXPECT_TRUE(nested_or_disjoint(a, b));
      EXPECT_EQ(a.contains(b), a0 <= b0 && b1 <= a1);
    }
  }
  EXPECT_THROW(DyadicInterval(2, 4), PreconditionViolation);
}

TEST(StepFunction, LengthValidated) {
  EXPECT_THROW(RealStep(2, {1, 2, 3}), DimensionMismatch);
  EXPECT_THROW(RealStep(-1, {}), PreconditionViolation);
  const RealStep f(1, {1, 3});
  EXPECT_DOUBLE_EQ(integral(f), 2.0);
  EXPECT_EQ(vals(f.refine(2)), (std::vector<double>{1, 1, 3, 3}));
  EXPECT_EQ(vals(f + RealStep(2, {1, 2, 3, 4})), (std::vector<double>{2, 3, 6, 7}));
}

TEST(Expectation, Examples) {
  const auto half = RealStep::indicator({1, 0}, 1);
  const auto e0 = expectation(half, 0);
  EXPECT_EQ(e0.level(), 0);
  EXPECT_DOUBLE_EQ(e0[0], 0.5);
  EXPECT_EQ(vals(expectation(half, 3)), vals(half));
  const auto h = haar_function({2, 1}, 4);
  for (int k = 0; k <= 2; ++k) {
    for (double x : expectation(h, k).values()) EXPECT_EQ(x, 0.0);
  }
  EXPECT_THROW(expectation(half, -1), PreconditionViolation);
}

TEST(Expectation, TowerAndSelfAdjoint) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const int l = rng.between(1, 8);
    const auto f = random_step<complex>(rng, l);
    const auto g = random_step<complex>(rng, l);
    for (int k = 0; k <= l; ++k) {
      for (int j = k; j <= l; ++j) {
        const auto a = expectation(expectation(f, j), k).refine(l);
        const auto b = expectation(f, k).refine(l);
        for (std::size_t c = 0; c < a.size(); ++c) EXPECT_LT(std::abs(a[c] - b[c]), 1e-14);
      }
      const auto efg = integral(expectation(f, k) * g);
      const auto feg = integral(f * expectation(g, k));
      const auto ee = integral(expectation(f, k) * expectation(g, k));
      EXPECT_LT(std::abs(efg - feg), 1e-14);
      EXPECT_LT(std::abs(efg - ee), 1e-14);
    }
  }
}

TEST(Expectation, MartingaleDifferencesOrthogonal) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const int l = rng.between(2, 8);
    const auto f = random_step<complex>(rng, l);
    const auto g = random_step<complex>(rng, l);
    for (int j = 1; j <= l; ++j) {
      const auto df = expectation(f, j) - expectation(f, j - 1);
      for (int k = 1; k <= l; ++k) {
        if (k == j) continue;
        const auto dg = expectation(g, k) - expectation(g, k - 1);
        EXPECT_LT(std::abs(integral(df * dg)), 1e-13);
      }
    }
  }
}

TEST(Expectation, AveragingContraction) {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const int l = rng.between(1, 8);
    const auto beta = abs(random_step<double>(rng, l));
    const double p = rng.uniform(1.0, 5.0);
    const int j = rng.between(0, l);
    EXPECT_LE(integral(abs_pow(expectation(beta, j), p)), integral(abs_pow(beta, p)) * (1 + 1e-12));
  }
}

TEST(MaximalFn, Examples) {
  EXPECT_EQ(vals(maximal_fn(RealStep::indicator({1, 0}, 1))), (std::vector<double>{1, 0.5}));
  for (double x : maximal_fn(RealStep::constant(-2.5, 3)).values()) EXPECT_EQ(x, 2.5);
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_step<complex>(rng, rng.between(0, 8));
    const double a = max_modulus(f.values());
    for (double x : maximal_fn(f).values()) EXPECT_LE(x, a * (1 + 1e-15));
  }
}

TEST(MaximalFn, Sublinear) {
  Rng rng(15);
  for (int t = 0; t < 200; ++t) {
    const int l = rng.between(0, 8);
    const auto f = random_step<complex>(rng, l), g = random_step<complex>(rng, l);
    const auto lhs = maximal_fn(f + g), a = maximal_fn(f), b = maximal_fn(g);
    for (std::size_t c = 0; c < lhs.size(); ++c) EXPECT_LE(lhs[c], a[c] + b[c] + 1e-14);
  }
}

TEST(MaximalFn, WeakTypeOnEveryBreakpoint) {
  Rng rng(16);
  for (int t = 0; t < 300; ++t) {
    const auto f = random_step<double>(rng, rng.between(1, 9), t % 2 == 1);
    const auto m = maximal_fn(f);
    const double l1 = integral(abs(f));
    for (double lam : m.values()) {
      if (lam <= 0) continue;
      // left limit: the supremum over lambda' < lam of lambda' |{M > lambda'}|
      EXPECT_LE(lam * distribution_measure_closed(m, lam), l1 * (1 + 1e-12) + 1e-15);
      EXPECT_LE(lam * distribution_measure(m, lam), l1 * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(MaximalFn, ModifiedWeakType) {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const auto f = random_step<double>(rng, rng.between(1, 9), t % 2 == 1);
    const auto m = maximal_fn(f);
    const auto af = abs(f);
    std::set<double> grid;
    for (double x : m.values()) grid.insert(x / 2);
    for (double x : af.values()) grid.insert(x);
    for (double lam : grid) {
      if (lam <= 0) continue;
      double tail = 0.0;
      for (double x : af.values()) tail += x > lam ? x : 0.0;
      tail = std::ldexp(tail, -f.level());
      EXPECT_LE(distribution_measure(m, 2 * lam), tail / lam * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(MaximalFn, LpBound) {
  Rng rng(18);
  for (int t = 0; t < 300; ++t) {
    const auto f = random_step<complex>(rng, rng.between(1, 9), t % 3 == 0);
    for (double p : {1.1, 1.5, 2.0, 3.0, 4.0}) {
      const double c = std::pow(2.0, p) * p / (p - 1);
      EXPECT_LE(integral(abs_pow(maximal_fn(f), p)), c * integral(abs_pow(f, p)) * (1 + 1e-12));
    }
  }
}

TEST(MaximalFn, Linearization) {
  Rng rng(19);
  for (int t = 0; t < 100; ++t) {
    const int l = rng.between(0, 8);
    const auto f = random_step<complex>(rng, l);
    const auto sel = maximal_selector(f);
    const auto af = linearized_maximal(f, sel, l);
    const auto mf = maximal_fn(f);
    for (std::size_t c = 0; c < af.size(); ++c) EXPECT_NEAR(modulus(af[c]), mf[c], 1e-14);
    const auto h = random_step<complex>(rng, l);
    const auto ah = linearized_maximal(h, sel, l);
    const auto mh = maximal_fn(h);
    for (std::size_t c = 0; c < ah.size(); ++c) EXPECT_LE(modulus(ah[c]), mh[c] + 1e-14);
  }
}

TEST(SquareFn, Examples) {
  const auto s = square_fn(RealStep::indicator({1, 0}, 1));
  for (double x : s.values()) EXPECT_NEAR(x, std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(integral(abs_pow(s, 2)), 0.5, 1e-15);
  for (double x : square_fn(RealStep::constant(-3.0, 4)).values()) EXPECT_DOUBLE_EQ(x, 3.0);
  const std::vector<double> a{0.3, -1.2, 2.0, 0.5};
  RealStep f = RealStep::constant(0.0, 4);
  for (int j = 1; j <= 4; ++j) f = f + a[j - 1] * rademacher(j, 4);
  const double sigma = std::sqrt(0.09 + 1.44 + 4.0 + 0.25);
  for (double x : square_fn(f).values()) EXPECT_NEAR(x, sigma, 1e-14);
}

TEST(SquareFn, L2Identity) {
  Rng rng(20);
  for (int t = 0; t < 2000; ++t) {
    const auto f = random_step<complex>(rng, rng.between(1, 10));
    EXPECT_LT(rel(integral(abs_pow(square_fn(f), 2)), integral(abs_pow(f, 2))), 1e-12);
  }
}

TEST(SquareFn, WeakTypeConstantThree) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const auto f = random_step<double>(rng, rng.between(1, 9), t % 2 == 1);
    const auto s = square_fn(f);
    const double l1 = integral(abs(f));
    for (double lam : s.values()) {
      if (lam > 0) {
        EXPECT_LE(lam * distribution_measure_closed(s, lam), 3 * l1 * (1 + 1e-12));
      }
    }
  }
}

TEST(SquareFn, SuperlevelSetIsExactCover) {
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const int l = rng.between(1, 8);
    const auto s = square_fn(random_step<double>(rng, l));
    const double lam = rng.uniform(0.0, 1.0);
    std::vector<bool> mask(s.size());
    for (std::size_t c = 0; c < s.size(); ++c) mask[c] = s[c] > lam;
    std::vector<bool> covered(s.size(), false);
    const auto cover = maximal_cover(mask, l);
    for (const auto& i : cover) {
      for (auto c = i.first_cell(l); c < i.last_cell(l); ++c) {
        EXPECT_FALSE(covered[c]);
        covered[c] = true;
      }
    }
    EXPECT_EQ(covered, mask);
  }
}

TEST(Haar, Examples) {
  const DyadicInterval i(1, 1);
  const auto h = haar_function(i, 3);
  // hand values: I = [1/2, 1), |I|^(-1/2) = sqrt 2
  EXPECT_EQ(vals(h), (std::vector<double>{0, 0, 0, 0, -std::sqrt(2.0), -std::sqrt(2.0),
                                          std::sqrt(2.0), std::sqrt(2.0)}));
  const auto hc = haar_transform(h);
  EXPECT_NEAR(hc.c0, 0.0, 1e-15);
  for (std::size_t k = 0; k < hc.coeffs.size(); ++k) {
    EXPECT_NEAR(hc.coeffs[k], k == HaarCoefficients<double>::slot(i) ? 1.0 : 0.0, 1e-15);
  }
  const auto one = haar_transform(RealStep::constant(1.0, 4));
  EXPECT_DOUBLE_EQ(one.c0, 1.0);
  for (double c : one.coeffs) EXPECT_EQ(c, 0.0);
}

TEST(Haar, CoefficientsAreInnerProducts) {
  Rng rng(23);
  const auto f = random_step<complex>(rng, 5);
  const auto hc = haar_transform(f);
  for (int k = 0; k < 5; ++k) {
    for (std::uint64_t j = 0; j < (1u << k); ++j) {
      const DyadicInterval i(k, j);
      const auto h = haar_function(i, 5);
      complex ip{};
      for (std::size_t c = 0; c < f.size(); ++c) ip += f[c] * h[c];
      EXPECT_LT(std::abs(ip / 32.0 - hc.at(i)), 1e-15);
    }
  }
}

TEST(Haar, OrthonormalExhaustive) {
  const int l = 5;
  std::vector<RealStep> hs{RealStep::constant(1.0, l)};
  for (int k = 0; k < l; ++k) {
    for (std::uint64_t j = 0; j < (1u << k); ++j) hs.push_back(haar_function({k, j}, l));
  }
  for (std::size_t a = 0; a < hs.size(); ++a) {
    for (std::size_t b = 0; b < hs.size(); ++b) {
      EXPECT_NEAR(integral(hs[a] * hs[b]), a == b ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(Haar, RoundTripAndParseval) {
  Rng rng(24);
  for (int t = 0; t < 500; ++t) {
    const auto f = random_step<complex>(rng, rng.between(0, 10));
    const auto hc = haar_transform(f);
    const auto g = haar_reconstruct(hc);
    double err = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) err = std::max(err, std::abs(f[c] - g[c]));
    EXPECT_LE(err, 1e-13);
    double energy = std::norm(hc.c0);
    for (const auto& c : hc.coeffs) energy += std::norm(c);
    EXPECT_LT(rel(energy, integral(abs_pow(f, 2))), 1e-13);
  }
}

TEST(Distribution, Examples) {
  EXPECT_DOUBLE_EQ(distribution_measure(RealStep::constant(1.0), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(distribution_measure(RealStep::indicator({2, 0}, 2), 0.5), 0.25);
  Rng rng(25);
  const auto g = random_step<double>(rng, 6);
  EXPECT_EQ(distribution_measure(g, max_modulus(g.values())), 0.0);
  EXPECT_THROW(distribution_measure(DyadicStepFunction<complex>::constant({0, 1}), 0.0),
               PreconditionViolation);
}

TEST(LayerCake, Examples) {
  auto r = layer_cake(RealStep::constant(1.0), 2.0);
  EXPECT_DOUBLE_EQ(r.direct, 1.0);
  EXPECT_DOUBLE_EQ(r.layered, 1.0);
  r = layer_cake(RealStep(1, {2, 0}), 1.0);
  EXPECT_DOUBLE_EQ(r.direct, 1.0);
  EXPECT_DOUBLE_EQ(r.layered, 1.0);
  EXPECT_THROW(layer_cake(RealStep(1, {-1, 0}), 1.0), PreconditionViolation);
  EXPECT_THROW(layer_cake(RealStep(1, {1, 0}), 0.0), PreconditionViolation);
}

TEST(LayerCake, RandomAgreement) {
  Rng rng(26);
  for (int t = 0; t < 1000; ++t) {
    const auto g = abs(random_step<complex>(rng, rng.between(0, 10)));
    const double p = t % 2 ? 3.0 : rng.uniform(0.2, 6.0);
    const auto r = layer_cake(g, p);
    EXPECT_LE(std::abs(r.direct - r.layered), 1e-12 * std::max(1.0, r.direct));
  }
}

TEST(Stopping, ZeroAndSmallFunctions) {
  for (auto mode : {StoppingMode::average, StoppingMode::square}) {
    const auto d = stopping_decompose(RealStep::constant(0.0, 3), 1.0, mode);
    EXPECT_TRUE(d.maximal_intervals.empty());
    EXPECT_TRUE(d.halved_parents.empty());
    EXPECT_EQ(vals(d.replaced), std::vector<double>(8, 0.0));
  }
  const RealStep f(2, {0.5, -0.25, 0.75, 0.1});
  const auto d = stopping_decompose(f, 1.0, StoppingMode::average);
  EXPECT_TRUE(d.maximal_intervals.empty());
  EXPECT_EQ(vals(d.replaced), vals(f));
  EXPECT_THROW(stopping_decompose(f, 0.0, StoppingMode::average), PreconditionViolation);
}

TEST(Stopping, SpikeExamplesMatchEnumeration) {
  const auto f = 4.0 * RealStep::indicator({2, 0}, 2);
  // lambda = 1.5: [0,1/2) has average 2 and is selected too.
  auto d = stopping_decompose(f, 1.5, StoppingMode::average);
  auto o = stopping_oracle(f, 1.5);
  EXPECT_EQ(std::set<DyadicInterval>(d.maximal_intervals.begin(), d.maximal_intervals.end()), o.f0);
  EXPECT_EQ(o.f0, (std::set<DyadicInterval>{{1, 0}}));
  EXPECT_EQ(o.f10, (std::set<DyadicInterval>{{0, 0}}));
  EXPECT_EQ(vals(d.replaced), (std::vector<double>{1, 1, 1, 1}));
  // lambda = 3: only [0,1/4) is selected.
  d = stopping_decompose(f, 3.0, StoppingMode::average);
  o = stopping_oracle(f, 3.0);
  EXPECT_EQ(o.f0, (std::set<DyadicInterval>{{2, 0}}));
  EXPECT_EQ(std::vector<DyadicInterval>(o.f10.begin(), o.f10.end()), d.halved_parents);
  EXPECT_EQ(d.halved_parents, (std::vector<DyadicInterval>{{1, 0}}));
  EXPECT_EQ(vals(d.replaced), (std::vector<double>{2, 2, 0, 0}));
}

TEST(Stopping, DegenerateBranch) {
  const auto d = stopping_decompose(RealStep::constant(3.0, 2), 1.0, StoppingMode::average);
  EXPECT_TRUE(d.degenerate);
  EXPECT_TRUE(d.halved_parents.empty());
  EXPECT_EQ(vals(d.replaced), std::vector<double>(4, 3.0));
  const auto s = stopping_decompose(RealStep::constant(3.0, 2), 1.0, StoppingMode::square);
  EXPECT_TRUE(s.degenerate);
}

TEST(Stopping, AverageModeContracts) {
  Rng rng(27);
  for (int t = 0; t < 400; ++t) {
    const int l = rng.between(1, 7);
    const auto f = random_step<double>(rng, l, t % 2 == 1);
    const double lam = rng.uniform(0.05, 1.5) * std::max(1e-3, max_modulus(f.values()));
    const auto d = stopping_decompose(f, lam, StoppingMode::average);
    const auto o = stopping_oracle(f, lam);
    EXPECT_EQ(std::set<DyadicInterval>(d.maximal_intervals.begin(), d.maximal_intervals.end()), o.f0);
    if (d.degenerate) continue;
    EXPECT_EQ(std::set<DyadicInterval>(d.halved_parents.begin(), d.halved_parents.end()), o.f10);
    for (std::size_t c = 0; c < f.size(); ++c) EXPECT_NEAR(d.replaced[c], o.replaced[c], 1e-14);

    double sj = 0.0, sl = 0.0;
    for (const auto& a : d.maximal_intervals) {
      sj += a.length();
      for (const auto& b : d.maximal_intervals) EXPECT_TRUE(a == b || (!a.contains(b) && !b.contains(a)));
    }
    for (const auto& a : d.halved_parents) {
      sl += a.length();
      for (const auto& b : d.halved_parents) EXPECT_TRUE(a == b || (!a.contains(b) && !b.contains(a)));
    }
    EXPECT_LE(sl, 2 * sj);

    const auto mf = maximal_fn(f);
    for (std::size_t c = 0; c < f.size(); ++c) {
      EXPECT_LE(std::abs(d.replaced[c]), std::min(lam, mf[c]) * (1 + 1e-12));
    }
    // averages agree on every K that is not strictly inside an F_10 interval
    for (int k = 0; k <= l; ++k) {
      for (std::uint64_t j = 0; j < (1u << k); ++j) {
        const DyadicInterval kk(k, j);
        bool inside = false;
        for (const auto& p : d.halved_parents) inside = inside || (p.contains(kk) && p != kk);
        if (!inside) {
          EXPECT_NEAR(average_over(f, kk), average_over(d.replaced, kk), 1e-13);
        }
      }
    }
    // S(f) = S(f_lam) off the union of F_10
    const auto sf = square_fn(f), sr = square_fn(d.replaced);
    for (std::size_t c = 0; c < f.size(); ++c) {
      bool in = false;
      for (const auto& p : d.halved_parents) in = in || p.contains({l, c});
      if (!in) {
        EXPECT_NEAR(sf[c], sr[c], 1e-13);
      }
    }
  }
}

TEST(Stopping, SquareModeContracts) {
  Rng rng(28);
  int nondegenerate = 0;
  for (int t = 0; t < 400; ++t) {
    const int l = rng.between(1, 7);
    const auto f = random_step<double>(rng, l, t % 2 == 1);
    const auto sf = square_fn(f);
    const double lam = rng.uniform(0.05, 1.2) * std::max(1e-3, max_modulus(sf.values()));
    const auto d = stopping_decompose(f, lam, StoppingMode::square);
    if (d.degenerate) continue;
    ++nondegenerate;
    const auto sg = square_fn(d.replaced);
    for (std::size_t c = 0; c < f.size(); ++c) {
      EXPECT_LE(sg[c], std::min(lam, sf[c]) * (1 + 1e-12) + 1e-14);
    }
    double sj = 0.0, sl = 0.0;
    for (const auto& a : d.maximal_intervals) sj += a.length();
    for (const auto& a : d.halved_parents) sl += a.length();
    EXPECT_LE(sl, 2 * sj);
    const auto mf = maximal_fn(f), mg = maximal_fn(d.replaced);
    for (std::size_t c = 0; c < f.size(); ++c) {
      bool in = false;
      for (const auto& p : d.halved_parents) in = in || p.contains({l, c});
      if (!in) {
        EXPECT_NEAR(mf[c], mg[c], 1e-13);
      }
    }
  }
  EXPECT_GT(nondegenerate, 100);
}

TEST(Rademacher, Examples) {
  EXPECT_EQ(vals(rademacher(1, 1)), (std::vector<double>{1, -1}));
  EXPECT_EQ(vals(walsh({1, 2}, 2)), (std::vector<double>{1, -1, -1, 1}));
  EXPECT_EQ(vals(walsh({}, 3)), std::vector<double>(8, 1.0));
  EXPECT_EQ(vals(walsh({3}, 4)), vals(rademacher(3, 4)));
  EXPECT_THROW(rademacher(0, 3), PreconditionViolation);
  EXPECT_THROW(rademacher(4, 3), PreconditionViolation);
  EXPECT_THROW(walsh({5}, 4), PreconditionViolation);
}

TEST(Walsh, OrthonormalExhaustive) {
  for (int l = 0; l <= 5; ++l) {
    std::vector<RealStep> ws;
    for (unsigned m = 0; m < (1u << l); ++m) {
      std::set<int> a;
      for (int j = 1; j <= l; ++j) {
        if (m >> (j - 1) & 1) a.insert(j);
      }
      ws.push_back(walsh(a, l));
    }
    for (std::size_t a = 0; a < ws.size(); ++a) {
      for (std::size_t b = 0; b < ws.size(); ++b) EXPECT_EQ(integral(ws[a] * ws[b]), a == b ? 1.0 : 0.0);
    }
  }
}

TEST(Khintchine, Examples) {
  auto r = khintchine_report({1.0}, {1.0, 1.5, 3.0, 6.0});
  EXPECT_DOUBLE_EQ(r.sigma, 1.0);
  for (const auto& row : r.rows) EXPECT_DOUBLE_EQ(row.norm, 1.0);
  r = khintchine_report({1.0, 1.0}, {4.0});
  EXPECT_NEAR(r.fourth_power, 8.0, 1e-14);
  EXPECT_NEAR(r.rows[0].norm, std::pow(8.0, 0.25), 1e-14);
  EXPECT_DOUBLE_EQ(r.sigma, std::sqrt(2.0));
  r = khintchine_report({1.0, 2.0, 3.0}, {});
  EXPECT_DOUBLE_EQ(r.sup, 6.0);
}

TEST(Khintchine, FourthMomentMatchesSignEnumeration) {
  Rng rng(29);
  for (int n = 1; n <= 12; ++n) {
    std::vector<double> a(static_cast<std::size_t>(n));
    for (auto& x : a) x = rng.uniform(-2.0, 2.0);
    double moment = 0.0;
    for (unsigned signs = 0; signs < (1u << n); ++signs) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += (signs >> j & 1) ? -a[j] : a[j];
      moment += s * s * s * s;
    }
    moment /= static_cast<double>(1u << n);
    const auto r = khintchine_report(a, {});
    EXPECT_LT(rel(r.fourth_power, moment), 1e-12);
    EXPECT_LT(rel(r.fourth_identity, moment), 1e-12);
  }
}

TEST(Khintchine, Sandwich) {
  Rng rng(30);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> a(static_cast<std::size_t>(rng.between(1, 10)));
    for (auto& x : a) x = rng.uniform(-1.0, 1.0);
    const auto r = khintchine_report(a, {1.0, 1.5, 2.0, 3.0, 4.0, 8.0});
    EXPECT_TRUE(r.sandwich_holds());
  }
}

TEST(TailSquare, Examples) {
  auto r = tail_square_report(RealStep::constant(2.0, 4));
  EXPECT_EQ(r.residual, 0.0);
  r = tail_square_report(haar_function({1, 0}, 3));
  EXPECT_LE(r.residual, 1e-15);
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    r = tail_square_report(random_step<complex>(rng, 6));
    EXPECT_LE(r.residual, 1e-12 * std::max(1.0, r.scale));
    EXPECT_GT(r.constant, 0.0);
  }
}

TEST(Serialization, RoundTrip) {
  const RealStep f(2, {0.1, -2.5, 1e-300, 3});
  EXPECT_EQ(serialize(RealStep(1, {1, -0.5})), "1;1,-0.5");
  EXPECT_EQ(vals(parse_step_function<double>(serialize(f))), vals(f));
  const DyadicStepFunction<complex> g(1, {{1.5, -2}, {0.1, 1e-20}});
  EXPECT_EQ(serialize(g).substr(0, 9), "1;1.5-2i,");
  EXPECT_EQ(parse_step_function<complex>(serialize(g)).values(), g.values());
  EXPECT_THROW(parse_step_function<double>("2;1,2"), ParseError);
  EXPECT_THROW(parse_step_function<double>("x;1"), ParseError);
  EXPECT_THROW(parse_step_function<double>("0;abc"), ParseError);
}
