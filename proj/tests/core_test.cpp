#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "normlab/core.hpp"
#include "normlab/random.hpp"

using namespace normlab;

namespace {
const Exponent kInf = Exponent::infinity();

std::vector<Exponent> p_grid() {
  std::vector<Exponent> out;
  for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 10.0}) out.emplace_back(p);
  out.push_back(kInf);
  return out;
}
}  // namespace

TEST(Exponent, ConjugatesAreExactAtTheEnds) {
  EXPECT_TRUE(Exponent(1.0).conjugate().is_infinite());
  EXPECT_TRUE(kInf.conjugate().is_one());
  EXPECT_EQ(Exponent(2.0).conjugate().value(), 2.0);
  EXPECT_NEAR(Exponent(4.0).conjugate().value(), 4.0 / 3.0, 1e-15);
}

TEST(Exponent, ConjugateRoundTripsAndSumsToOne) {
  for (double p : {1.0, 1.1, 1.5, 2.0, 3.0, 7.25, 100.0}) {
    const Exponent e(p);
    EXPECT_NEAR(e.conjugate().conjugate().value(), p, 1e-15 * p);
    EXPECT_NEAR(e.reciprocal() + e.conjugate().reciprocal(), 1.0, 1e-15);
  }
  EXPECT_EQ(kInf.conjugate().conjugate(), kInf);
}

TEST(Exponent, RejectsBelowOneAndParses) {
  EXPECT_THROW(Exponent(0.5), PreconditionViolation);
  EXPECT_THROW(Exponent(std::nan("")), PreconditionViolation);
  EXPECT_TRUE(Exponent::parse("inf").is_infinite());
  EXPECT_EQ(Exponent::parse("1.5").value(), 1.5);
  EXPECT_THROW(Exponent::parse("1.5x"), ParseError);
  EXPECT_EQ(Exponent::parse(Exponent(4.0 / 3.0).to_string()).value(), 4.0 / 3.0);
}

TEST(Scalar, ModulusIsMultiplicative) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const complex z = rng.scalar<complex>(), w = rng.scalar<complex>();
    EXPECT_NEAR(modulus(z * w), modulus(z) * modulus(w), 1e-14 * (1 + modulus(z * w)));
  }
  EXPECT_EQ(modulus(complex{}), 0.0);
}

TEST(PNorm, Examples) {
  EXPECT_DOUBLE_EQ(p_norm(Vector<double>{3, 4}, Exponent(2)), 5.0);
  EXPECT_DOUBLE_EQ(p_norm(Vector<double>{1, 1, 1, 1}, kInf), 1.0);
  EXPECT_DOUBLE_EQ(p_norm(Vector<double>{1, -2, 2}, Exponent(1)), 5.0);
  EXPECT_EQ(p_norm(Vector<double>{0, 0}, Exponent(3)), 0.0);
}

TEST(PNorm, SurvivesExtremeMagnitudes) {
  EXPECT_NEAR(p_norm(Vector<double>{3e200, 4e200}, Exponent(2)) / 5e200, 1.0, 1e-15);
  EXPECT_NEAR(p_norm(Vector<double>{3e-200, 4e-200}, Exponent(2)) / 5e-200, 1.0, 1e-15);
}

TEST(Pairing, Examples) {
  EXPECT_EQ(pairing(Vector<double>{1, 0}, Vector<double>{0, 1}), 0.0);
  EXPECT_EQ(pairing(Vector<double>{1, 1}, Vector<double>{1, 1}), 2.0);
  EXPECT_EQ(pairing(Vector<double>{1, 2, 3}, Vector<double>{3, 2, 1}), 10.0);
  EXPECT_THROW(pairing(Vector<double>{1}, Vector<double>{1, 2}), DimensionMismatch);
}

TEST(InnerProduct, Examples) {
  const complex i{0, 1};
  EXPECT_EQ(inner_product(Vector<complex>{i, 1}, Vector<complex>{i, 1}), complex(2, 0));
  EXPECT_EQ(inner_product(Vector<double>{1, 0}, Vector<double>{0, 1}), 0.0);
  EXPECT_EQ(inner_product(Vector<double>{1, 2}, Vector<double>{2, -1}), 0.0);
  // Conjugate-linear in the second slot.
  EXPECT_EQ(inner_product(Vector<complex>{1, 0}, Vector<complex>{i, 0}), -i);
}

TEST(Polarize, Examples) {
  const std::function<double(const Vector<double>&)> nr = [](const Vector<double>& v) {
    return std::pow(norm2(v), 2);
  };
  const std::function<double(const Vector<complex>&)> nc = [](const Vector<complex>& v) {
    return std::pow(norm2(v), 2);
  };
  EXPECT_NEAR(polarize(nr, {1, 0}, {0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(polarize(nr, {1, 1}, {1, 1}), 2.0, 1e-15);
  // Independent evaluation of the four-term identity for v=(1,0), w=(i,0):
  // |v+w|^2 = 2, |v+iw|^2 = 0, |v-w|^2 = 2, |v-iw|^2 = 4
  // (2 + i*0 - 2 - i*4) / 4 = -i.
  const complex got = polarize(nc, {complex{1, 0}, 0}, {complex{0, 1}, 0});
  EXPECT_NEAR(std::abs(got - complex(0, -1)), 0.0, 1e-15);
}

TEST(Polarize, ReproducesInnerProduct) {
  Rng rng(11);
  const std::function<double(const Vector<complex>&)> nc = [](const Vector<complex>& v) {
    return std::pow(norm2(v), 2);
  };
  const std::function<double(const Vector<double>&)> nr = [](const Vector<double>& v) {
    return std::pow(norm2(v), 2);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(1, 16));
    const auto v = rng.vector<complex>(n), w = rng.vector<complex>(n);
    const double scale = norm2(v) * norm2(w) + 1.0;
    EXPECT_LE(std::abs(polarize(nc, v, w) - inner_product(v, w)), 1e-12 * scale);
    const auto a = rng.vector<double>(n), b = rng.vector<double>(n);
    EXPECT_LE(std::abs(polarize(nr, a, b) - inner_product(a, b)), 1e-12 * scale);
  }
}

template <class S>
class Inequalities : public ::testing::Test {};
using Fields = ::testing::Types<double, complex>;
TYPED_TEST_SUITE(Inequalities, Fields);

TYPED_TEST(Inequalities, MinkowskiHolderAndComparisons) {
  using S = TypeParam;
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(1, 64));
    const auto v = rng.vector<S>(n), w = rng.vector<S>(n);
    for (const auto& p : p_grid()) {
      const double nv = p_norm(v, p), nw = p_norm(w, p);
      EXPECT_LE(p_norm(add(v, w), p), nv + nw + 1e-10 * (nv + nw));
      const double q_w = p_norm(w, p.conjugate());
      EXPECT_LE(modulus(pairing(v, w)), nv * q_w + 1e-10 * nv * q_w);
      EXPECT_LE(max_modulus(v), nv * (1 + 1e-12));
      for (const auto& q : p_grid()) {
        if (q.value() < p.value()) continue;
        const double nq = p_norm(v, q);
        EXPECT_LE(nq, nv * (1 + 1e-12));
        const double factor = std::pow(static_cast<double>(n), p.reciprocal() - q.reciprocal());
        EXPECT_LE(nv, factor * nq * (1 + 1e-12));
      }
    }
  }
}

TEST(Inequalities, ComparisonIsAttainedOnConstantVectors) {
  for (std::size_t n : {2u, 4u, 8u, 16u, 64u}) {
    const Vector<double> v(n, 0.7);
    for (const auto& p : p_grid()) {
      for (const auto& q : p_grid()) {
        if (q.value() < p.value()) continue;
        const double factor = std::pow(double(n), p.reciprocal() - q.reciprocal());
        EXPECT_NEAR(p_norm(v, p), factor * p_norm(v, q), 1e-12 * p_norm(v, p));
      }
    }
  }
}

TEST(Inequalities, PowerSumsBelowOneAreSubadditive) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(1, 32));
    Vector<double> b(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
      b[j] = rng.uniform();
      c[j] = rng.uniform();
    }
    for (double p : {0.25, 0.5, 0.75}) {
      const double lhs = power_sum(add(b, c), p);
      const double rhs = power_sum(b, p) + power_sum(c, p);
      EXPECT_LE(lhs, rhs * (1 + 1e-12));
    }
  }
}

TEST(Inequalities, CauchySchwarzWithEqualityOnParallelPairs) {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(1, 32));
    const auto v = rng.vector<complex>(n), w = rng.vector<complex>(n);
    EXPECT_LE(modulus(inner_product(v, w)), norm2(v) * norm2(w) * (1 + 1e-12));
    const complex a = rng.scalar<complex>();
    const auto u = scale(a, v);
    EXPECT_NEAR(modulus(inner_product(v, u)), norm2(v) * norm2(u),
                1e-12 * norm2(v) * norm2(u));
  }
}

TEST(Inequalities, ParallelogramLaw) {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(1, 32));
    const auto v = rng.vector<complex>(n), w = rng.vector<complex>(n);
    const double lhs = std::pow(norm2(add(v, w)), 2) + std::pow(norm2(subtract(v, w)), 2);
    const double rhs = 2 * (std::pow(norm2(v), 2) + std::pow(norm2(w), 2));
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
  }
}

TEST(Inequalities, JensenForPowers) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto k = static_cast<std::size_t>(rng.between(1, 10));
    std::vector<double> lam(k), x(k);
    double total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      lam[i] = rng.uniform() + 1e-3;
      total += lam[i];
      x[i] = rng.uniform(-5, 5);
    }
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      double mean = 0, avg_phi = 0;
      for (std::size_t i = 0; i < k; ++i) {
        mean += lam[i] / total * x[i];
        avg_phi += lam[i] / total * std::pow(std::abs(x[i]), p);
      }
      EXPECT_LE(std::pow(std::abs(mean), p), avg_phi * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(DifferenceQuotients, Examples) {
  EXPECT_TRUE(difference_quotient_check({{0, 1, 2}, {0, 1, 4}}));
  EXPECT_FALSE(difference_quotient_check({{0, 1, 2}, {0, 2, 3}}));
  EXPECT_TRUE(difference_quotient_check({{-1, 0, 1}, {1, 0, 1}}));
  EXPECT_THROW(difference_quotient_check({{0, 1}, {0, 1}}), PreconditionViolation);
  EXPECT_THROW(ConvexSampledFunction({0, 0, 1}, {0, 1, 2}), PreconditionViolation);
}

TEST(DifferenceQuotients, MidpointConvexityOnSampledGrids) {
  // Grid shadow of midpoint convexity: for phi(t)=|t|^p on a uniform grid the
  // midpoint inequality holds at every pair of equal-parity indices.
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    std::vector<double> grid, values;
    for (int i = -10; i <= 10; ++i) {
      grid.push_back(i * 0.1);
      values.push_back(std::pow(std::abs(i * 0.1), p));
    }
    const ConvexSampledFunction f(grid, values);
    EXPECT_TRUE(difference_quotient_check(f));
    for (std::size_t a = 0; a < grid.size(); ++a) {
      for (std::size_t b = a + 2; b < grid.size(); b += 2) {
        EXPECT_LE(values[(a + b) / 2], 0.5 * (values[a] + values[b]) + 1e-12);
      }
    }
  }
}

TEST(SupportLine, Examples) {
  const ConvexSampledFunction sq({0, 1, 2}, {0, 1, 4});
  const auto a = support_line(sq, 1);
  EXPECT_GE(a.slope, 1.0);
  EXPECT_LE(a.slope, 3.0);
  EXPECT_EQ(a(1.0), 1.0);

  const auto b = support_line(ConvexSampledFunction({-1, 0, 1}, {1, 0, 1}), 1);
  EXPECT_GE(b.slope, -1.0);
  EXPECT_LE(b.slope, 1.0);
  EXPECT_EQ(b(0.0), 0.0);

  const ConvexSampledFunction aff({-2, 0.5, 3, 7}, {-3, 2, 7, 15});
  for (std::size_t i = 0; i < aff.size(); ++i) {
    const auto c = support_line(aff, i);
    EXPECT_DOUBLE_EQ(c.slope, 2.0);
    EXPECT_DOUBLE_EQ(c.intercept, 1.0);
  }
  EXPECT_THROW(support_line(ConvexSampledFunction({0, 1, 2}, {0, 2, 3}), 1), NotConvex);
}

TEST(SupportLine, MinorizesRandomConvexSamples) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> grid{rng.uniform(-3, -2)};
    for (int i = 0; i < 12; ++i) grid.push_back(grid.back() + rng.uniform(0.05, 1.0));
    const double p = rng.uniform(1.0, 4.0), c = rng.uniform(-1, 1);
    std::vector<double> values;
    for (double t : grid) values.push_back(std::pow(std::abs(t - c), p) + 0.3 * t);
    const ConvexSampledFunction f(grid, values);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto a = support_line(f, k);
      EXPECT_EQ(a(grid[k]), values[k]);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_LE(a(grid[i]), values[i] + 1e-12 * (1 + std::abs(values[i])));
      }
    }
  }
}
