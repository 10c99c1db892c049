#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "vibim/rng.hpp"

namespace {

using vibim::Rng;
using vibim::normal_quantile;

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.01), -2.3263478740408411, 1e-12);
  EXPECT_NEAR(normal_quantile(1e-9), -5.9978070150076869, 1e-9);
  EXPECT_NEAR(normal_quantile(0.3), -0.52440051270804078, 1e-12);
  // Cut points used for the six-level categoricals.
  EXPECT_NEAR(normal_quantile(1.0 / 6.0), -0.96742156610170104, 1e-12);
  EXPECT_NEAR(normal_quantile(5.0 / 6.0), 0.96742156610170104, 1e-12);
}

TEST(NormalQuantile, SymmetryAndTails) {
  for (double p : {0.001, 0.05, 0.2, 0.49, 0.77, 0.999}) {
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-11);
  }
  EXPECT_TRUE(std::isinf(normal_quantile(0.0)));
  EXPECT_TRUE(std::isinf(normal_quantile(1.0)));
  EXPECT_TRUE(std::isnan(normal_quantile(-0.1)));
}

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    all_equal = all_equal && x == b.normal();
    any_diff = any_diff || x != c.normal();
  }
  EXPECT_TRUE(all_equal);
  EXPECT_TRUE(any_diff);
}

TEST(Rng, DerivedSeedsIndependentOfUsage) {
  const auto d1 = Rng::derive_seed(7, 3);
  const auto d2 = Rng::derive_seed(7, 3);
  EXPECT_EQ(d1, d2);
  EXPECT_NE(d1, Rng::derive_seed(7, 4));
  EXPECT_NE(d1, Rng::derive_seed(8, 3));
}

TEST(Rng, UniformRangeAndMoments) {
  Rng rng(1);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sumsq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
  EXPECT_NEAR(sumsq / n, 1.0 / 3.0, 0.01);
}

TEST(Rng, NormalMoments) {
  Rng rng(2);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sumsq / n, 1.0, 0.02);
}

TEST(Rng, BelowIsUniform) {
  Rng rng(3);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.below(5)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

}  // namespace
