#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iceshed/fitting.hpp"

using namespace iceshed;

TEST(MonotoneCubic, MatchesReferenceValues) {
  // Reference values from an independent PCHIP implementation.
  const std::vector<double> x{0, 1, 2, 3, 4.5}, y{0, 1, 1.5, 4, 4.2};
  const MonotoneCubic f(x, y);
  EXPECT_NEAR(f(0.3), 0.35774999999999996, 1e-14);
  EXPECT_NEAR(f(1.7), 1.3114999999999999, 1e-14);
  EXPECT_NEAR(f(2.5), 2.820504189108318, 1e-14);
  EXPECT_NEAR(f(3.9), 4.1683791741472165, 1e-14);
  const std::vector<double> d{1.25, 0.6666666666666666, 0.8333333333333334, 0.2692998204667865, 0.0};
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(f.slopes()[i], d[i], 1e-14);

  const std::vector<double> x2{0, 1, 2, 3}, y2{5, 3, 3.5, 1};
  const MonotoneCubic g(x2, y2);
  EXPECT_NEAR(g.slopes()[0], -3.25, 1e-14);
  EXPECT_EQ(g.slopes()[1], 0.0);
  EXPECT_EQ(g.slopes()[2], 0.0);
  EXPECT_NEAR(g.slopes()[3], -4.0, 1e-14);
}

TEST(MonotoneCubic, ReproducesKnotsAndClamps) {
  const std::vector<double> x{0.5, 0.7, 0.8, 1.2}, y{10, 7, 6.5, 0};
  const MonotoneCubic f(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(f(x[i]), y[i]);
  EXPECT_EQ(f(0.0), 10.0);
  EXPECT_EQ(f(2.0), 0.0);
}

TEST(MonotoneCubic, PreservesMonotonicity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x{0.0}, y{100.0};
    for (int i = 0; i < 11; ++i) {
      x.push_back(x.back() + 0.01 + u(rng));
      y.push_back(y.back() - (u(rng) < 0.2 ? 0.0 : 10.0 * u(rng)));
    }
    const MonotoneCubic f(x, y);
    double prev = f(x.front());
    for (int k = 1; k <= 2000; ++k) {
      const double v = f(x.front() + (x.back() - x.front()) * k / 2000.0);
      EXPECT_LE(v, prev + 1e-12);
      prev = v;
    }
  }
}

TEST(MonotoneCubic, TwoKnotsIsLinear) {
  const std::vector<double> x{0, 2}, y{1, 5};
  const MonotoneCubic f(x, y);
  EXPECT_DOUBLE_EQ(f(0.5), 2.0);
}

TEST(MonotoneCubic, Errors) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(MonotoneCubic(one, one), InputError);
  const std::vector<double> x{0, 0}, y{1, 2};
  EXPECT_THROW(MonotoneCubic(x, y), InputError);
}

TEST(TipmostOnset, FindsTipmostPositiveRegion) {
  const std::vector<double> knots{0, 1, 2, 3, 4};
  // Positive on (0.5, 1.5) and (2.2, 2.8).
  auto g = [](double z) { return std::max(0.25 - (z - 1) * (z - 1), 0.09 - (z - 2.5) * (z - 2.5)); };
  const auto r = tipmost_onset(g, knots, 1e-12);
  ASSERT_TRUE(r);
  EXPECT_NEAR(*r, 2.8, 1e-11);
}

TEST(TipmostOnset, NoRoot) {
  const std::vector<double> knots{0, 1, 2};
  EXPECT_FALSE(tipmost_onset([](double) { return -1.0; }, knots, 1e-12));
  EXPECT_FALSE(tipmost_onset([](double) { return 0.0; }, knots, 1e-12));
}

TEST(TipmostOnset, PositiveAtTip) {
  const std::vector<double> knots{0, 1, 2};
  EXPECT_EQ(tipmost_onset([](double) { return 1.0; }, knots, 1e-12), 2.0);
}
