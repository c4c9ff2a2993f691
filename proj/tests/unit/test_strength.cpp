#include <gtest/gtest.h>

#include "iceshed/strength.hpp"

using namespace iceshed;

TEST(Strength, Constant) {
  const StrengthModel m(CurveSpec::constant(1.0e6), CurveSpec::constant(1e5), {-20, 0});
  EXPECT_EQ(m.cohesion_strength(-8.0), 1.0e6);
  EXPECT_EQ(m.adhesion_strength(-3.0), 1e5);
  EXPECT_EQ(m.adhesion_strength(-20.0), 1e5);
}

TEST(Strength, Polynomial) {
  const StrengthModel m(CurveSpec::polynomial({5e5, -5e4}), CurveSpec::polynomial({0.0, -1e4}),
                        {-16, -4});
  EXPECT_DOUBLE_EQ(m.cohesion_strength(-10.0), 1.0e6);
  EXPECT_DOUBLE_EQ(m.adhesion_strength(-8.0), 8e4);
}

TEST(Strength, TableInterpolation) {
  const auto table = CurveSpec::table({{-20, 2e6}, {0, 0.5e6}});
  const StrengthModel m(table, table, {-20, 0});
  EXPECT_DOUBLE_EQ(m.cohesion_strength(-10.0), 1.25e6);
}

TEST(Strength, TableKnotsAreExact) {
  const auto d = StrengthModel::defaults();
  for (const auto& [t, v] : d.adhesion().knots) EXPECT_EQ(d.adhesion_strength(t), v);
  for (const auto& [t, v] : d.cohesion().knots) EXPECT_EQ(d.cohesion_strength(t), v);
  EXPECT_EQ(d.cohesion_strength(-8.0), 1.1e6);
  EXPECT_EQ(d.adhesion_strength(-8.0), 3.4e5);
}

TEST(Strength, OutOfRangeIsAnError) {
  const auto d = StrengthModel::defaults();
  EXPECT_THROW((void)d.cohesion_strength(-3.9), OutOfRangeError);
  EXPECT_THROW((void)d.adhesion_strength(-16.1), OutOfRangeError);
  EXPECT_THROW((void)d.adhesion_strength(-16.1), InputError);
}

TEST(Strength, ConstructionChecks) {
  const auto ok = CurveSpec::constant(1e5);
  // Increasing with temperature.
  EXPECT_THROW(StrengthModel(CurveSpec::polynomial({1e6, 1e3}), ok, {-16, -4}), ConfigError);
  // Non-positive inside the range.
  EXPECT_THROW(StrengthModel(CurveSpec::polynomial({0.0, -1e4}), ok, {-16, 2}), ConfigError);
  // Degree above four.
  EXPECT_THROW(StrengthModel(CurveSpec::polynomial({1, 0, 0, 0, 0, 0}), ok, {-16, -4}),
               ConfigError);
  // Unordered table.
  EXPECT_THROW(StrengthModel(CurveSpec::table({{-4, 1e5}, {-16, 2e5}}), ok, {-16, -4}),
               ConfigError);
  // Table narrower than the valid range.
  EXPECT_THROW(StrengthModel(CurveSpec::table({{-10, 2e5}, {-4, 1e5}}), ok, {-16, -4}),
               ConfigError);
  // A non-monotone bump between knots is caught by the scan.
  EXPECT_THROW(
      StrengthModel(CurveSpec::table({{-16, 3e5}, {-10, 2e5}, {-9.99, 2.5e5}, {-4, 1e5}}), ok,
                    {-16, -4}),
      ConfigError);
}
