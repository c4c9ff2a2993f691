#include <gtest/gtest.h>

#include <sstream>

#include "iceshed/section.hpp"

using namespace iceshed;

namespace {

// Square of side `a` centered at the origin; contact along the bottom edge.
IceSection centered_square(double a, double r = 1.0) {
  const double h = a / 2.0;
  IceSection s;
  s.outer = {{h, -h}, {h, h}, {-h, h}, {-h, -h}};
  s.contact = {{-h, -h}, {h, -h}};
  s.station_radius = r;
  return s;
}

}  // namespace

TEST(Section, PolygonAndArea) {
  const auto s = rectangle_section(0.02, 0.05, 0.6);
  EXPECT_NO_THROW(check_section(s));
  EXPECT_EQ(s.polygon_size(), 4u);
  EXPECT_NEAR(s.area(), 1e-3, 1e-18);
  EXPECT_FALSE(s.is_contact_edge(2));
  EXPECT_TRUE(s.is_contact_edge(3));
}

TEST(Section, InvalidSectionsThrow) {
  auto s = rectangle_section(1, 1, 1);
  s.contact.front() = {0.1, 0.0};
  EXPECT_THROW(check_section(s), GeometryError);
  s = rectangle_section(1, 1, 0.0);
  EXPECT_THROW(check_section(s), GeometryError);
  s = rectangle_section(1, 1, 1);
  std::swap(s.outer[1], s.outer[2]);
  EXPECT_THROW(check_section(s), GeometryError);
}

TEST(Section, ResampleCounts) {
  const auto r = resample_section(centered_square(1.0), 16);
  EXPECT_EQ(r.outer.size(), 16u);
  EXPECT_EQ(r.contact.size(), 16u);
  EXPECT_NO_THROW(check_section(r));
  EXPECT_NEAR(r.area(), 1.0, 0.005);
  EXPECT_THROW(resample_section(centered_square(1.0), 7), GeometryError);
}

TEST(Section, InterpolationEndpointsAreExact) {
  const auto a = resample_section(centered_square(1.0, 0.6), 12);
  const auto b = resample_section(centered_square(3.0, 1.2), 12);
  const auto a0 = interpolate_section(a, b, 0.0);
  const auto b1 = interpolate_section(a, b, 1.0);
  EXPECT_EQ(a0.outer, a.outer);
  EXPECT_EQ(a0.contact, a.contact);
  EXPECT_EQ(a0.station_radius, a.station_radius);
  EXPECT_EQ(b1.outer, b.outer);
  EXPECT_EQ(b1.contact, b.contact);
  EXPECT_EQ(b1.station_radius, b.station_radius);
}

TEST(Section, InterpolationOfConcentricSquares) {
  const auto mid = interpolate_section(centered_square(1.0, 0.6), centered_square(3.0, 1.2), 0.5);
  EXPECT_NEAR(mid.area(), 4.0, 1e-12);
  EXPECT_NEAR(mid.outer[1].x, 1.0, 1e-15);
  EXPECT_NEAR(mid.station_radius, 0.9, 1e-15);
  EXPECT_NO_THROW(check_section(mid));
}

TEST(Section, InterpolationNeedsMatchingCounts) {
  EXPECT_THROW(interpolate_section(resample_section(centered_square(1), 8),
                                   resample_section(centered_square(1), 9), 0.5),
               GeometryError);
}

TEST(SectionFile, RoundTrip) {
  const auto s = resample_section(centered_square(0.3, 0.75), 10);
  std::ostringstream out;
  write_section(out, s);
  std::istringstream in(out.str());
  const auto back = read_section(in);
  EXPECT_EQ(back.outer, s.outer);
  EXPECT_EQ(back.contact, s.contact);
  EXPECT_EQ(back.station_radius, s.station_radius);
}

TEST(SectionFile, CommaSeparatedPoints) {
  std::istringstream in(R"(station_radius 0.9
outer 4
0.02,0
0.02, 0.05
0,0.05
0,0
contact 2
0,0
0.02,0
)");
  const auto s = read_section(in);
  EXPECT_NEAR(s.area(), 1e-3, 1e-18);
  EXPECT_EQ(s.station_radius, 0.9);
}

TEST(SectionFile, Errors) {
  std::istringstream missing("station_radius 1\nouter 4\n1 0\n1 1\n0 1\n0 0\n");
  EXPECT_THROW(read_section(missing), ParseError);
  std::istringstream bad("station_radius one\n");
  EXPECT_THROW(read_section(bad), ParseError);
}
