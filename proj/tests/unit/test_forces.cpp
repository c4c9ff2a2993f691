#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "iceshed/forces.hpp"
#include "oracles.hpp"

using namespace iceshed;

namespace {

std::vector<double> stations(const oracle::Slab& s, int n) {
  std::vector<double> z;
  for (int k = 0; k < n; ++k) z.push_back(s.z0 + (s.R - s.z0) * k / n);
  return z;
}

}  // namespace

TEST(Forces, SingleElementCentrifugal) {
  PieceDecomposition p;
  p.elements.push_back({0, 2.0 / 900.0, {0.3, -0.2, 1.0}});
  EXPECT_NEAR(centrifugal_force(p, 10.0, 900.0), 200.0, 1e-12);
  EXPECT_EQ(centrifugal_force(p, 0.0, 900.0), 0.0);
}

TEST(Forces, CohesionAndAdhesion) {
  EXPECT_DOUBLE_EQ(cohesion_force(1e-4, 1e6), 100.0);
  EXPECT_EQ(cohesion_force(0.0, 1e6), 0.0);
  EXPECT_DOUBLE_EQ(cohesion_force(0.125, 2.0), 0.25);
  PieceDecomposition p;
  EXPECT_EQ(adhesion_force(p, 1e5), 0.0);
  p.adhesion.push_back({0, 0.5});
  EXPECT_DOUBLE_EQ(adhesion_force(p, 1e5), 5e4);
}

TEST(Forces, SlabClosedForms) {
  oracle::Slab s;
  s.omega = 600.0 * 2.0 * std::numbers::pi / 60.0;
  const auto mesh = oracle::slab_mesh(s, 200, 13);
  const auto z = stations(s, 10);
  const auto curve = force_profile(mesh, z, s.omega, s.sigma, s.tau);
  ASSERT_EQ(curve.samples.size(), z.size());
  for (const auto& f : curve.samples) {
    EXPECT_LT(oracle::rel_err(f.centrifugal, s.centrifugal(f.z)), 1e-3) << f.z;
    EXPECT_LT(oracle::rel_err(f.cohesion, s.cohesion(f.z)), 1e-3) << f.z;
    EXPECT_LT(oracle::rel_err(f.adhesion, s.adhesion(f.z)), 1e-3) << f.z;
  }
}

TEST(Forces, RootAndBeyondTipPlanes) {
  oracle::Slab s;
  const auto mesh = oracle::slab_mesh(s, 50);
  const std::vector<double> z{s.z0, s.R + 0.1};
  const auto curve = force_profile(mesh, z, s.omega, s.sigma, s.tau);
  const auto& root = curve.samples[0];
  EXPECT_LT(oracle::rel_err(root.centrifugal, s.centrifugal(s.z0)), 1e-9);
  EXPECT_LT(oracle::rel_err(root.adhesion, s.tau * s.w * (s.R - s.z0)), 1e-9);
  EXPECT_LT(oracle::rel_err(root.cohesion, s.sigma * s.area()), 1e-9);
  const auto& tip = curve.samples[1];
  EXPECT_EQ(tip.centrifugal, 0.0);
  EXPECT_EQ(tip.cohesion, 0.0);
  EXPECT_EQ(tip.adhesion, 0.0);
}

TEST(Forces, OmegaScalingAndDensityLinearity) {
  oracle::Slab s;
  const auto mesh = oracle::slab_mesh(s, 30, 9);
  const auto z = stations(s, 10);
  const auto a = force_profile(mesh, z, 10.0, s.sigma, s.tau);
  const auto b = force_profile(mesh, z, 30.0, s.sigma, s.tau);
  auto data = mesh.data();
  data.density *= 2.5;
  const auto denser = force_profile(IceMesh::from_data(data), z, 10.0, s.sigma, s.tau);
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_LT(oracle::rel_err(b.samples[i].centrifugal, 9.0 * a.samples[i].centrifugal), 1e-12);
    EXPECT_EQ(b.samples[i].cohesion, a.samples[i].cohesion);
    EXPECT_EQ(b.samples[i].adhesion, a.samples[i].adhesion);
    EXPECT_LT(oracle::rel_err(denser.samples[i].centrifugal, 2.5 * a.samples[i].centrifugal),
              1e-12);
  }
}

TEST(Forces, RefinementIndependence) {
  oracle::Slab s;
  const auto mesh = oracle::slab_mesh(s, 37, 9);
  const double probe = 0.8731;
  const std::vector<double> coarse{probe};
  std::vector<double> fine;
  for (int k = 0; k <= 40; ++k) fine.push_back(0.55 + 0.0171 * k);
  fine.push_back(probe);
  std::sort(fine.begin(), fine.end());
  const auto a = force_profile(mesh, coarse, s.omega, s.sigma, s.tau);
  const auto b = force_profile(mesh, fine, s.omega, s.sigma, s.tau);
  const auto it = std::find(fine.begin(), fine.end(), probe) - fine.begin();
  EXPECT_LT(oracle::rel_err(b.samples[it].centrifugal, a.samples[0].centrifugal), 1e-9);
  EXPECT_LT(oracle::rel_err(b.samples[it].adhesion, a.samples[0].adhesion), 1e-9);
  EXPECT_EQ(b.samples[it].cohesion, a.samples[0].cohesion);
}

TEST(Forces, MonotoneProfiles) {
  IceSection root;
  root.outer = {{0.04, 0.0}, {0.05, 0.02}, {0.02, 0.035}, {0.01, 0.01}, {0.0, 0.0}};
  root.contact = {{0.0, 0.0}, {0.04, 0.0}};
  root.station_radius = 0.6;
  IceSection tip = root;
  for (auto& p : tip.outer) p.y *= 2.0;
  tip.station_radius = 1.18;
  ExtrusionSpec spec;
  spec.sections = {root, tip};
  spec.spanwise_cells = 23;
  const auto mesh = extrude(spec);
  std::vector<double> z;
  for (int k = 0; k <= 60; ++k) z.push_back(0.58 + 0.01 * k);
  const auto curve = force_profile(mesh, z, 50.0, 1e6, 1e5);
  for (std::size_t i = 1; i < z.size(); ++i) {
    EXPECT_LE(curve.samples[i].centrifugal, curve.samples[i - 1].centrifugal);
    EXPECT_LE(curve.samples[i].adhesion, curve.samples[i - 1].adhesion);
  }
}

TEST(Forces, AdditivityOnRandomPieces) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> vol(1e-9, 1e-5), r(0.1, 1.5), tau(1e4, 5e5);
  for (int trial = 0; trial < 200; ++trial) {
    PieceDecomposition a, b, ab;
    for (int i = 0; i < 5 + trial % 7; ++i) {
      ElementShare e{static_cast<std::size_t>(i), vol(rng), {r(rng), r(rng), r(rng)}};
      (i % 2 ? a : b).elements.push_back(e);
      ab.elements.push_back(e);
      AdhesionShare f{static_cast<std::size_t>(i), vol(rng)};
      (i % 3 ? a : b).adhesion.push_back(f);
      ab.adhesion.push_back(f);
    }
    const double omega = r(rng) * 50.0;
    const double t = tau(rng);
    EXPECT_LT(oracle::rel_err(centrifugal_force(ab, omega, 900.0),
                              centrifugal_force(a, omega, 900.0) + centrifugal_force(b, omega, 900.0)),
              1e-10);
    EXPECT_LT(oracle::rel_err(adhesion_force(ab, t), adhesion_force(a, t) + adhesion_force(b, t)),
              1e-10);
  }
}

TEST(Forces, CsvFormat) {
  ForceCurve c;
  c.samples = {{0.59, 1.5, 200.0, 1180.0}, {1.18, 0.0, 0.0, 0.0}};
  std::ostringstream out;
  write_csv(out, c);
  EXPECT_EQ(out.str(),
            "z_m,F_centrifugal_N,F_cohesion_N,F_adhesion_N\n"
            "0.58999999999999997,1.5,200,1180\n"
            "1.1799999999999999,0,0,0\n");
}
