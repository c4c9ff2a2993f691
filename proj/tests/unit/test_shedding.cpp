#include <gtest/gtest.h>

#include <random>

#include "iceshed/shedding.hpp"
#include "oracles.hpp"

using namespace iceshed;

namespace {

SheddingConfig config_for(const oracle::Slab& s) {
  SheddingConfig cfg;
  cfg.z_tolerance = 1e-3 * s.R;
  return cfg;
}

// Balance root at 0.775 R: plane 0.75 R is the tipmost satisfying plane.
oracle::Slab plane_root_slab() {
  oracle::Slab s;
  s.z0 = 0.5 * s.R;
  s.tau = 2e4;
  const double z = 0.775 * s.R;
  const double a = s.rho * s.area() * s.omega * s.omega / 2.0;
  s.sigma = (a * (s.R * s.R - z * z) - s.tau * s.w * (s.R - z)) / s.area();
  return s;
}

// Balance positive only in a band around 0.87 R, clear of the N = 10 planes.
oracle::Slab between_planes_slab() {
  oracle::Slab s;
  s.z0 = 0.5 * s.R;
  const double a = s.rho * s.area() * s.omega * s.omega / 2.0;
  const double half_width = 0.01 * s.R;
  return oracle::narrow_band_slab(s, 0.87 * s.R, a * half_width * half_width);
}

}  // namespace

TEST(CheckShedding, Examples) {
  EXPECT_TRUE(check_shedding(100, 30, 40, Criterion::SumResistance));
  EXPECT_FALSE(check_shedding(100, 60, 50, Criterion::SumResistance));
  EXPECT_FALSE(check_shedding(70, 30, 40, Criterion::SumResistance));
  EXPECT_TRUE(check_shedding(70, 30, 40, Criterion::EitherResistance));
  EXPECT_FALSE(check_shedding(40, 30, 40, Criterion::EitherResistance));
}

TEST(SheddingConfig, Checks) {
  SheddingConfig cfg;
  EXPECT_NO_THROW(cfg.check());
  cfg.n_subdivisions = 9;
  EXPECT_THROW(cfg.check(), ConfigError);
  cfg = {};
  cfg.z_tolerance = 0.0;
  EXPECT_THROW(cfg.check(), ConfigError);
  cfg = {};
  cfg.max_refinements = 0;
  EXPECT_THROW(cfg.check(), ConfigError);
}

TEST(IterativeCut, WorkedSlabExample) {
  oracle::Slab s;  // ice over [0.5 R, R]
  const auto root = oracle::slab_root(s);
  ASSERT_TRUE(root);
  // Quoted as z* ~ 1.080 m ~ 0.915 R; the closed form gives 1.0808 m.
  EXPECT_NEAR(*root, 1.080, 1e-3);
  EXPECT_NEAR(*root / s.R, 0.915, 1e-3);

  const auto mesh = oracle::slab_mesh(s, 300);
  const auto cfg = config_for(s);
  const auto model = StrengthModel(CurveSpec::constant(s.sigma), CurveSpec::constant(s.tau), {-20, 0});
  const auto cut = iterative_cut(mesh, s.omega, model, -8.0, cfg);
  ASSERT_TRUE(cut.shed);
  EXPECT_LE(std::abs(*cut.z_s - *root), cfg.z_tolerance);

  const auto full = find_shedding(mesh, s.omega, model, -8.0, cfg);
  ASSERT_TRUE(full.shed);
  EXPECT_FALSE(full.fallback_used);
  EXPECT_EQ(*full.z_s, *cut.z_s);
  EXPECT_NEAR(*full.shed_mass, s.rho * s.area() * (s.R - *full.z_s), 1e-9);
}

TEST(IterativeCut, ZeroOmegaDoesNotShed) {
  oracle::Slab s;
  const auto mesh = oracle::slab_mesh(s, 20);
  const auto r = find_shedding(mesh, 0.0, StrengthModel::defaults(), -8.0, config_for(s));
  EXPECT_FALSE(r.shed);
  EXPECT_FALSE(r.z_s);
  EXPECT_FALSE(r.shed_mass);
}

TEST(IterativeCut, EmptyMeshDoesNotShed) {
  const auto mesh = IceMesh::from_data(MeshData{});
  const auto r = find_shedding(mesh, 60.0, StrengthModel::defaults(), -8.0, SheddingConfig{});
  EXPECT_FALSE(r.shed);
  EXPECT_TRUE(r.iterations.empty());
}

TEST(IterativeCut, ShedsAtSubdivisionPlane) {
  const auto s = plane_root_slab();
  const auto mesh = oracle::slab_mesh(s, 200);
  const auto model = StrengthModel(CurveSpec::constant(s.sigma), CurveSpec::constant(s.tau), {-20, 0});
  const auto r = find_shedding(mesh, s.omega, model, -8.0, config_for(s));
  ASSERT_TRUE(r.shed);
  EXPECT_FALSE(r.fallback_used);
  const auto& first = r.iterations.front();
  EXPECT_EQ(first.outcome, PassOutcome::PlaneBracket);
  EXPECT_NEAR(first.planes[5].forces.z, 0.75 * s.R, 1e-12);
  EXPECT_TRUE(first.planes[5].shed);
  for (std::size_t k = 6; k < first.planes.size(); ++k) EXPECT_FALSE(first.planes[k].shed);
  EXPECT_GT(*r.z_s, 0.75 * s.R);
  EXPECT_LT(*r.z_s, 0.80 * s.R);
  EXPECT_LE(std::abs(*r.z_s - *oracle::slab_root(s)), 1e-3 * s.R);
}

TEST(FindShedding, RootBetweenPlanesNeedsFallback) {
  const auto s = between_planes_slab();
  const auto dense = oracle::dense_plane_scan(s);
  ASSERT_TRUE(dense);
  // No plane of the initial N = 10 subdivision satisfies the criterion.
  oracle::SlabSampler probe(s);
  const auto first = detail::sample_pass(probe, s.z0, s.R, config_for(s), false);
  EXPECT_FALSE(detail::tipmost_shedding_plane(first));

  const auto mesh = oracle::slab_mesh(s, 250);
  const auto model = StrengthModel(CurveSpec::constant(s.sigma), CurveSpec::constant(s.tau), {-20, 0});
  auto cfg = config_for(s);
  const auto with_fit = find_shedding(mesh, s.omega, model, -8.0, cfg);
  ASSERT_TRUE(with_fit.shed);
  EXPECT_TRUE(with_fit.fallback_used);
  EXPECT_LE(std::abs(*with_fit.z_s - *dense), std::max(cfg.z_tolerance, 0.005 * s.R));
  EXPECT_NEAR(*with_fit.z_s / s.R, 0.88, 0.005);

  cfg.force_fit = false;
  const auto without = find_shedding(mesh, s.omega, model, -8.0, cfg);
  EXPECT_FALSE(without.shed);
  EXPECT_FALSE(without.fallback_used);
}

TEST(ForceFit, SlabSamplesLocateRoot) {
  oracle::Slab s;
  oracle::SlabSampler sampler(s);
  const auto z = detail::subdivide(s.z0, s.R, 10);
  ForceCurve curve;
  curve.samples = sampler.sample(z);
  const auto c = force_fit(curve, SheddingConfig{});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->kind, PassOutcome::FitResistance);
  EXPECT_LE(std::abs(c->z - *oracle::slab_root(s)), 0.005 * s.R);
}

TEST(ForceFit, AbsentWhenNoCrossing) {
  oracle::Slab s;
  s.omega = 1.0;
  oracle::SlabSampler sampler(s);
  const auto z = detail::subdivide(s.z0, s.R, 10);
  ForceCurve curve;
  curve.samples = sampler.sample(z);
  EXPECT_FALSE(force_fit(curve, SheddingConfig{}));
  curve.samples.resize(3);
  EXPECT_THROW(force_fit(curve, SheddingConfig{}), InputError);
}

TEST(ForceFit, CohesionOnlyCrossing) {
  // Hand-built curves: load exceeds cohesion rootward of 0.6 but never the
  // summed resistance.
  ForceCurve curve;
  for (int k = 0; k <= 10; ++k) {
    const double z = 0.5 + 0.05 * k;
    const double fc = 100.0 * (1.0 - z) / 0.5;
    curve.samples.push_back({z, fc, 80.0, 200.0 * (1.0 - z)});
  }
  const auto c = force_fit(curve, SheddingConfig{});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->kind, PassOutcome::FitCohesion);
  EXPECT_NEAR(c->z, 0.6, 1e-9);
}

TEST(FindShedding, CohesionOnlyCandidateDoesNotShed) {
  // Load crosses cohesion but adhesion keeps the ice attached everywhere.
  oracle::Slab s;
  s.tau = 2e6;
  oracle::SlabSampler sampler(s);
  const auto r = find_shedding(sampler, config_for(s));
  EXPECT_FALSE(r.shed);
  EXPECT_TRUE(r.fallback_used);
  for (const auto& it : r.iterations) EXPECT_NE(it.outcome, PassOutcome::PlaneBracket);
}

TEST(FindShedding, BracketCorrectness) {
  oracle::Slab s;
  oracle::SlabSampler sampler(s);
  const auto cfg = config_for(s);
  const auto r = find_shedding(sampler, cfg);
  ASSERT_TRUE(r.shed);
  const double tol = cfg.z_tolerance;
  EXPECT_FALSE(check_shedding(s.centrifugal(*r.z_s + tol), s.cohesion(*r.z_s + tol),
                              s.adhesion(*r.z_s + tol), cfg.criterion));
  EXPECT_TRUE(check_shedding(s.centrifugal(*r.z_s - tol), s.cohesion(*r.z_s - tol),
                             s.adhesion(*r.z_s - tol), cfg.criterion));
}

TEST(FindShedding, RefinementMonotonicity) {
  oracle::Slab s;
  oracle::SlabSampler sampler(s);
  auto cfg = config_for(s);
  cfg.z_tolerance = 1e-9;
  const auto r = iterative_cut(sampler, cfg);
  ASSERT_GE(r.iterations.size(), 3u);
  for (std::size_t i = 1; i < r.iterations.size(); ++i) {
    const double before = r.iterations[i - 1].z_hi - r.iterations[i - 1].z_lo;
    const double after = r.iterations[i].z_hi - r.iterations[i].z_lo;
    EXPECT_LE(after, before / (cfg.n_subdivisions / 2.0) * (1 + 1e-9));
  }
}

TEST(FindShedding, OracleEquivalenceOnRandomSlabs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rho(850, 920), omega(40, 80), sigma(3e4, 4e5),
      tau(1e4, 2e5), w(0.01, 0.04);
  int tested = 0;
  while (tested < 20) {
    oracle::Slab s;
    s.z0 = 0.5 * s.R;
    s.rho = rho(rng);
    s.omega = omega(rng);
    s.sigma = sigma(rng);
    s.tau = tau(rng);
    s.w = w(rng);
    const auto root = oracle::slab_root(s);
    if (!root) continue;
    ++tested;
    oracle::SlabSampler sampler(s);
    const auto cfg = config_for(s);
    const auto r = find_shedding(sampler, cfg);
    ASSERT_TRUE(r.shed) << "set " << tested;
    EXPECT_LE(std::abs(*r.z_s - *root), std::max(cfg.z_tolerance, 0.005 * s.R)) << "set " << tested;
  }
}

TEST(FindShedding, EitherCriterion) {
  oracle::Slab s;
  oracle::SlabSampler sampler(s);
  auto cfg = config_for(s);
  cfg.criterion = Criterion::EitherResistance;
  const auto r = find_shedding(sampler, cfg);
  ASSERT_TRUE(r.shed);
  // The either-criterion region contains the sum-criterion region.
  EXPECT_GE(*r.z_s, *oracle::slab_root(s) - cfg.z_tolerance);
  const double z = *r.z_s;
  EXPECT_TRUE(check_shedding(s.centrifugal(z - cfg.z_tolerance), s.cohesion(z - cfg.z_tolerance),
                             s.adhesion(z - cfg.z_tolerance), Criterion::EitherResistance));
}

TEST(FindShedding, Deterministic) {
  const auto s = between_planes_slab();
  const auto mesh = oracle::slab_mesh(s, 120);
  const auto model = StrengthModel(CurveSpec::constant(s.sigma), CurveSpec::constant(s.tau), {-20, 0});
  const auto a = find_shedding(mesh, s.omega, model, -8.0, config_for(s));
  const auto b = find_shedding(mesh, s.omega, model, -8.0, config_for(s));
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  EXPECT_EQ(a.z_s, b.z_s);
  EXPECT_EQ(a.shed_mass, b.shed_mass);
  for (std::size_t i = 0; i < a.iterations.size(); ++i) {
    ASSERT_EQ(a.iterations[i].planes.size(), b.iterations[i].planes.size());
    for (std::size_t k = 0; k < a.iterations[i].planes.size(); ++k) {
      EXPECT_EQ(a.iterations[i].planes[k].forces.centrifugal, b.iterations[i].planes[k].forces.centrifugal);
      EXPECT_EQ(a.iterations[i].planes[k].forces.adhesion, b.iterations[i].planes[k].forces.adhesion);
    }
  }
}

TEST(MeshForceSampler, FocusKeepsTipwardContributions) {
  oracle::Slab s;
  const auto mesh = oracle::slab_mesh(s, 90);
  MeshForceSampler sampler(mesh, s.omega, s.sigma, s.tau);
  const std::vector<double> probe{0.8, 0.85, 0.9};
  const auto before = sampler.sample(probe);
  sampler.focus(0.75, 0.9);
  EXPECT_LT(sampler.active().tets.size(), mesh.tets().size());
  const auto after = sampler.sample(probe);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    EXPECT_LT(oracle::rel_err(after[i].centrifugal, before[i].centrifugal), 1e-12);
    EXPECT_LT(oracle::rel_err(after[i].adhesion, before[i].adhesion), 1e-12);
    EXPECT_EQ(after[i].cohesion, before[i].cohesion);
  }
  EXPECT_LT(oracle::rel_err(sampler.tipward_mass(0.8), s.rho * s.area() * (s.R - 0.8)), 1e-12);
}
