#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/fitting.hpp"
#include "iceshed/forces.hpp"
#include "iceshed/mesh.hpp"
#include "iceshed/partition.hpp"

namespace iceshed {

enum class Criterion {
  SumResistance,     // F_C > F_coh + F_adh
  EitherResistance,  // F_C > F_coh and F_C > F_adh
};

inline const char* to_string(Criterion c) {
  return c == Criterion::SumResistance ? "sum" : "either";
}

struct SheddingConfig {
  std::size_t n_subdivisions = 10;
  double z_tolerance = 1e-3;  // m; the driver uses 1e-3 * rotor radius
  std::size_t max_refinements = 12;
  Criterion criterion = Criterion::SumResistance;
  bool force_fit = true;  // fall back to curve fitting when no plane sheds

  void check() const {
    if (n_subdivisions < 10) throw ConfigError("n_subdivisions must be at least 10");
    if (!(z_tolerance > 0.0)) throw ConfigError("z_tolerance must be positive");
    if (max_refinements < 1) throw ConfigError("max_refinements must be at least 1");
  }
};

/// Strict inequality: a tie between load and resistance does not shed.
inline bool check_shedding(double centrifugal, double cohesion, double adhesion,
                           Criterion criterion) {
  if (criterion == Criterion::SumResistance) return centrifugal > cohesion + adhesion;
  return centrifugal > cohesion && centrifugal > adhesion;
}

inline bool check_shedding(const ForceSample& s, Criterion criterion) {
  return check_shedding(s.centrifugal, s.cohesion, s.adhesion, criterion);
}

enum class PassOutcome {
  PlaneBracket,    // a cutting plane satisfied the criterion
  FitResistance,   // fitted load crosses fitted resistance between planes
  FitCohesion,     // fitted load crosses fitted cohesion only
  NoShedding,
};

inline const char* to_string(PassOutcome o) {
  switch (o) {
    case PassOutcome::PlaneBracket: return "plane";
    case PassOutcome::FitResistance: return "fit-resistance";
    case PassOutcome::FitCohesion: return "fit-cohesion";
    case PassOutcome::NoShedding: return "none";
  }
  return "unknown";
}

struct PlaneResult {
  ForceSample forces;
  bool shed = false;
};

struct Iteration {
  double z_lo = 0.0;
  double z_hi = 0.0;
  std::vector<PlaneResult> planes;
  PassOutcome outcome = PassOutcome::NoShedding;
  std::optional<double> candidate;  // fitted location, fallback passes only
};

struct SheddingResult {
  bool shed = false;
  std::optional<double> z_s;         // m
  std::optional<double> shed_mass;   // kg tipward of z_s
  std::vector<Iteration> iterations;
  bool fallback_used = false;
};

struct FitCandidate {
  double z = 0.0;
  PassOutcome kind = PassOutcome::FitResistance;
};

/// Fits monotone cubics to the sampled load and resistance curves and returns
/// the tipmost location where the fitted load overcomes the fitted
/// resistance. When there is none, returns the tipmost crossing of load and
/// cohesion alone. Absent when neither exists.
inline std::optional<FitCandidate> force_fit(const ForceCurve& curve, const SheddingConfig& cfg) {
  const auto& s = curve.samples;
  if (s.size() < 4) throw InputError("force fitting needs at least 4 samples");
  const std::size_t n = s.size();
  std::vector<double> z(n), fc(n), fcoh(n), fadh(n), resist(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = s[i].z;
    fc[i] = s[i].centrifugal;
    fcoh[i] = s[i].cohesion;
    fadh[i] = s[i].adhesion;
    resist[i] = s[i].cohesion + s[i].adhesion;
  }
  const MonotoneCubic load(z, fc);
  const MonotoneCubic cohesion(z, fcoh);
  const double tol = std::max(1e-12 * std::max(std::abs(z.front()), std::abs(z.back())),
                              std::numeric_limits<double>::min());

  std::optional<double> root;
  if (cfg.criterion == Criterion::SumResistance) {
    const MonotoneCubic resistance(z, resist);
    root = tipmost_onset([&](double x) { return load(x) - resistance(x); }, z, tol);
  } else {
    const MonotoneCubic adhesion(z, fadh);
    root = tipmost_onset(
        [&](double x) { return std::min(load(x) - cohesion(x), load(x) - adhesion(x)); }, z, tol);
  }
  if (root) return FitCandidate{*root, PassOutcome::FitResistance};
  root = tipmost_onset([&](double x) { return load(x) - cohesion(x); }, z, tol);
  if (root) return FitCandidate{*root, PassOutcome::FitCohesion};
  return std::nullopt;
}

/// Source of cumulative force samples for the shedding search. `focus`
/// narrows the search domain: ice rootward of `lo` is discarded and
/// contributions tipward of `hi` are kept as a fixed load.
template <class S>
concept ForceSampler = requires(S& s, const S& cs, std::span<const double> z, double a, double b) {
  { cs.extent() } -> std::convertible_to<std::pair<double, double>>;
  { s.focus(a, b) };
  { s.sample(z) } -> std::convertible_to<std::vector<ForceSample>>;
  { s.tipward_mass(a) } -> std::convertible_to<double>;
};

/// Samples forces from an ice mesh, dropping elements outside the current
/// domain after each focus.
class MeshForceSampler {
 public:
  MeshForceSampler(const IceMesh& mesh, double omega, double sigma_c, double tau_a)
      : mesh_(&mesh), omega_(omega), sigma_c_(sigma_c), tau_a_(tau_a),
        active_(MeshSubset::all(mesh)), snap_(kSnapFactor * mesh.bbox_diagonal()) {
    std::tie(lo_, hi_) = mesh.span_extent();
  }

  [[nodiscard]] std::pair<double, double> extent() const {
    if (mesh_->empty()) return {0.0, 0.0};
    return mesh_->span_extent();
  }

  void focus(double lo, double hi) {
    if (hi < hi_) {
      const std::vector<double> cut{hi, hi_};
      const auto part = partition(*mesh_, cut, active_);
      const auto& slab = part.pieces[1];
      beyond_.centrifugal += centrifugal_force(slab, omega_, mesh_->density(), mesh_->span_axis());
      beyond_.adhesion += adhesion_force(slab, tau_a_);
      beyond_.mass += mesh_->density() * slab.volume();
      hi_ = hi;
    }
    lo_ = lo;
    std::erase_if(active_.tets, [&](std::size_t t) {
      const auto [a, b] = mesh_->tet_extent(t);
      return b < lo_ - snap_ || a > hi_ + snap_;
    });
    std::erase_if(active_.adhesion_faces, [&](std::size_t f) {
      double a = std::numeric_limits<double>::infinity(), b = -a;
      for (const auto& p : mesh_->face_points(f)) {
        a = std::min(a, mesh_->radial(p));
        b = std::max(b, mesh_->radial(p));
      }
      return b < lo_ - snap_ || a > hi_ + snap_;
    });
  }

  /// Cumulative samples at ascending planes inside the current domain.
  [[nodiscard]] std::vector<ForceSample> sample(std::span<const double> planes) const {
    std::vector<double> z(planes.begin(), planes.end());
    if (z.empty() || z.back() < hi_) z.push_back(hi_);
    const auto part = partition(*mesh_, z, active_);
    auto out = cumulative_samples(part, omega_, mesh_->density(), mesh_->span_axis(), sigma_c_,
                                  tau_a_, beyond_, false);
    out.resize(planes.size());
    return out;
  }

  [[nodiscard]] double tipward_mass(double z) const {
    if (!(z < hi_)) return beyond_.mass;
    const std::vector<double> cut{z, hi_};
    const auto part = partition(*mesh_, cut, active_);
    return beyond_.mass + mesh_->density() * part.pieces[1].volume();
  }

  [[nodiscard]] const MeshSubset& active() const { return active_; }

 private:
  const IceMesh* mesh_;
  double omega_;
  double sigma_c_;
  double tau_a_;
  MeshSubset active_;
  double snap_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  TipwardLoad beyond_;
};

static_assert(ForceSampler<MeshForceSampler>);

namespace detail {

inline std::vector<double> subdivide(double lo, double hi, std::size_t n) {
  std::vector<double> z(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    z[k] = k == 0 ? lo : k == n ? hi : lo + (hi - lo) * static_cast<double>(k) / n;
  return z;
}

template <ForceSampler S>
Iteration sample_pass(S& sampler, double lo, double hi, const SheddingConfig& cfg,
                      bool lo_known_to_shed) {
  Iteration it;
  it.z_lo = lo;
  it.z_hi = hi;
  const auto z = subdivide(lo, hi, cfg.n_subdivisions);
  const auto samples = sampler.sample(z);
  it.planes.reserve(samples.size());
  for (const auto& s : samples) it.planes.push_back({s, check_shedding(s, cfg.criterion)});
  // The domain's root plane was found to shed in the previous pass; the
  // re-accumulated sums there may differ in the last bit.
  if (lo_known_to_shed) it.planes.front().shed = true;
  return it;
}

/// Index k of the tipmost plane (walking tip to root, excluding the domain's
/// tip plane) that satisfies the criterion.
inline std::optional<std::size_t> tipmost_shedding_plane(const Iteration& it) {
  for (std::size_t k = it.planes.size() - 1; k-- > 0;)
    if (it.planes[k].shed) return k;
  return std::nullopt;
}

template <ForceSampler S>
void finish_shed(SheddingResult& r, S& sampler, double z_s) {
  r.shed = true;
  r.z_s = z_s;
  r.shed_mass = sampler.tipward_mass(z_s);
}

}  // namespace detail

/// Tip-to-root iterative cutting: every pass splits the current domain into
/// n_subdivisions pieces; the tipmost plane satisfying the criterion makes
/// the piece tipward of it the new domain, keeping all contributions further
/// tipward. Stops when the domain is narrower than z_tolerance or after
/// max_refinements passes; z_s is the midpoint of the final bracket.
template <ForceSampler S>
SheddingResult iterative_cut(S& sampler, const SheddingConfig& cfg) {
  cfg.check();
  SheddingResult result;
  auto [lo, hi] = sampler.extent();
  if (!(hi > lo)) return result;

  bool bracketed = false;
  for (std::size_t pass = 0; pass < cfg.max_refinements; ++pass) {
    auto it = detail::sample_pass(sampler, lo, hi, cfg, bracketed);
    const auto k = detail::tipmost_shedding_plane(it);
    if (!k) {
      result.iterations.push_back(std::move(it));
      return result;
    }
    it.outcome = PassOutcome::PlaneBracket;
    lo = it.planes[*k].forces.z;
    hi = it.planes[*k + 1].forces.z;
    result.iterations.push_back(std::move(it));
    sampler.focus(lo, hi);
    bracketed = true;
    if (hi - lo <= cfg.z_tolerance) break;
  }
  detail::finish_shed(result, sampler, 0.5 * (lo + hi));
  return result;
}

/// Iterative cutting with the force-fitting fallback. When a pass finds no
/// shedding plane, the sampled curves are fitted; the portion holding the
/// fitted location and its two neighbours become the new domain. A
/// crossing of load and cohesion alone only steers the refinement: shedding
/// is reported once a plane or the fitted resistance crossing confirms it.
template <ForceSampler S>
SheddingResult find_shedding(S& sampler, const SheddingConfig& cfg) {
  cfg.check();
  SheddingResult result;
  auto [lo, hi] = sampler.extent();
  if (!(hi > lo)) return result;

  PassOutcome last = PassOutcome::NoShedding;
  double candidate = 0.0;
  for (std::size_t pass = 0; pass < cfg.max_refinements; ++pass) {
    auto it = detail::sample_pass(sampler, lo, hi, cfg, last == PassOutcome::PlaneBracket);
    if (const auto k = detail::tipmost_shedding_plane(it)) {
      it.outcome = last = PassOutcome::PlaneBracket;
      lo = it.planes[*k].forces.z;
      hi = it.planes[*k + 1].forces.z;
    } else {
      if (!cfg.force_fit) {
        result.iterations.push_back(std::move(it));
        return result;
      }
      ForceCurve curve;
      curve.samples.reserve(it.planes.size());
      for (const auto& p : it.planes) curve.samples.push_back(p.forces);
      const auto fit = force_fit(curve, cfg);
      if (!fit) {
        result.iterations.push_back(std::move(it));
        return result;
      }
      result.fallback_used = true;
      it.outcome = last = fit->kind;
      it.candidate = candidate = fit->z;
      const auto& planes = it.planes;
      const std::size_t n = planes.size() - 1;
      std::size_t j = 0;
      while (j + 1 < n && planes[j + 1].forces.z <= fit->z) ++j;
      lo = planes[j == 0 ? 0 : j - 1].forces.z;
      hi = planes[std::min(j + 2, n)].forces.z;
    }
    result.iterations.push_back(std::move(it));
    sampler.focus(lo, hi);
    if (hi - lo <= cfg.z_tolerance) break;
  }

  if (last == PassOutcome::PlaneBracket) {
    detail::finish_shed(result, sampler, 0.5 * (lo + hi));
  } else if (last == PassOutcome::FitResistance) {
    detail::finish_shed(result, sampler, candidate);
  }
  return result;
}

inline SheddingResult iterative_cut(const IceMesh& mesh, double omega, const StrengthModel& model,
                                    double temperature, const SheddingConfig& cfg) {
  MeshForceSampler sampler(mesh, omega, model.cohesion_strength(temperature),
                           model.adhesion_strength(temperature));
  return iterative_cut(sampler, cfg);
}

inline SheddingResult find_shedding(const IceMesh& mesh, double omega, const StrengthModel& model,
                                    double temperature, const SheddingConfig& cfg) {
  MeshForceSampler sampler(mesh, omega, model.cohesion_strength(temperature),
                           model.adhesion_strength(temperature));
  return find_shedding(sampler, cfg);
}

}  // namespace iceshed
