#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/mesh.hpp"
#include "iceshed/vec.hpp"

namespace iceshed {

/// Relative snap tolerance: vertices closer than this times the mesh bounding
/// box diagonal are treated as lying on the cutting plane.
inline constexpr double kSnapFactor = 1e-9;

/// Plane normal to the span axis at span coordinate `radial_coord`.
struct CuttingPlane {
  double radial_coord = 0.0;
};

/// Positive on the tip side of the plane, negative on the root side.
inline double signed_distance(Vec3 point, CuttingPlane plane, Vec3 axis = {0.0, 0.0, 1.0}) {
  return dot(point, axis) - plane.radial_coord;
}

struct ClipResult {
  double volume_below = 0.0;  // root side
  double volume_above = 0.0;  // tip side
  double cut_area = 0.0;      // area of the plane/tet-interior intersection
  Vec3 centroid_below{};
  Vec3 centroid_above{};
  /// Area of a tet face lying in the plane while the tet sits entirely on
  /// the tip side. Such faces belong to the tip-side cross-section even
  /// though the plane misses the tet interior.
  double tip_face_area = 0.0;
};

namespace detail {

struct Moments {
  double volume = 0.0;
  Vec3 moment{};  // volume-weighted centroid

  void add_tet(Vec3 a, Vec3 b, Vec3 c, Vec3 d) {
    const double v = std::abs(signed_volume6(a, b, c, d)) / 6.0;
    volume += v;
    moment += v * tet_centroid(a, b, c, d);
  }
  /// Triangular prism with bottom (a, b, c) and top (a2, b2, c2); a-a2,
  /// b-b2, c-c2 are the lateral edges. Must be convex.
  void add_prism(Vec3 a, Vec3 b, Vec3 c, Vec3 a2, Vec3 b2, Vec3 c2) {
    add_tet(a, b, c, c2);
    add_tet(a, b, b2, c2);
    add_tet(a, a2, b2, c2);
  }
  [[nodiscard]] Vec3 centroid() const {
    return volume > 0.0 ? (1.0 / volume) * moment : Vec3{};
  }
};

inline Vec3 edge_point(Vec3 p, double dp, Vec3 q, double dq) {
  if (dq == 0.0) return q;
  if (dp == 0.0) return p;
  const double t = dp / (dp - dq);
  return p + t * (q - p);
}

inline double tet_bbox_diagonal(const std::array<Vec3, 4>& p) {
  Vec3 lo = p[0], hi = p[0];
  for (const auto& q : p) {
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y), std::min(lo.z, q.z)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y), std::max(hi.z, q.z)};
  }
  return norm(hi - lo);
}

}  // namespace detail

/// Splits a tetrahedron by a cutting plane. Handles 1+3 and 2+2 vertex sign
/// splits; vertices within `snap` of the plane are treated as on it.
inline ClipResult clip_tet(const std::array<Vec3, 4>& p, CuttingPlane plane, double snap,
                           Vec3 axis = {0.0, 0.0, 1.0}) {
  const double v6 = signed_volume6(p[0], p[1], p[2], p[3]);
  if (!(std::abs(v6) / 6.0 >= kDegenerateTetVolume)) throw GeometryError("degenerate tetrahedron");

  std::array<double, 4> d{};
  int pos = 0, neg = 0;
  for (int i = 0; i < 4; ++i) {
    d[i] = signed_distance(p[i], plane, axis);
    if (std::abs(d[i]) <= snap) d[i] = 0.0;
    pos += d[i] > 0.0;
    neg += d[i] < 0.0;
  }

  ClipResult r;
  const double volume = std::abs(v6) / 6.0;
  const Vec3 centroid = tet_centroid(p[0], p[1], p[2], p[3]);
  if (neg == 0 || pos == 0) {
    if (4 - pos - neg == 3 && neg == 0) {
      for (int i = 0; i < 4; ++i)
        if (d[i] > 0.0) {
          const auto& f = detail::kTetFaces[i];
          r.tip_face_area = triangle_area(p[f[0]], p[f[1]], p[f[2]]);
        }
    }
    if (neg == 0) {
      r.volume_above = volume;
      r.centroid_above = centroid;
    } else {
      r.volume_below = volume;
      r.centroid_below = centroid;
    }
    return r;
  }

  detail::Moments above, below;
  if (pos == 1 || neg == 1) {
    // Single apex on one side; the other side is a (possibly collapsed) prism.
    const bool apex_above = pos == 1;
    int apex = 0;
    for (int i = 0; i < 4; ++i)
      if (apex_above ? d[i] > 0.0 : d[i] < 0.0) apex = i;
    std::array<Vec3, 3> base{}, cut{};
    for (int k = 0, j = 0; k < 4; ++k) {
      if (k == apex) continue;
      base[j] = p[k];
      cut[j] = detail::edge_point(p[apex], d[apex], p[k], d[k]);
      ++j;
    }
    auto& tip = apex_above ? above : below;
    auto& rest = apex_above ? below : above;
    tip.add_tet(p[apex], cut[0], cut[1], cut[2]);
    rest.add_prism(cut[0], cut[1], cut[2], base[0], base[1], base[2]);
    r.cut_area = triangle_area(cut[0], cut[1], cut[2]);
  } else {
    std::array<int, 2> hi{}, lo{};
    for (int i = 0, a = 0, b = 0; i < 4; ++i) (d[i] > 0.0 ? hi[a++] : lo[b++]) = i;
    auto cut = [&](int i, int j) { return detail::edge_point(p[i], d[i], p[j], d[j]); };
    const Vec3 i11 = cut(hi[0], lo[0]);
    const Vec3 i12 = cut(hi[0], lo[1]);
    const Vec3 i21 = cut(hi[1], lo[0]);
    const Vec3 i22 = cut(hi[1], lo[1]);
    above.add_prism(p[hi[0]], i11, i12, p[hi[1]], i21, i22);
    below.add_prism(p[lo[0]], i11, i21, p[lo[1]], i12, i22);
    r.cut_area = 0.5 * norm(cross(i22 - i11, i21 - i12));
  }
  // Keep the smaller side as computed and take the larger one as the
  // complement of the whole tet: the halves then add up to the tet volume to
  // rounding, and the large side does not inherit sliver sub-tet error.
  auto& small = above.volume <= below.volume ? above : below;
  auto& large = above.volume <= below.volume ? below : above;
  large.volume = std::max(volume - small.volume, 0.0);
  large.moment = volume * centroid - small.moment;
  r.volume_above = above.volume;
  r.volume_below = below.volume;
  r.centroid_above = above.centroid();
  r.centroid_below = below.centroid();
  return r;
}

/// clip_tet with the snap tolerance scaled by the tet's own bounding box.
inline ClipResult clip_tet(const std::array<Vec3, 4>& p, CuttingPlane plane,
                           Vec3 axis = {0.0, 0.0, 1.0}) {
  return clip_tet(p, plane, kSnapFactor * detail::tet_bbox_diagonal(p), axis);
}

/// Area of the part of a triangle whose span coordinate lies in [lo, hi].
/// Infinite bounds are allowed.
inline double triangle_area_in_slab(const std::array<Vec3, 3>& tri, double lo, double hi,
                                    Vec3 axis = {0.0, 0.0, 1.0}) {
  std::vector<Vec3> poly(tri.begin(), tri.end());
  auto clip = [&](double level, double sign) {
    // Keep points with sign * (s - level) <= 0.
    std::vector<Vec3> out;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
      const Vec3 a = poly[i];
      const Vec3 b = poly[(i + 1) % n];
      const double da = sign * (dot(a, axis) - level);
      const double db = sign * (dot(b, axis) - level);
      if (da <= 0.0) out.push_back(a);
      if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) out.push_back(a + (da / (da - db)) * (b - a));
    }
    poly = std::move(out);
  };
  if (std::isfinite(hi)) clip(hi, 1.0);
  if (std::isfinite(lo) && poly.size() >= 3) clip(lo, -1.0);
  if (poly.size() < 3) return 0.0;
  Vec3 normal{};
  for (std::size_t i = 1; i + 1 < poly.size(); ++i)
    normal += cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
  return 0.5 * norm(normal);
}

}  // namespace iceshed
