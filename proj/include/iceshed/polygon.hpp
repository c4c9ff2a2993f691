#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/vec.hpp"

namespace iceshed {

/// Shoelace area; positive for counterclockwise loops.
inline double signed_area(std::span<const Vec2> loop) {
  double twice = 0.0;
  for (std::size_t i = 0, n = loop.size(); i < n; ++i) twice += cross(loop[i], loop[(i + 1) % n]);
  return 0.5 * twice;
}

inline double polyline_length(std::span<const Vec2> pts, bool closed) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) len += norm(pts[i + 1] - pts[i]);
  if (closed && pts.size() > 1) len += norm(pts.front() - pts.back());
  return len;
}

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

/// Closed-triangle containment for a counterclockwise triangle.
inline bool in_triangle(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

/// Points at equal arc-length spacing along a polyline. For open polylines
/// both endpoints are reproduced exactly.
inline std::vector<Vec2> resample_arc(std::span<const Vec2> pts, std::size_t count, bool closed) {
  const double total = polyline_length(pts, closed);
  if (!(total > 0.0)) throw GeometryError("cannot resample a zero-length loop");
  const std::size_t n_seg = closed ? pts.size() : pts.size() - 1;
  const double step = total / static_cast<double>(closed ? count : count - 1);

  std::vector<Vec2> out;
  out.reserve(count);
  out.push_back(pts.front());
  std::size_t seg = 0;
  double seg_start = 0.0;
  for (std::size_t k = 1; k < count; ++k) {
    if (!closed && k + 1 == count) {
      out.push_back(pts.back());
      break;
    }
    const double s = step * static_cast<double>(k);
    double seg_len = norm(pts[(seg + 1) % pts.size()] - pts[seg]);
    while (seg + 1 < n_seg && s > seg_start + seg_len) {
      seg_start += seg_len;
      ++seg;
      seg_len = norm(pts[(seg + 1) % pts.size()] - pts[seg]);
    }
    const Vec2 a = pts[seg];
    const Vec2 b = pts[(seg + 1) % pts.size()];
    const double t = seg_len > 0.0 ? std::clamp((s - seg_start) / seg_len, 0.0, 1.0) : 0.0;
    if (t == 0.0) {
      out.push_back(a);
    } else if (t == 1.0) {
      out.push_back(b);
    } else {
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

}  // namespace detail

/// True when no two non-adjacent edges of the closed loop touch and no two
/// adjacent edges fold back onto each other.
inline bool is_simple(std::span<const Vec2> loop) {
  const std::size_t n = loop.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = loop[i];
    const Vec2 b = loop[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 c = loop[j];
      const Vec2 d = loop[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared vertex is fine; overlapping collinear edges are not.
        const Vec2 shared = j == i + 1 ? b : a;
        const Vec2 other_ab = j == i + 1 ? a : b;
        const Vec2 other_cd = j == i + 1 ? d : c;
        if (detail::orientation(other_ab, shared, other_cd) == 0 &&
            dot(other_ab - shared, other_cd - shared) > 0.0)
          return false;
        continue;
      }
      if (detail::segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

/// Re-parameterizes a closed loop by arc length to `count` vertices, starting
/// at the first vertex.
inline std::vector<Vec2> resample_loop(std::span<const Vec2> loop, std::size_t count) {
  if (loop.size() < 2 || count < 3) throw GeometryError("loop too small to resample");
  return detail::resample_arc(loop, count, true);
}

/// Re-parameterizes an open polyline by arc length to `count` vertices; both
/// endpoints are kept.
inline std::vector<Vec2> resample_polyline(std::span<const Vec2> line, std::size_t count) {
  if (line.size() < 2 || count < 2) throw GeometryError("polyline too small to resample");
  return detail::resample_arc(line, count, false);
}

using Triangle = std::array<std::size_t, 3>;

/// Ear-clipping triangulation of a simple counterclockwise polygon. Among the
/// valid ears, the best-shaped one is clipped first. Every returned triangle
/// has strictly positive area.
inline std::vector<Triangle> triangulate(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  if (!(signed_area(poly) > 0.0)) throw GeometryError("polygon must be counterclockwise");

  std::vector<std::size_t> ring(n);
  for (std::size_t i = 0; i < n; ++i) ring[i] = i;

  std::vector<Triangle> tris;
  tris.reserve(n - 2);
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    std::size_t best = m;
    double best_quality = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 a = poly[ring[(k + m - 1) % m]];
      const Vec2 b = poly[ring[k]];
      const Vec2 c = poly[ring[(k + 1) % m]];
      const double twice_area = cross(b - a, c - a);
      if (!(twice_area > 0.0)) continue;
      bool blocked = false;
      for (std::size_t q = 0; q < m && !blocked; ++q) {
        if (q == k || q == (k + 1) % m || q == (k + m - 1) % m) continue;
        const Vec2 p = poly[ring[q]];
        if (p == a || p == b || p == c) continue;
        blocked = detail::in_triangle(a, b, c, p);
      }
      if (blocked) continue;
      const double quality =
          twice_area / (dot(b - a, b - a) + dot(c - b, c - b) + dot(a - c, a - c));
      if (best == m || quality > best_quality) {
        best = k;
        best_quality = quality;
      }
    }
    if (best == m) throw GeometryError("triangulation failed: no ear found");
    tris.push_back({ring[(best + m - 1) % m], ring[best], ring[(best + 1) % m]});
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (!(cross(poly[ring[1]] - poly[ring[0]], poly[ring[2]] - poly[ring[0]]) > 0.0))
    throw GeometryError("triangulation failed: degenerate final triangle");
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

}  // namespace iceshed
