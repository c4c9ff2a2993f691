#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "iceshed/clip.hpp"
#include "iceshed/error.hpp"
#include "iceshed/mesh.hpp"

namespace iceshed {

struct ElementShare {
  std::size_t tet = 0;
  double volume = 0.0;  // clipped volume inside the piece, m^3
  Vec3 centroid{};      // centroid of the clipped volume
};

struct AdhesionShare {
  std::size_t face = 0;
  double area = 0.0;  // clipped adhesion area inside the piece, m^2
};

/// Ice between two consecutive cutting planes (or a plane and a mesh end).
struct PieceDecomposition {
  std::size_t piece_index = 0;
  std::vector<ElementShare> elements;
  std::vector<AdhesionShare> adhesion;
  double cut_area_root_side = 0.0;  // m^2, 0 for the root end piece
  double z_lo = 0.0;
  double z_hi = 0.0;

  [[nodiscard]] double volume() const {
    double v = 0.0;
    for (const auto& e : elements) v += e.volume;
    return v;
  }
  [[nodiscard]] double adhesion_area() const {
    double a = 0.0;
    for (const auto& f : adhesion) a += f.area;
    return a;
  }
};

/// planes.size() + 1 pieces ordered root to tip, plus the total cut area of
/// the tip-side cross-section at every plane.
struct Partition {
  std::vector<double> planes;
  std::vector<double> cut_area;
  std::vector<PieceDecomposition> pieces;
};

/// Tets and adhesion faces taking part in a partition.
struct MeshSubset {
  std::vector<std::size_t> tets;
  std::vector<std::size_t> adhesion_faces;

  static MeshSubset all(const IceMesh& mesh) {
    MeshSubset s;
    s.tets.resize(mesh.tets().size());
    for (std::size_t t = 0; t < s.tets.size(); ++t) s.tets[t] = t;
    const auto faces = mesh.boundary();
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].label == FaceLabel::Adhesion) s.adhesion_faces.push_back(f);
    return s;
  }
};

inline void check_planes(std::span<const double> planes) {
  if (planes.empty()) throw GeometryError("at least one cutting plane is required");
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (!std::isfinite(planes[i])) throw GeometryError("cutting plane is not finite");
    if (i > 0 && !(planes[i] > planes[i - 1]))
      throw GeometryError("cutting planes must be strictly increasing");
  }
}

/// Splits the subset of the mesh by the given planes. Tets and adhesion
/// triangles that straddle a plane are divided exactly between the two
/// adjacent pieces.
inline Partition partition(const IceMesh& mesh, std::span<const double> planes,
                           const MeshSubset& subset) {
  check_planes(planes);
  const std::size_t n_planes = planes.size();
  const Vec3 axis = mesh.span_axis();
  const double snap = kSnapFactor * mesh.bbox_diagonal();
  const auto [ext_lo, ext_hi] = mesh.span_extent();

  Partition out;
  out.planes.assign(planes.begin(), planes.end());
  out.cut_area.assign(n_planes, 0.0);
  out.pieces.resize(n_planes + 1);
  for (std::size_t j = 0; j <= n_planes; ++j) {
    auto& piece = out.pieces[j];
    piece.piece_index = j;
    piece.z_lo = j == 0 ? std::min(ext_lo, planes.front()) : planes[j - 1];
    piece.z_hi = j == n_planes ? std::max(ext_hi, planes.back()) : planes[j];
  }

  // Planes that can touch the range [lo, hi] (within the snap tolerance).
  auto plane_range = [&](double lo, double hi) {
    const auto first = std::lower_bound(planes.begin(), planes.end(), lo - snap);
    const auto last = std::upper_bound(planes.begin(), planes.end(), hi + snap);
    return std::pair<std::size_t, std::size_t>(first - planes.begin(), last - planes.begin());
  };

  std::vector<ClipResult> clips;
  for (const std::size_t t : subset.tets) {
    const auto [tlo, thi] = mesh.tet_extent(t);
    const auto [ka, kb] = plane_range(tlo, thi);
    const auto pts = mesh.tet_points(t);
    const double volume = mesh.tet_volume(t);
    const Vec3 centroid = tet_centroid(pts[0], pts[1], pts[2], pts[3]);

    if (ka == kb) {
      out.pieces[ka].elements.push_back({t, volume, centroid});
      continue;
    }
    clips.clear();
    for (std::size_t k = ka; k < kb; ++k) {
      clips.push_back(clip_tet(pts, CuttingPlane{planes[k]}, snap, axis));
      out.cut_area[k] += clips.back().cut_area + clips.back().tip_face_area;
    }
    // Piece ka: below plane ka. Piece kb: above plane kb-1. Pieces between
    // take differences of the cumulative root-side volume and moment.
    auto emit = [&](std::size_t j, double v, Vec3 moment) {
      if (v > 0.0) out.pieces[j].elements.push_back({t, v, (1.0 / v) * moment});
    };
    emit(ka, clips.front().volume_below, clips.front().volume_below * clips.front().centroid_below);
    for (std::size_t k = ka + 1; k < kb; ++k) {
      const auto& prev = clips[k - 1 - ka];
      const auto& cur = clips[k - ka];
      emit(k, cur.volume_below - prev.volume_below,
           cur.volume_below * cur.centroid_below - prev.volume_below * prev.centroid_below);
    }
    emit(kb, clips.back().volume_above, clips.back().volume_above * clips.back().centroid_above);
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const std::size_t f : subset.adhesion_faces) {
    const auto tri = mesh.face_points(f);
    double lo = inf, hi = -inf;
    for (const auto& p : tri) {
      lo = std::min(lo, dot(p, axis));
      hi = std::max(hi, dot(p, axis));
    }
    const auto first = std::lower_bound(planes.begin(), planes.end(), lo) - planes.begin();
    const auto last = std::upper_bound(planes.begin(), planes.end(), hi) - planes.begin();
    const auto ka = static_cast<std::size_t>(first);
    const auto kb = static_cast<std::size_t>(last);
    if (ka == kb) {
      out.pieces[ka].adhesion.push_back({f, triangle_area(tri[0], tri[1], tri[2])});
      continue;
    }
    for (std::size_t j = ka; j <= kb; ++j) {
      const double zlo = j == 0 ? -inf : planes[j - 1];
      const double zhi = j == n_planes ? inf : planes[j];
      const double a = triangle_area_in_slab(tri, zlo, zhi, axis);
      if (a > 0.0) out.pieces[j].adhesion.push_back({f, a});
    }
  }

  for (std::size_t j = 1; j <= n_planes; ++j) out.pieces[j].cut_area_root_side = out.cut_area[j - 1];
  return out;
}

inline Partition partition(const IceMesh& mesh, std::span<const double> planes) {
  return partition(mesh, planes, MeshSubset::all(mesh));
}

inline Partition partition(const IceMesh& mesh, std::span<const CuttingPlane> planes) {
  std::vector<double> z(planes.size());
  std::transform(planes.begin(), planes.end(), z.begin(),
                 [](CuttingPlane p) { return p.radial_coord; });
  return partition(mesh, z);
}

}  // namespace iceshed
