#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/vec.hpp"

namespace iceshed {

inline constexpr double kDefaultIceDensity = 900.0;      // kg/m^3
inline constexpr double kDegenerateTetVolume = 1e-18;  // m^3

enum class FaceLabel : std::uint8_t { Adhesion, Flow };

inline const char* to_string(FaceLabel label) {
  return label == FaceLabel::Adhesion ? "adhesion" : "flow";
}

struct Tetrahedron {
  std::array<std::size_t, 4> nodes{};
};

struct BoundaryFace {
  std::array<std::size_t, 3> nodes{};
  FaceLabel label = FaceLabel::Flow;
};

/// Plain mesh data as read from a file or produced by a mesher. No invariants
/// are enforced here; see validate() and IceMesh.
struct MeshData {
  std::vector<Vec3> nodes;
  std::vector<Tetrahedron> tets;
  std::vector<BoundaryFace> faces;
  Vec3 span_axis{0.0, 0.0, 1.0};
  double density = kDefaultIceDensity;
};

enum class ViolationKind : std::uint8_t {
  BadDensity,
  BadSpanAxis,
  NonFiniteNode,
  NodeOutOfRange,
  RepeatedNode,
  InvertedTet,
  DegenerateTet,
  NonManifoldFace,
  UnlabeledBoundaryFace,
  LabelNotOnBoundary,
  DuplicateLabel,
  DanglingNode,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::BadDensity: return "bad-density";
    case ViolationKind::BadSpanAxis: return "bad-span-axis";
    case ViolationKind::NonFiniteNode: return "non-finite-node";
    case ViolationKind::NodeOutOfRange: return "node-out-of-range";
    case ViolationKind::RepeatedNode: return "repeated-node";
    case ViolationKind::InvertedTet: return "inverted-tet";
    case ViolationKind::DegenerateTet: return "degenerate-tet";
    case ViolationKind::NonManifoldFace: return "non-manifold-face";
    case ViolationKind::UnlabeledBoundaryFace: return "unlabeled-boundary-face";
    case ViolationKind::LabelNotOnBoundary: return "label-not-on-boundary";
    case ViolationKind::DuplicateLabel: return "duplicate-label";
    case ViolationKind::DanglingNode: return "dangling-node";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::size_t index;  // tet, face, or node index depending on kind
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] bool has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
  }
  [[nodiscard]] bool has(ViolationKind kind, std::size_t index) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
      return v.kind == kind && v.index == index;
    });
  }
  [[nodiscard]] std::string summary() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.message;
    }
    return out;
  }
};

namespace detail {

using FaceKey = std::array<std::size_t, 3>;

inline FaceKey face_key(std::size_t a, std::size_t b, std::size_t c) {
  FaceKey k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const noexcept {
    std::size_t h = k[0];
    h = h * 0x9E3779B97F4A7C15ULL + k[1];
    h = h * 0x9E3779B97F4A7C15ULL + k[2];
    return h ^ (h >> 29);
  }
};

/// Local vertex triples of the four tet faces, oriented outward for a
/// positively oriented tet.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces{{
    {1, 2, 3},
    {0, 3, 2},
    {0, 1, 3},
    {0, 2, 1},
}};

struct FaceUse {
  std::size_t count = 0;
  std::size_t tet = 0;
  int local = 0;
};

using FaceTable = std::unordered_map<FaceKey, FaceUse, FaceKeyHash>;

inline FaceTable build_face_table(std::span<const Tetrahedron> tets, std::size_t node_count) {
  FaceTable table;
  table.reserve(tets.size() * 3);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const auto& n = tets[t].nodes;
    if (std::any_of(n.begin(), n.end(), [&](std::size_t id) { return id >= node_count; }))
      continue;
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kTetFaces[f];
      auto& use = table[face_key(n[lf[0]], n[lf[1]], n[lf[2]])];
      if (use.count++ == 0) {
        use.tet = t;
        use.local = f;
      }
    }
  }
  return table;
}

}  // namespace detail

/// Lists every violation of the mesh invariants. An empty report means the
/// mesh can be wrapped in an IceMesh as-is. A mesh with no tets is valid and
/// represents the absence of ice.
inline ValidationReport validate(const MeshData& mesh) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::size_t index, std::string msg) {
    report.violations.push_back({kind, index, std::move(msg)});
  };

  if (!(mesh.density > 0.0) || !std::isfinite(mesh.density))
    add(ViolationKind::BadDensity, 0, "density must be positive and finite");
  if (!is_finite(mesh.span_axis) || std::abs(norm(mesh.span_axis) - 1.0) > 1e-12)
    add(ViolationKind::BadSpanAxis, 0, "span axis must be a unit vector");

  const std::size_t n_nodes = mesh.nodes.size();
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!is_finite(mesh.nodes[i]))
      add(ViolationKind::NonFiniteNode, i, "node " + std::to_string(i) + " is not finite");
  }

  std::vector<bool> used(n_nodes, false);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& n = mesh.tets[t].nodes;
    bool in_range = true;
    for (auto id : n) {
      if (id >= n_nodes) {
        add(ViolationKind::NodeOutOfRange, t,
            "tet " + std::to_string(t) + " references missing node " + std::to_string(id));
        in_range = false;
      } else {
        used[id] = true;
      }
    }
    if (!in_range) continue;
    auto sorted = n;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      add(ViolationKind::RepeatedNode, t, "tet " + std::to_string(t) + " repeats a node");
      continue;
    }
    const double v6 = signed_volume6(mesh.nodes[n[0]], mesh.nodes[n[1]], mesh.nodes[n[2]],
                                     mesh.nodes[n[3]]);
    if (std::abs(v6) / 6.0 < kDegenerateTetVolume) {
      add(ViolationKind::DegenerateTet, t, "tet " + std::to_string(t) + " is degenerate");
    } else if (v6 < 0.0) {
      add(ViolationKind::InvertedTet, t, "tet " + std::to_string(t) + " is inverted");
    }
  }

  const auto table = detail::build_face_table(mesh.tets, n_nodes);
  for (const auto& [key, use] : table) {
    if (use.count > 2)
      add(ViolationKind::NonManifoldFace, use.tet,
          "triangle of tet " + std::to_string(use.tet) + " is shared by " +
              std::to_string(use.count) + " tets");
  }

  std::unordered_map<detail::FaceKey, std::size_t, detail::FaceKeyHash> labeled;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& n = mesh.faces[f].nodes;
    if (std::any_of(n.begin(), n.end(), [&](std::size_t id) { return id >= n_nodes; })) {
      add(ViolationKind::NodeOutOfRange, f,
          "face " + std::to_string(f) + " references a missing node");
      continue;
    }
    const auto key = detail::face_key(n[0], n[1], n[2]);
    if (!labeled.emplace(key, f).second) {
      add(ViolationKind::DuplicateLabel, f, "face " + std::to_string(f) + " is labeled twice");
      continue;
    }
    auto it = table.find(key);
    if (it == table.end() || it->second.count != 1)
      add(ViolationKind::LabelNotOnBoundary, f,
          "face " + std::to_string(f) + " is not a boundary face of the mesh");
  }
  for (const auto& [key, use] : table) {
    if (use.count == 1 && !labeled.contains(key))
      add(ViolationKind::UnlabeledBoundaryFace, use.tet,
          "boundary face of tet " + std::to_string(use.tet) + " has no label");
  }

  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!used[i]) add(ViolationKind::DanglingNode, i, "node " + std::to_string(i) + " is unused");
  }

  // Hash-map iteration order is unspecified; keep reports reproducible.
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::pair(a.kind, a.index) < std::pair(b.kind, b.index);
                   });
  return report;
}

/// A validated, immutable tetrahedral ice mesh. All tets are positively
/// oriented and boundary faces are oriented outward.
class IceMesh {
 public:
  IceMesh() = default;

  /// Reorients inverted tets, then validates. Throws TopologyError,
  /// DegenerateElementError or InputError when an invariant is violated.
  static IceMesh from_data(MeshData data) {
    for (auto& tet : data.tets) {
      auto& n = tet.nodes;
      if (std::all_of(n.begin(), n.end(), [&](std::size_t id) { return id < data.nodes.size(); }) &&
          signed_volume6(data.nodes[n[0]], data.nodes[n[1]], data.nodes[n[2]],
                         data.nodes[n[3]]) < 0.0)
        std::swap(n[2], n[3]);
    }
    const auto report = validate(data);
    if (!report.ok()) {
      const auto kind = report.violations.front().kind;
      if (report.has(ViolationKind::DegenerateTet))
        throw DegenerateElementError("degenerate element: " + report.summary());
      if (kind == ViolationKind::BadDensity || kind == ViolationKind::BadSpanAxis ||
          kind == ViolationKind::NonFiniteNode)
        throw InputError("invalid mesh: " + report.summary());
      throw TopologyError("topology error: " + report.summary());
    }

    IceMesh mesh;
    mesh.data_ = std::move(data);
    mesh.finish();
    return mesh;
  }

  [[nodiscard]] const MeshData& data() const { return data_; }
  [[nodiscard]] std::span<const Vec3> nodes() const { return data_.nodes; }
  [[nodiscard]] std::span<const Tetrahedron> tets() const { return data_.tets; }
  /// Boundary faces, outward oriented, in the order they were labeled.
  [[nodiscard]] std::span<const BoundaryFace> boundary() const { return data_.faces; }
  [[nodiscard]] Vec3 span_axis() const { return data_.span_axis; }
  [[nodiscard]] double density() const { return data_.density; }
  [[nodiscard]] bool empty() const { return data_.tets.empty(); }

  [[nodiscard]] std::array<Vec3, 4> tet_points(std::size_t t) const {
    const auto& n = data_.tets[t].nodes;
    return {data_.nodes[n[0]], data_.nodes[n[1]], data_.nodes[n[2]], data_.nodes[n[3]]};
  }
  [[nodiscard]] std::array<Vec3, 3> face_points(std::size_t f) const {
    const auto& n = data_.faces[f].nodes;
    return {data_.nodes[n[0]], data_.nodes[n[1]], data_.nodes[n[2]]};
  }
  [[nodiscard]] double tet_volume(std::size_t t) const { return volumes_[t]; }
  [[nodiscard]] double volume() const { return total_volume_; }

  /// Span-axis coordinate of a point.
  [[nodiscard]] double radial(Vec3 p) const { return dot(p, data_.span_axis); }
  /// Range of span-axis coordinates covered by the mesh; {0, 0} if empty.
  [[nodiscard]] std::pair<double, double> span_extent() const { return extent_; }
  [[nodiscard]] std::pair<double, double> tet_extent(std::size_t t) const {
    return tet_extent_[t];
  }
  [[nodiscard]] double bbox_diagonal() const { return bbox_diag_; }

 private:
  void finish() {
    const auto table = detail::build_face_table(data_.tets, data_.nodes.size());
    for (auto& face : data_.faces) {
      const auto& use = table.at(detail::face_key(face.nodes[0], face.nodes[1], face.nodes[2]));
      const auto& tn = data_.tets[use.tet].nodes;
      const auto& lf = detail::kTetFaces[use.local];
      face.nodes = {tn[lf[0]], tn[lf[1]], tn[lf[2]]};
    }

    volumes_.resize(data_.tets.size());
    tet_extent_.resize(data_.tets.size());
    total_volume_ = 0.0;
    for (std::size_t t = 0; t < data_.tets.size(); ++t) {
      const auto p = tet_points(t);
      volumes_[t] = signed_volume6(p[0], p[1], p[2], p[3]) / 6.0;
      total_volume_ += volumes_[t];
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& q : p) {
        lo = std::min(lo, radial(q));
        hi = std::max(hi, radial(q));
      }
      tet_extent_[t] = {lo, hi};
    }

    if (data_.tets.empty()) return;
    Vec3 lo = data_.nodes.front();
    Vec3 hi = lo;
    for (const auto& p : data_.nodes) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    bbox_diag_ = norm(hi - lo);
    extent_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& [a, b] : tet_extent_) {
      extent_.first = std::min(extent_.first, a);
      extent_.second = std::max(extent_.second, b);
    }
  }

  MeshData data_;
  std::vector<double> volumes_;
  std::vector<std::pair<double, double>> tet_extent_;
  std::pair<double, double> extent_{0.0, 0.0};
  double total_volume_ = 0.0;
  double bbox_diag_ = 0.0;
};

/// Ice mass of the whole mesh, kg.
inline double total_mass(const IceMesh& mesh) { return mesh.density() * mesh.volume(); }

}  // namespace iceshed
