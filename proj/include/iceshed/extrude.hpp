#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/mesh.hpp"
#include "iceshed/polygon.hpp"
#include "iceshed/section.hpp"

namespace iceshed {

/// Quasi-3D ice shape: 2D sections at spanwise stations, blended linearly
/// between stations and swept along the span axis (+z).
struct ExtrusionSpec {
  std::vector<IceSection> sections;  // ordered by station radius
  std::size_t spanwise_cells = 1;    // prism layers per inter-station interval
  /// Arc-length resampling count applied to every section. When absent the
  /// sections must already have matching vertex counts.
  std::optional<std::size_t> resample_count;
  /// Span covered by a single-section spec (constant cross-section).
  std::optional<std::pair<double, double>> span;
};

namespace detail {

struct Layer {
  std::vector<Vec2> polygon;
  double z;
};

inline std::vector<Layer> extrusion_layers(const std::vector<IceSection>& sections,
                                           const ExtrusionSpec& spec) {
  std::vector<Layer> layers;
  const std::size_t cells = spec.spanwise_cells;
  if (sections.size() == 1) {
    if (!spec.span) throw GeometryError("single-section extrusion needs a span extent");
    const auto [lo, hi] = *spec.span;
    if (!(hi > lo)) throw GeometryError("extrusion span must have positive length");
    const auto poly = sections.front().polygon();
    for (std::size_t k = 0; k <= cells; ++k) {
      const double z = k == cells ? hi : lo + (hi - lo) * static_cast<double>(k) / cells;
      layers.push_back({poly, z});
    }
    return layers;
  }
  layers.push_back({sections.front().polygon(), sections.front().station_radius});
  for (std::size_t s = 0; s + 1 < sections.size(); ++s) {
    for (std::size_t k = 1; k <= cells; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(cells);
      auto blended = interpolate_section(sections[s], sections[s + 1], t);
      layers.push_back({blended.polygon(), blended.station_radius});
    }
  }
  return layers;
}

inline bool triangulation_fits(const std::vector<Triangle>& tris, const std::vector<Layer>& layers) {
  for (const auto& layer : layers) {
    const auto& p = layer.polygon;
    for (const auto& t : tris) {
      if (!(cross(p[t[1]] - p[t[0]], p[t[2]] - p[t[0]]) > 0.0)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Builds the tetrahedral ice mesh. Each prism layer is split into three
/// tets per cross-section triangle; quad diagonals run from the lower global
/// node id, so neighbouring prisms share faces exactly. Faces swept from
/// contact edges are labeled Adhesion; outer faces and both end caps are Flow.
inline IceMesh extrude(const ExtrusionSpec& spec, double density = kDefaultIceDensity) {
  if (spec.sections.empty()) throw GeometryError("extrusion needs at least one section");
  if (spec.spanwise_cells < 1) throw GeometryError("spanwise_cells must be at least 1");
  if (spec.resample_count && *spec.resample_count < 8)
    throw GeometryError("resample_count must be at least 8");
  for (std::size_t i = 0; i < spec.sections.size(); ++i) {
    check_section(spec.sections[i]);
    if (i > 0 && !(spec.sections[i].station_radius > spec.sections[i - 1].station_radius))
      throw GeometryError("section station radii must be strictly increasing");
  }

  std::vector<IceSection> sections;
  sections.reserve(spec.sections.size());
  for (const auto& s : spec.sections)
    sections.push_back(spec.resample_count ? resample_section(s, *spec.resample_count) : s);
  for (const auto& s : sections) {
    if (s.outer.size() != sections.front().outer.size() ||
        s.contact.size() != sections.front().contact.size())
      throw GeometryError("sections have different vertex counts; set a resample count");
    if (spec.resample_count) check_section(s);
  }

  const auto layers = detail::extrusion_layers(sections, spec);
  std::vector<Triangle> tris;
  for (const auto& s : sections) {
    auto candidate = triangulate(s.polygon());
    if (detail::triangulation_fits(candidate, layers)) {
      tris = std::move(candidate);
      break;
    }
  }
  if (tris.empty())
    throw GeometryError("triangulation failed: no station triangulation is valid along the span");

  const std::size_t m = sections.front().polygon_size();
  const std::size_t n_layers = layers.size();
  MeshData data;
  data.density = density;
  data.span_axis = {0.0, 0.0, 1.0};
  data.nodes.reserve(m * n_layers);
  for (const auto& layer : layers)
    for (const auto& p : layer.polygon) data.nodes.push_back({p.x, p.y, layer.z});

  data.tets.reserve(3 * tris.size() * (n_layers - 1));
  for (std::size_t k = 0; k + 1 < n_layers; ++k) {
    const std::size_t lo = k * m;
    const std::size_t hi = (k + 1) * m;
    for (auto t : tris) {
      std::sort(t.begin(), t.end());
      const auto [a, b, c] = t;
      data.tets.push_back({{lo + a, lo + b, lo + c, hi + c}});
      data.tets.push_back({{lo + a, lo + b, hi + b, hi + c}});
      data.tets.push_back({{lo + a, hi + a, hi + b, hi + c}});
    }
  }

  const auto& shape = sections.front();
  for (std::size_t k = 0; k + 1 < n_layers; ++k) {
    const std::size_t lo = k * m;
    const std::size_t hi = (k + 1) * m;
    for (std::size_t e = 0; e < m; ++e) {
      const std::size_t i = std::min(e, (e + 1) % m);
      const std::size_t j = std::max(e, (e + 1) % m);
      const FaceLabel label = shape.is_contact_edge(e) ? FaceLabel::Adhesion : FaceLabel::Flow;
      data.faces.push_back({{lo + i, lo + j, hi + j}, label});
      data.faces.push_back({{lo + i, hi + j, hi + i}, label});
    }
  }
  const std::size_t top = (n_layers - 1) * m;
  for (const auto& t : tris) {
    data.faces.push_back({{t[0], t[2], t[1]}, FaceLabel::Flow});
    data.faces.push_back({{top + t[0], top + t[1], top + t[2]}, FaceLabel::Flow});
  }

  return IceMesh::from_data(std::move(data));
}

// Manifest file:
//   spanwise_cells <n>
//   resample_count <n>     (optional)
//   span <lo> <hi>         (single-section manifests)
//   density <kg/m^3>       (optional)
//   section <path>         (one per station, relative to the manifest)
struct Manifest {
  ExtrusionSpec spec;
  std::optional<double> density;
};

inline Manifest read_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest '" + path + "'");
  const auto base = std::filesystem::path(path).parent_path();
  Manifest manifest;
  detail::LineReader reader(in);
  std::vector<std::string_view> tok;
  auto where = [&] { return path + ":" + std::to_string(reader.line_no()) + ": "; };
  while (reader.next(tok)) {
    if (tok[0] == "spanwise_cells" && tok.size() == 2) {
      manifest.spec.spanwise_cells = detail::parse_number<std::size_t>(tok[1], reader.line_no());
    } else if (tok[0] == "resample_count" && tok.size() == 2) {
      manifest.spec.resample_count = detail::parse_number<std::size_t>(tok[1], reader.line_no());
    } else if (tok[0] == "span" && tok.size() == 3) {
      manifest.spec.span = std::pair{detail::parse_number<double>(tok[1], reader.line_no()),
                                     detail::parse_number<double>(tok[2], reader.line_no())};
    } else if (tok[0] == "density" && tok.size() == 2) {
      manifest.density = detail::parse_number<double>(tok[1], reader.line_no());
    } else if (tok[0] == "section" && tok.size() == 2) {
      manifest.spec.sections.push_back(read_section_file((base / std::string(tok[1])).string()));
    } else {
      throw ParseError(where() + "unexpected '" + std::string(tok[0]) + "'");
    }
  }
  return manifest;
}

}  // namespace iceshed
