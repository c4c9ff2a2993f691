#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/mesh_io.hpp"
#include "iceshed/polygon.hpp"
#include "iceshed/vec.hpp"

namespace iceshed {

/// A 2D ice cross-section at one spanwise station, in the airfoil-local
/// frame (meters).
///
/// `outer` runs along the ice/air surface from one end of the contact arc to
/// the other. `contact` runs along the ice/blade interface from
/// `outer.back()` back to `outer.front()`. Together they close a simple
/// counterclockwise polygon.
struct IceSection {
  std::vector<Vec2> outer;
  std::vector<Vec2> contact;
  double station_radius = 0.0;

  [[nodiscard]] std::size_t polygon_size() const { return outer.size() + contact.size() - 2; }

  /// Closed polygon: all outer vertices, then the interior contact vertices.
  [[nodiscard]] std::vector<Vec2> polygon() const {
    std::vector<Vec2> poly(outer);
    poly.insert(poly.end(), contact.begin() + 1, contact.end() - 1);
    return poly;
  }

  /// True if polygon edge `i` (from vertex i to i+1) lies on the contact arc.
  [[nodiscard]] bool is_contact_edge(std::size_t i) const { return i + 1 >= outer.size(); }

  [[nodiscard]] double area() const { return signed_area(polygon()); }
};

/// Throws GeometryError when the section violates its invariants.
inline void check_section(const IceSection& s) {
  if (s.outer.size() < 2 || s.contact.size() < 2)
    throw GeometryError("section needs at least 2 outer and 2 contact points");
  if (!(s.station_radius > 0.0) || !std::isfinite(s.station_radius))
    throw GeometryError("station radius must be positive");
  if (s.contact.front() != s.outer.back() || s.contact.back() != s.outer.front())
    throw GeometryError("contact arc must run from the last outer point to the first");
  if (s.polygon_size() < 3) throw GeometryError("section polygon has fewer than 3 vertices");
  const auto poly = s.polygon();
  if (!is_simple(poly)) throw GeometryError("section polygon is not simple");
  if (!(signed_area(poly) > 0.0)) throw GeometryError("section polygon is not counterclockwise");
}

/// Arc-length resampling of both arcs to `count` vertices each; the shared
/// endpoints are preserved.
inline IceSection resample_section(const IceSection& section, std::size_t count) {
  if (count < 8) throw GeometryError("resample count must be at least 8");
  IceSection out;
  out.outer = resample_polyline(section.outer, count);
  out.contact = resample_polyline(section.contact, count);
  out.station_radius = section.station_radius;
  return out;
}

/// Vertex-wise linear blend of two sections with matching vertex counts.
/// t = 0 and t = 1 return copies of the inputs.
inline IceSection interpolate_section(const IceSection& a, const IceSection& b, double t) {
  if (a.outer.size() != b.outer.size() || a.contact.size() != b.contact.size())
    throw GeometryError("cannot interpolate sections with different vertex counts");
  if (!(t >= 0.0 && t <= 1.0)) throw GeometryError("interpolation fraction must lie in [0, 1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  auto blend = [t](const std::vector<Vec2>& p, const std::vector<Vec2>& q) {
    std::vector<Vec2> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = (1.0 - t) * p[i] + t * q[i];
    return out;
  };
  IceSection out;
  out.outer = blend(a.outer, b.outer);
  out.contact = blend(a.contact, b.contact);
  // Shared endpoints must stay bit-identical after blending.
  out.contact.front() = out.outer.back();
  out.contact.back() = out.outer.front();
  out.station_radius = (1.0 - t) * a.station_radius + t * b.station_radius;
  return out;
}

// Section file:
//   station_radius <r>
//   outer <n>      followed by n lines "x y" (or "x,y")
//   contact <k>    followed by k lines "x y"
inline IceSection read_section(std::istream& in) {
  IceSection s;
  detail::LineReader reader(in);
  std::vector<std::string_view> tok;
  bool have_radius = false, have_outer = false, have_contact = false;

  auto read_points = [&](std::vector<Vec2>& pts) {
    if (tok.size() != 2)
      throw ParseError("line " + std::to_string(reader.line_no()) + ": expected '<name> <count>'");
    const auto n = detail::parse_number<std::size_t>(tok[1], reader.line_no());
    pts.resize(n);
    for (auto& p : pts) {
      if (!reader.next(tok)) throw ParseError("unexpected end of section file");
      if (tok.size() == 1) {
        const auto comma = tok[0].find(',');
        if (comma == std::string_view::npos)
          throw ParseError("line " + std::to_string(reader.line_no()) + ": expected x,y");
        tok = {tok[0].substr(0, comma), tok[0].substr(comma + 1)};
      } else if (tok.size() == 2 && tok[0].ends_with(',')) {
        tok[0].remove_suffix(1);
      }
      if (tok.size() != 2)
        throw ParseError("line " + std::to_string(reader.line_no()) + ": expected x y");
      p = {detail::parse_number<double>(tok[0], reader.line_no()),
           detail::parse_number<double>(tok[1], reader.line_no())};
    }
  };

  while (reader.next(tok)) {
    if (tok[0] == "station_radius" && tok.size() == 2) {
      s.station_radius = detail::parse_number<double>(tok[1], reader.line_no());
      have_radius = true;
    } else if (tok[0] == "outer") {
      read_points(s.outer);
      have_outer = true;
    } else if (tok[0] == "contact") {
      read_points(s.contact);
      have_contact = true;
    } else {
      throw ParseError("line " + std::to_string(reader.line_no()) + ": unexpected '" +
                       std::string(tok[0]) + "'");
    }
  }
  if (!have_radius || !have_outer || !have_contact)
    throw ParseError("section file needs station_radius, outer and contact");
  check_section(s);
  return s;
}

inline IceSection read_section_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open section file '" + path + "'");
  try {
    return read_section(in);
  } catch (const InputError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_section(std::ostream& out, const IceSection& s) {
  out << "station_radius " << detail::format_double(s.station_radius) << '\n';
  out << "outer " << s.outer.size() << '\n';
  for (const auto& p : s.outer)
    out << detail::format_double(p.x) << ' ' << detail::format_double(p.y) << '\n';
  out << "contact " << s.contact.size() << '\n';
  for (const auto& p : s.contact)
    out << detail::format_double(p.x) << ' ' << detail::format_double(p.y) << '\n';
}

/// Rectangular section of width `w` along the contact (x) and thickness `h`,
/// contact arc on y = 0.
inline IceSection rectangle_section(double w, double h, double station_radius) {
  IceSection s;
  s.outer = {{w, 0.0}, {w, h}, {0.0, h}, {0.0, 0.0}};
  s.contact = {{0.0, 0.0}, {w, 0.0}};
  s.station_radius = station_radius;
  return s;
}

}  // namespace iceshed
