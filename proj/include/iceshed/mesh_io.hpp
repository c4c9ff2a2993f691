#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/mesh.hpp"

namespace iceshed {

enum class MeshFormat { Native, Msh22 };

/// Physical-tag mapping for MSH triangles. Triangles whose physical tag is
/// not listed are rejected.
struct MshTagMap {
  std::map<int, FaceLabel> labels;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(token) +
                     "'");
  return value;
}

/// Reads non-empty, comment-stripped lines with their 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, buf_)) {
      ++line_no_;
      tokens = split_ws(strip_comment(buf_));
      if (!tokens.empty()) return true;
    }
    return false;
  }
  [[nodiscard]] std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_no_ = 0;
};

inline MeshData parse_native(std::istream& in) {
  MeshData data;
  LineReader reader(in);
  std::vector<std::string_view> tok;
  bool seen_nodes = false, seen_tets = false, seen_faces = false;

  auto expect_count = [&](std::string_view keyword) -> std::size_t {
    if (tok.size() != 2)
      throw ParseError("line " + std::to_string(reader.line_no()) + ": expected '" +
                       std::string(keyword) + " <count>'");
    return parse_number<std::size_t>(tok[1], reader.line_no());
  };
  auto read_id = [&](std::size_t count, std::vector<bool>& seen) {
    const auto id = parse_number<std::size_t>(tok[0], reader.line_no());
    if (id >= count || seen[id])
      throw ParseError("line " + std::to_string(reader.line_no()) + ": id " + std::to_string(id) +
                       " is out of order, duplicated or out of range");
    seen[id] = true;
    return id;
  };
  auto need = [&](std::size_t n) {
    if (!reader.next(tok)) throw ParseError("unexpected end of file");
    if (tok.size() != n)
      throw ParseError("line " + std::to_string(reader.line_no()) + ": expected " +
                       std::to_string(n) + " fields");
  };

  while (reader.next(tok)) {
    if (tok[0] == "NODES" && !seen_nodes) {
      seen_nodes = true;
      const auto n = expect_count("NODES");
      data.nodes.resize(n);
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        need(4);
        const auto id = read_id(n, seen);
        data.nodes[id] = {parse_number<double>(tok[1], reader.line_no()),
                          parse_number<double>(tok[2], reader.line_no()),
                          parse_number<double>(tok[3], reader.line_no())};
      }
    } else if (tok[0] == "TETS" && !seen_tets) {
      seen_tets = true;
      const auto m = expect_count("TETS");
      data.tets.resize(m);
      std::vector<bool> seen(m, false);
      for (std::size_t i = 0; i < m; ++i) {
        need(5);
        const auto id = read_id(m, seen);
        for (int k = 0; k < 4; ++k)
          data.tets[id].nodes[k] = parse_number<std::size_t>(tok[1 + k], reader.line_no());
      }
    } else if (tok[0] == "FACES" && !seen_faces) {
      seen_faces = true;
      const auto k = expect_count("FACES");
      data.faces.resize(k);
      std::vector<bool> seen(k, false);
      for (std::size_t i = 0; i < k; ++i) {
        need(5);
        const auto id = read_id(k, seen);
        for (int c = 0; c < 3; ++c)
          data.faces[id].nodes[c] = parse_number<std::size_t>(tok[1 + c], reader.line_no());
        if (tok[4] == "adhesion") {
          data.faces[id].label = FaceLabel::Adhesion;
        } else if (tok[4] == "flow") {
          data.faces[id].label = FaceLabel::Flow;
        } else {
          throw ParseError("line " + std::to_string(reader.line_no()) + ": unknown face label '" +
                           std::string(tok[4]) + "'");
        }
      }
    } else {
      throw ParseError("line " + std::to_string(reader.line_no()) + ": unexpected '" +
                       std::string(tok[0]) + "'");
    }
  }
  if (!seen_nodes || !seen_tets || !seen_faces)
    throw ParseError("mesh file must contain NODES, TETS and FACES sections");
  return data;
}

inline MeshData parse_msh22(std::istream& in, const MshTagMap& tags) {
  MeshData data;
  std::string line;
  std::size_t line_no = 0;
  auto getline = [&]() -> std::string_view {
    if (!std::getline(in, line)) throw ParseError("unexpected end of MSH file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  std::map<long long, std::size_t> node_index;
  std::vector<std::array<long long, 4>> raw_tets;
  std::vector<std::pair<std::array<long long, 3>, FaceLabel>> raw_faces;
  bool seen_format = false, seen_nodes = false, seen_elements = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      auto tok = split_ws(getline());
      if (tok.empty() || tok[0].substr(0, 2) != "2.")
        throw ParseError("only MSH 2.x ASCII files are supported");
      if (tok.size() < 2 || tok[1] != "0") throw ParseError("binary MSH files are not supported");
      if (getline() != "$EndMeshFormat") throw ParseError("missing $EndMeshFormat");
      seen_format = true;
    } else if (line == "$Nodes") {
      const auto n = parse_number<std::size_t>(getline(), line_no);
      for (std::size_t i = 0; i < n; ++i) {
        auto tok = split_ws(getline());
        if (tok.size() != 4) throw ParseError("line " + std::to_string(line_no) + ": bad node");
        const auto id = parse_number<long long>(tok[0], line_no);
        if (!node_index.emplace(id, data.nodes.size()).second)
          throw ParseError("line " + std::to_string(line_no) + ": duplicate node id");
        data.nodes.push_back({parse_number<double>(tok[1], line_no),
                              parse_number<double>(tok[2], line_no),
                              parse_number<double>(tok[3], line_no)});
      }
      if (getline() != "$EndNodes") throw ParseError("missing $EndNodes");
      seen_nodes = true;
    } else if (line == "$Elements") {
      const auto m = parse_number<std::size_t>(getline(), line_no);
      for (std::size_t i = 0; i < m; ++i) {
        auto tok = split_ws(getline());
        if (tok.size() < 3) throw ParseError("line " + std::to_string(line_no) + ": bad element");
        const int type = parse_number<int>(tok[1], line_no);
        const auto ntags = parse_number<std::size_t>(tok[2], line_no);
        const std::size_t first_node = 3 + ntags;
        const std::size_t expected = type == 4 ? 4 : type == 2 ? 3 : 0;
        if (expected == 0) continue;
        if (tok.size() != first_node + expected)
          throw ParseError("line " + std::to_string(line_no) + ": bad element node count");
        if (type == 4) {
          std::array<long long, 4> ids{};
          for (std::size_t k = 0; k < 4; ++k) ids[k] = parse_number<long long>(tok[first_node + k], line_no);
          raw_tets.push_back(ids);
        } else {
          if (ntags == 0)
            throw ParseError("line " + std::to_string(line_no) + ": triangle has no physical tag");
          const int physical = parse_number<int>(tok[3], line_no);
          auto it = tags.labels.find(physical);
          if (it == tags.labels.end())
            throw ParseError("line " + std::to_string(line_no) + ": physical tag " +
                             std::to_string(physical) + " has no face label mapping");
          std::array<long long, 3> ids{};
          for (std::size_t k = 0; k < 3; ++k) ids[k] = parse_number<long long>(tok[first_node + k], line_no);
          raw_faces.emplace_back(ids, it->second);
        }
      }
      if (getline() != "$EndElements") throw ParseError("missing $EndElements");
      seen_elements = true;
    } else if (line.front() == '$') {
      const std::string end = "$End" + line.substr(1);
      std::string skip;
      while (true) {
        if (!std::getline(in, skip)) throw ParseError("unterminated section " + line);
        ++line_no;
        if (!skip.empty() && skip.back() == '\r') skip.pop_back();
        if (skip == end) break;
      }
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unexpected content");
    }
  }
  if (!seen_format || !seen_nodes || !seen_elements)
    throw ParseError("MSH file must contain $MeshFormat, $Nodes and $Elements");

  auto lookup = [&](long long id) {
    auto it = node_index.find(id);
    if (it == node_index.end())
      throw TopologyError("element references missing node " + std::to_string(id));
    return it->second;
  };
  // Geometry points and curve nodes that no tet uses are dropped.
  std::vector<std::size_t> remap(data.nodes.size(), SIZE_MAX);
  std::vector<Vec3> kept;
  auto keep = [&](std::size_t idx) {
    if (remap[idx] == SIZE_MAX) {
      remap[idx] = kept.size();
      kept.push_back(data.nodes[idx]);
    }
    return remap[idx];
  };
  for (const auto& ids : raw_tets) {
    Tetrahedron t;
    for (int k = 0; k < 4; ++k) t.nodes[k] = keep(lookup(ids[k]));
    data.tets.push_back(t);
  }
  for (const auto& [ids, label] : raw_faces) {
    BoundaryFace f;
    f.label = label;
    for (int k = 0; k < 3; ++k) {
      const auto idx = lookup(ids[k]);
      if (remap[idx] == SIZE_MAX) throw TopologyError("labeled triangle is not on any tet");
      f.nodes[k] = remap[idx];
    }
    data.faces.push_back(f);
  }
  data.nodes = std::move(kept);
  return data;
}

}  // namespace detail

/// Parses and validates a mesh. Tets are reoriented to positive volume.
inline IceMesh load_mesh(std::istream& source, MeshFormat format,
                         double density = kDefaultIceDensity, const MshTagMap& tags = {}) {
  MeshData data = format == MeshFormat::Native ? detail::parse_native(source)
                                               : detail::parse_msh22(source, tags);
  data.density = density;
  return IceMesh::from_data(std::move(data));
}

inline MeshFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".msh") return MeshFormat::Msh22;
  return MeshFormat::Native;
}

inline IceMesh load_mesh_file(const std::string& path, double density = kDefaultIceDensity,
                              const MshTagMap& tags = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file '" + path + "'");
  try {
    return load_mesh(in, format_from_path(path), density, tags);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_native(std::ostream& out, const MeshData& mesh) {
  out << "NODES " << mesh.nodes.size() << '\n';
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& p = mesh.nodes[i];
    out << i << ' ' << detail::format_double(p.x) << ' ' << detail::format_double(p.y) << ' '
        << detail::format_double(p.z) << '\n';
  }
  out << "TETS " << mesh.tets.size() << '\n';
  for (std::size_t i = 0; i < mesh.tets.size(); ++i) {
    const auto& n = mesh.tets[i].nodes;
    out << i << ' ' << n[0] << ' ' << n[1] << ' ' << n[2] << ' ' << n[3] << '\n';
  }
  out << "FACES " << mesh.faces.size() << '\n';
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    out << i << ' ' << f.nodes[0] << ' ' << f.nodes[1] << ' ' << f.nodes[2] << ' '
        << to_string(f.label) << '\n';
  }
}

}  // namespace iceshed
