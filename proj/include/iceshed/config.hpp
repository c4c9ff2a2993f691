#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iceshed/error.hpp"
#include "iceshed/mesh_io.hpp"
#include "iceshed/shedding.hpp"
#include "iceshed/strength.hpp"

namespace iceshed {

/// Rotor geometry. Only radius and rpm enter the force balance; pitch, twist
/// and chord are carried into reports.
struct RotorConfig {
  double radius = 0.0;  // m
  double rpm = 0.0;
  double collective_pitch = 0.0;  // deg
  double twist = 0.0;             // deg
  double chord = 0.0;             // m

  [[nodiscard]] double omega() const { return rpm * 2.0 * std::numbers::pi / 60.0; }
};

struct StrengthSpec {
  CurveSpec cohesion;
  CurveSpec adhesion;
  TemperatureRange range;

  [[nodiscard]] StrengthModel model() const { return {cohesion, adhesion, range}; }
};

struct CaseConfig {
  RotorConfig rotor;
  double temperature = 0.0;   // C
  double accretion_dt = 0.0;  // s
  double density = kDefaultIceDensity;
  std::vector<std::string> steps;  // mesh files or section manifests
  StrengthSpec strength;
  SheddingConfig shedding;
  bool tolerance_set = false;  // false: z_tolerance = 1e-3 * radius
  std::vector<int> adhesion_tags{1};
  std::vector<int> flow_tags{2};
  std::map<std::string, std::string> annotations;

  [[nodiscard]] SheddingConfig effective_shedding() const {
    SheddingConfig cfg = shedding;
    if (!tolerance_set) cfg.z_tolerance = 1e-3 * rotor.radius;
    return cfg;
  }
  [[nodiscard]] MshTagMap tag_map() const {
    MshTagMap m;
    for (int t : adhesion_tags) m.labels[t] = FaceLabel::Adhesion;
    for (int t : flow_tags) m.labels[t] = FaceLabel::Flow;
    return m;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_number<double>(trim(v), 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  try {
    return parse_number<std::size_t>(trim(v), 0);
  } catch (const ParseError&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

inline CurveSpec to_curve(const std::string& prefix, const std::string& kind,
                          const std::vector<double>& c) {
  if (kind == "constant") return CurveSpec::constant(c.empty() ? 0.0 : c.front());
  if (kind == "polynomial") return CurveSpec::polynomial(c);
  if (kind == "table") {
    if (c.size() % 2 != 0) throw ConfigError(prefix + ".coeffs: table needs (T, value) pairs");
    std::vector<std::pair<double, double>> knots;
    for (std::size_t i = 0; i < c.size(); i += 2) knots.emplace_back(c[i], c[i + 1]);
    return CurveSpec::table(std::move(knots));
  }
  throw ConfigError(prefix + ".kind: expected constant, polynomial or table");
}

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ", ") + format_double(x);
  return out;
}

inline std::string curve_coeffs(const CurveSpec& c) {
  if (c.kind != CurveKind::Table) return join(c.coefficients);
  std::vector<double> flat;
  for (const auto& [t, v] : c.knots) {
    flat.push_back(t);
    flat.push_back(v);
  }
  return join(flat);
}

}  // namespace detail

/// Reads "key = value" lines. '#' starts a comment; keys may not repeat.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    auto key = detail::trim(std::string_view(body).substr(0, eq));
    auto value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return kv;
}

inline CaseConfig case_from_key_values(const std::map<std::string, std::string>& kv) {
  CaseConfig c;
  const StrengthModel defaults = StrengthModel::defaults();
  c.strength = {defaults.cohesion(), defaults.adhesion(), defaults.range()};

  auto required = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  };
  std::optional<std::string> coh_kind, adh_kind;
  std::optional<std::vector<double>> coh_coeffs, adh_coeffs;

  for (const auto& [key, value] : kv) {
    using namespace detail;
    if (key == "rotor.radius") c.rotor.radius = to_double(key, value);
    else if (key == "rotor.rpm") c.rotor.rpm = to_double(key, value);
    else if (key == "rotor.collective_pitch") c.rotor.collective_pitch = to_double(key, value);
    else if (key == "rotor.twist") c.rotor.twist = to_double(key, value);
    else if (key == "rotor.chord") c.rotor.chord = to_double(key, value);
    else if (key == "temperature") c.temperature = to_double(key, value);
    else if (key == "accretion_dt") c.accretion_dt = to_double(key, value);
    else if (key == "density") c.density = to_double(key, value);
    else if (key == "steps") c.steps = split_list(value);
    else if (key == "strength.cohesion.kind") coh_kind = value;
    else if (key == "strength.cohesion.coeffs") coh_coeffs = to_doubles(key, value);
    else if (key == "strength.adhesion.kind") adh_kind = value;
    else if (key == "strength.adhesion.coeffs") adh_coeffs = to_doubles(key, value);
    else if (key == "strength.range") {
      const auto r = to_doubles(key, value);
      if (r.size() != 2) throw ConfigError("strength.range: expected 'min, max'");
      c.strength.range = {r[0], r[1]};
    } else if (key == "shedding.n_subdivisions") c.shedding.n_subdivisions = to_count(key, value);
    else if (key == "shedding.z_tolerance") {
      c.shedding.z_tolerance = to_double(key, value);
      c.tolerance_set = true;
    } else if (key == "shedding.max_refinements") c.shedding.max_refinements = to_count(key, value);
    else if (key == "shedding.criterion") {
      if (value == "sum") c.shedding.criterion = Criterion::SumResistance;
      else if (value == "either") c.shedding.criterion = Criterion::EitherResistance;
      else throw ConfigError("shedding.criterion: expected sum or either");
    } else if (key == "shedding.force_fit") c.shedding.force_fit = to_bool(key, value);
    else if (key == "mesh.adhesion_tags" || key == "mesh.flow_tags") {
      std::vector<int> tags;
      for (double t : to_doubles(key, value)) tags.push_back(static_cast<int>(t));
      (key == "mesh.adhesion_tags" ? c.adhesion_tags : c.flow_tags) = tags;
    } else if (key.starts_with("annotations.") && key.size() > 12) c.annotations[key.substr(12)] = value;
    else throw ConfigError("unknown key '" + key + "'");
  }

  if (coh_kind || coh_coeffs) {
    if (!coh_kind || !coh_coeffs)
      throw ConfigError("strength.cohesion needs both kind and coeffs");
    c.strength.cohesion = detail::to_curve("strength.cohesion", *coh_kind, *coh_coeffs);
  }
  if (adh_kind || adh_coeffs) {
    if (!adh_kind || !adh_coeffs)
      throw ConfigError("strength.adhesion needs both kind and coeffs");
    c.strength.adhesion = detail::to_curve("strength.adhesion", *adh_kind, *adh_coeffs);
  }

  required("rotor.radius");
  required("rotor.rpm");
  required("temperature");
  required("accretion_dt");
  required("steps");
  if (!(c.rotor.radius > 0.0)) throw ConfigError("rotor.radius must be positive");
  if (!(c.rotor.rpm >= 0.0)) throw ConfigError("rotor.rpm must not be negative");
  if (!(c.accretion_dt > 0.0)) throw ConfigError("accretion_dt must be positive");
  if (!(c.density > 0.0)) throw ConfigError("density must be positive");
  if (c.steps.empty()) throw ConfigError("steps must list at least one step");
  c.effective_shedding().check();
  const auto model = c.strength.model();
  if (!model.range().contains(c.temperature))
    throw ConfigError("temperature lies outside the strength model's valid range");
  return c;
}

inline CaseConfig parse_case(std::istream& in) { return case_from_key_values(parse_key_values(in)); }

inline CaseConfig load_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open case file '" + path + "'");
  try {
    return parse_case(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Canonical "key = value" text; parsing it yields the same configuration.
inline std::string serialize_case(const CaseConfig& c) {
  using detail::format_double;
  std::ostringstream out;
  out << "rotor.radius = " << format_double(c.rotor.radius) << '\n'
      << "rotor.rpm = " << format_double(c.rotor.rpm) << '\n'
      << "rotor.collective_pitch = " << format_double(c.rotor.collective_pitch) << '\n'
      << "rotor.twist = " << format_double(c.rotor.twist) << '\n'
      << "rotor.chord = " << format_double(c.rotor.chord) << '\n'
      << "temperature = " << format_double(c.temperature) << '\n'
      << "accretion_dt = " << format_double(c.accretion_dt) << '\n'
      << "density = " << format_double(c.density) << '\n';
  out << "steps = ";
  for (std::size_t i = 0; i < c.steps.size(); ++i) out << (i ? ", " : "") << c.steps[i];
  out << '\n';
  out << "strength.cohesion.kind = " << to_string(c.strength.cohesion.kind) << '\n'
      << "strength.cohesion.coeffs = " << detail::curve_coeffs(c.strength.cohesion) << '\n'
      << "strength.adhesion.kind = " << to_string(c.strength.adhesion.kind) << '\n'
      << "strength.adhesion.coeffs = " << detail::curve_coeffs(c.strength.adhesion) << '\n'
      << "strength.range = " << format_double(c.strength.range.min) << ", "
      << format_double(c.strength.range.max) << '\n';
  out << "shedding.n_subdivisions = " << c.shedding.n_subdivisions << '\n';
  if (c.tolerance_set) out << "shedding.z_tolerance = " << format_double(c.shedding.z_tolerance) << '\n';
  out << "shedding.max_refinements = " << c.shedding.max_refinements << '\n'
      << "shedding.criterion = " << to_string(c.shedding.criterion) << '\n'
      << "shedding.force_fit = " << (c.shedding.force_fit ? "true" : "false") << '\n';
  auto tags = [](const std::vector<int>& v) {
    std::string s;
    for (int t : v) s += (s.empty() ? "" : ", ") + std::to_string(t);
    return s;
  };
  out << "mesh.adhesion_tags = " << tags(c.adhesion_tags) << '\n'
      << "mesh.flow_tags = " << tags(c.flow_tags) << '\n';
  for (const auto& [k, v] : c.annotations) out << "annotations." << k << " = " << v << '\n';
  return out.str();
}

}  // namespace iceshed
