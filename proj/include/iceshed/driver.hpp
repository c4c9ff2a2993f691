#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "iceshed/config.hpp"
#include "iceshed/error.hpp"
#include "iceshed/extrude.hpp"
#include "iceshed/forces.hpp"
#include "iceshed/mesh_io.hpp"
#include "iceshed/shedding.hpp"

namespace iceshed {

struct StepReport {
  std::size_t step = 0;  // 1-based accretion step
  double time = 0.0;     // s
  double ice_mass = 0.0; // kg
  SheddingResult result;
  ForceCurve curve;

  [[nodiscard]] std::string csv_name() const {
    return "step_" + std::to_string(step) + "_forces.csv";
  }
};

struct RunReport {
  CaseConfig config;
  double omega = 0.0;
  double cohesion_strength = 0.0;
  double adhesion_strength = 0.0;
  bool timed = true;  // false for single-mesh analysis
  std::vector<StepReport> steps;
  std::optional<double> shed_time;      // s
  std::optional<double> shed_location;  // z_s / R
  std::optional<double> shed_z;         // m
};

/// Builds the ice mesh for step k (1-based).
using MeshProvider = std::function<IceMesh(std::size_t)>;

/// Loads a step source: ".manifest" files go through the quasi-3D extruder,
/// anything else is read as a mesh file (".msh" as MSH 2.2).
inline IceMesh load_step_source(const std::filesystem::path& path, const CaseConfig& config) {
  if (path.extension() == ".manifest") {
    const auto manifest = read_manifest_file(path.string());
    return extrude(manifest.spec, manifest.density.value_or(config.density));
  }
  return load_mesh_file(path.string(), config.density, config.tag_map());
}

/// Uniform profile planes over the mesh span: the root end, the tip end and
/// n_subdivisions - 1 interior planes.
inline std::vector<double> profile_planes(const IceMesh& mesh, std::size_t n_subdivisions) {
  if (mesh.empty()) return {};
  const auto [lo, hi] = mesh.span_extent();
  return detail::subdivide(lo, hi, n_subdivisions);
}

inline StepReport analyze_step(const IceMesh& mesh, std::size_t step, const RunReport& run,
                               const SheddingConfig& cfg) {
  StepReport s;
  s.step = step;
  s.time = static_cast<double>(step) * run.config.accretion_dt;
  s.ice_mass = total_mass(mesh);
  s.curve.omega = run.omega;
  s.curve.temperature = run.config.temperature;
  const auto planes = profile_planes(mesh, cfg.n_subdivisions);
  if (!planes.empty())
    s.curve = force_profile(mesh, planes, run.omega, run.config.strength.model(),
                            run.config.temperature);
  MeshForceSampler sampler(mesh, run.omega, run.cohesion_strength, run.adhesion_strength);
  s.result = find_shedding(sampler, cfg);
  return s;
}

inline RunReport prepare_run(const CaseConfig& config) {
  RunReport run;
  run.config = config;
  run.omega = config.rotor.omega();
  const auto model = config.strength.model();
  run.cohesion_strength = model.cohesion_strength(config.temperature);
  run.adhesion_strength = model.adhesion_strength(config.temperature);
  return run;
}

/// Evaluates accretion steps in order and stops at the first one that sheds;
/// later steps are never built.
inline RunReport run_multistep(const CaseConfig& config, const MeshProvider& provider) {
  RunReport run = prepare_run(config);
  const auto cfg = config.effective_shedding();
  for (std::size_t k = 1; k <= config.steps.size(); ++k) {
    IceMesh mesh;
    try {
      mesh = provider(k);
    } catch (const InputError& e) {
      throw InputError("step " + std::to_string(k) + ": " + e.what());
    }
    run.steps.push_back(analyze_step(mesh, k, run, cfg));
    const auto& r = run.steps.back().result;
    if (r.shed) {
      run.shed_time = run.steps.back().time;
      run.shed_z = r.z_s;
      run.shed_location = *r.z_s / config.rotor.radius;
      break;
    }
  }
  return run;
}

/// Step sources are resolved relative to `base_dir`.
inline RunReport run_multistep(const CaseConfig& config, const std::filesystem::path& base_dir) {
  return run_multistep(config, [&](std::size_t k) {
    return load_step_source(base_dir / config.steps[k - 1], config);
  });
}

/// Single-mesh analysis: one untimed step.
inline RunReport analyze_mesh(const IceMesh& mesh, const CaseConfig& config) {
  RunReport run = prepare_run(config);
  run.timed = false;
  run.steps.push_back(analyze_step(mesh, 1, run, config.effective_shedding()));
  const auto& r = run.steps.back().result;
  if (r.shed) {
    run.shed_z = r.z_s;
    run.shed_location = *r.z_s / config.rotor.radius;
  }
  return run;
}

namespace detail {

/// Minimal streaming JSON writer; numbers at 17 significant digits.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& k) {
    separate();
    string_literal(k);
    out_ << ": ";
    after_key_ = true;
  }
  void value(double v) {
    separate();
    if (std::isfinite(v)) {
      out_ << format_double(v);
    } else {
      out_ << "null";
    }
  }
  void value(std::size_t v) {
    separate();
    out_ << v;
  }
  void value(bool v) {
    separate();
    out_ << (v ? "true" : "false");
  }
  void value(const std::string& v) {
    separate();
    string_literal(v);
  }
  void value(const char* v) { value(std::string(v)); }
  void value(std::optional<double> v) {
    if (v) {
      value(*v);
    } else {
      separate();
      out_ << "null";
    }
  }
  template <class T>
  void field(const std::string& k, const T& v) {
    key(k);
    value(v);
  }

 private:
  void separate() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) out_ << ',';
      first_.back() = false;
      newline();
    }
  }
  void open(char c) {
    separate();
    out_ << c;
    first_.push_back(true);
  }
  void close(char c) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ << c;
    if (first_.empty()) out_ << '\n';
  }
  void newline() { out_ << '\n' << std::string(2 * first_.size(), ' '); }
  void string_literal(const std::string& s) {
    out_ << '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ << "\\\""; break;
        case '\\': out_ << "\\\\"; break;
        case '\n': out_ << "\\n"; break;
        case '\t': out_ << "\\t"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", ch);
            out_ << buf;
          } else {
            out_ << ch;
          }
      }
    }
    out_ << '"';
  }

  std::ostream& out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

inline void write_sample(JsonWriter& w, const ForceSample& s) {
  w.field("z_m", s.z);
  w.field("F_centrifugal_N", s.centrifugal);
  w.field("F_cohesion_N", s.cohesion);
  w.field("F_adhesion_N", s.adhesion);
}

}  // namespace detail

inline void write_report(std::ostream& out, const RunReport& run) {
  detail::JsonWriter w(out);
  const auto& c = run.config;
  const double radius = c.rotor.radius;
  w.begin_object();
  w.field("shed", run.shed_location.has_value());
  if (run.timed) w.field("shed_time_s", run.shed_time);
  w.field("z_s_m", run.shed_z);
  w.field("z_s_over_R", run.shed_location);

  w.key("rotor");
  w.begin_object();
  w.field("radius_m", c.rotor.radius);
  w.field("rpm", c.rotor.rpm);
  w.field("collective_pitch_deg", c.rotor.collective_pitch);
  w.field("twist_deg", c.rotor.twist);
  w.field("chord_m", c.rotor.chord);
  w.end_object();

  w.field("omega_rad_s", run.omega);
  w.field("temperature_C", c.temperature);
  if (run.timed) w.field("accretion_dt_s", c.accretion_dt);
  w.field("density_kg_m3", c.density);
  w.field("cohesion_strength_Pa", run.cohesion_strength);
  w.field("adhesion_strength_Pa", run.adhesion_strength);
  const auto cfg = c.effective_shedding();
  w.key("shedding");
  w.begin_object();
  w.field("criterion", to_string(cfg.criterion));
  w.field("n_subdivisions", cfg.n_subdivisions);
  w.field("z_tolerance_m", cfg.z_tolerance);
  w.field("max_refinements", cfg.max_refinements);
  w.field("force_fit", cfg.force_fit);
  w.end_object();

  w.key("annotations");
  w.begin_object();
  for (const auto& [k, v] : c.annotations) w.field(k, v);
  w.end_object();

  w.key("steps");
  w.begin_array();
  for (const auto& s : run.steps) {
    const auto& r = s.result;
    w.begin_object();
    w.field("step", s.step);
    if (run.timed) w.field("time_s", s.time);
    w.field("shed", r.shed);
    w.field("z_s_m", r.z_s);
    w.field("z_s_over_R", r.z_s ? std::optional<double>(*r.z_s / radius) : std::nullopt);
    w.field("shed_mass_kg", r.shed_mass);
    w.field("fallback_used", r.fallback_used);
    w.field("ice_mass_kg", s.ice_mass);
    w.field("force_curve", s.csv_name());
    w.key("root_forces");
    w.begin_object();
    if (!s.curve.samples.empty()) detail::write_sample(w, s.curve.samples.front());
    w.end_object();
    w.key("iterations");
    w.begin_array();
    for (const auto& it : r.iterations) {
      w.begin_object();
      w.field("z_lo_m", it.z_lo);
      w.field("z_hi_m", it.z_hi);
      w.field("outcome", to_string(it.outcome));
      w.field("candidate_m", it.candidate);
      w.key("planes");
      w.begin_array();
      for (const auto& p : it.planes) {
        w.begin_object();
        detail::write_sample(w, p.forces);
        w.field("shed", p.shed);
        w.end_object();
      }
      w.end_array();
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

/// Writes report.json and one step_<k>_forces.csv per evaluated step.
inline std::vector<std::filesystem::path> emit_report(const RunReport& run,
                                                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir.string() + "'");
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    written.push_back(p);
    return f;
  };
  for (const auto& s : run.steps) {
    auto f = open(out_dir / s.csv_name());
    write_csv(f, s.curve);
  }
  auto f = open(out_dir / "report.json");
  write_report(f, run);
  return written;
}

}  // namespace iceshed
