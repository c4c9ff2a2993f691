// Command-line front end: multi-step runs, single-mesh analysis and extrusion.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "iceshed/iceshed.hpp"

namespace {

using namespace iceshed;

struct Overrides {
  std::optional<std::string> criterion;
  std::optional<double> tolerance;

  void apply(CaseConfig& c) const {
    if (criterion) {
      if (*criterion == "sum") {
        c.shedding.criterion = Criterion::SumResistance;
      } else if (*criterion == "either") {
        c.shedding.criterion = Criterion::EitherResistance;
      } else {
        throw ConfigError("--criterion must be 'sum' or 'either'");
      }
    }
    if (tolerance) {
      c.shedding.z_tolerance = *tolerance;
      c.tolerance_set = true;
    }
    c.effective_shedding().check();
  }
};

void summarize(const RunReport& run, const std::filesystem::path& out) {
  if (run.shed_location) {
    std::printf("shed at z = %.6g m (%.4f R)", *run.shed_z, *run.shed_location);
    if (run.shed_time) std::printf(", t = %.6g s", *run.shed_time);
    std::printf("\n");
  } else {
    std::printf("no shedding over %zu step(s)\n", run.steps.size());
  }
  std::printf("report written to %s\n", (out / "report.json").string().c_str());
}

int cmd_run(const std::string& case_path, const std::string& out, const Overrides& ov) {
  auto config = load_case_file(case_path);
  ov.apply(config);
  const auto base = std::filesystem::path(case_path).parent_path();
  const auto run = run_multistep(config, base);
  emit_report(run, out);
  summarize(run, out);
  return 0;
}

struct AnalyzeArgs {
  std::string mesh;
  double rpm = 0.0;
  double temp = 0.0;
  std::string out;
  std::optional<double> radius;
  std::optional<std::string> config;
  std::optional<double> density;
};

int cmd_analyze(const AnalyzeArgs& a, const Overrides& ov) {
  CaseConfig config;
  if (a.config) {
    config = load_case_file(*a.config);
  } else {
    const auto d = StrengthModel::defaults();
    config.strength = {d.cohesion(), d.adhesion(), d.range()};
  }
  config.rotor.rpm = a.rpm;
  config.temperature = a.temp;
  if (a.density) config.density = *a.density;
  if (!(config.density > 0.0)) throw ConfigError("density must be positive");
  if (config.rotor.rpm < 0.0) throw ConfigError("rpm must be non-negative");
  const auto mesh = load_mesh_file(a.mesh, config.density, config.tag_map());
  if (a.radius) {
    config.rotor.radius = *a.radius;
  } else if (!a.config) {
    config.rotor.radius = mesh.span_extent().second;
  }
  if (!(config.rotor.radius > 0.0)) throw ConfigError("rotor radius must be positive (use --radius)");
  ov.apply(config);
  const auto run = analyze_mesh(mesh, config);
  emit_report(run, a.out);
  summarize(run, a.out);
  return 0;
}

int cmd_extrude(const std::string& manifest_path, const std::string& out) {
  const auto manifest = read_manifest_file(manifest_path);
  const auto mesh = extrude(manifest.spec, manifest.density.value_or(kDefaultIceDensity));
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + out + "'");
  write_native(f, mesh.data());
  std::printf("%zu nodes, %zu tets, %zu boundary faces, volume %.17g m^3\n", mesh.nodes().size(),
              mesh.tets().size(), mesh.boundary().size(), mesh.volume());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ice shedding prediction for rotating blades"};
  app.require_subcommand(1);

  Overrides ov;
  std::string criterion;
  double tolerance = 0.0;
  auto* crit_opt = app.add_option("--criterion", criterion, "Shedding criterion: sum or either")
                       ->check(CLI::IsMember({"sum", "either"}));
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Location tolerance in meters")
                      ->check(CLI::PositiveNumber);

  std::string case_path, run_out;
  auto* run = app.add_subcommand("run", "Multi-step case run");
  run->add_option("--case", case_path, "Case configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output directory")->required();

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Single-mesh shedding analysis");
  analyze->add_option("--mesh", an.mesh, "Mesh file (.msh for MSH 2.2, otherwise native)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--rpm", an.rpm, "Rotor speed, rev/min")->required();
  analyze->add_option("--temp", an.temp, "Temperature, C")->required();
  analyze->add_option("--out", an.out, "Output directory")->required();
  analyze->add_option("--radius", an.radius, "Rotor radius, m (default: mesh tip)");
  analyze->add_option("--config", an.config, "Case file supplying strength and rotor data")
      ->check(CLI::ExistingFile);
  analyze->add_option("--density", an.density, "Ice density, kg/m^3");

  std::string manifest, mesh_out;
  auto* ext = app.add_subcommand("extrude", "Build a mesh from a section manifest");
  ext->add_option("--manifest", manifest, "Section manifest")->required()->check(CLI::ExistingFile);
  ext->add_option("--out", mesh_out, "Output mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*crit_opt) ov.criterion = criterion;
  if (*tol_opt) ov.tolerance = tolerance;

  try {
    if (*run) return cmd_run(case_path, run_out, ov);
    if (*analyze) return cmd_analyze(an, ov);
    return cmd_extrude(manifest, mesh_out);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
