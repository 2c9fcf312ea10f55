#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "defmesh/pipeline.hpp"

namespace {

using namespace defmesh;

bool verbose_logging() {
  const char* v = std::getenv("DEFMESH_LOG");
  return v && (std::string(v) == "debug" || std::string(v) == "verbose");
}

// "sphere:cx,cy[,cz]:radius" or "ellipsoid:cx,cy[,cz]:ax,ay[,az]",
// optionally ":radial" / ":closest"
ShapeSpec parse_shape_spec(const std::string& text, int dim) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4)
    throw std::invalid_argument("shape spec: expected kind:center:size[:projection]");
  auto numbers = [&](const std::string& s) {
    std::vector<double> v;
    std::stringstream ns(s);
    std::string tok;
    while (std::getline(ns, tok, ',')) v.push_back(std::stod(tok));
    return v;
  };
  ShapeSpec spec;
  spec.kind = parts[0];
  if (spec.kind != "sphere" && spec.kind != "ellipsoid")
    throw std::invalid_argument("shape spec: unknown kind '" + spec.kind + "'");
  const auto c = numbers(parts[1]);
  if (static_cast<int>(c.size()) != dim)
    throw std::invalid_argument("shape spec: center needs " +
                                std::to_string(dim) + " coordinates");
  for (int d = 0; d < dim; ++d) spec.center[d] = c[d];
  if (spec.kind == "sphere") {
    const auto r = numbers(parts[2]);
    if (r.size() != 1) throw std::invalid_argument("shape spec: one radius");
    spec.radius = r[0];
  } else {
    const auto a = numbers(parts[2]);
    if (static_cast<int>(a.size()) != dim)
      throw std::invalid_argument("shape spec: semi-axes need " +
                                  std::to_string(dim) + " values");
    for (int d = 0; d < dim; ++d) spec.semi_axes[d] = a[d];
  }
  if (parts.size() == 4) {
    if (parts[3] != "radial" && parts[3] != "closest")
      throw std::invalid_argument("shape spec: projection must be radial or closest");
    spec.projection = parts[3];
  }
  return spec;
}

struct PipelineOptions {
  std::string config_path;
  double dt = 0.0;
  int order = 0;
  std::string seed_dir;
  bool dump = false;
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& opt) {
  cmd->add_option("config", opt.config_path, "pipeline config file")->required();
  cmd->add_option("--dt", opt.dt, "override the deformation time step");
  cmd->add_option("--order", opt.order, "override the refinement order");
  cmd->add_option("--seed-output-dir", opt.seed_dir,
                  "prefix all output paths with this directory");
  cmd->add_flag("--dump-config", opt.dump,
                "print the effective config and exit");
}

PipelineConfig effective_config(const PipelineOptions& opt) {
  PipelineConfig cfg = load_config(opt.config_path);
  if (opt.dt > 0.0) cfg.run.dt = opt.dt;
  if (opt.order > 0) {
    if (opt.order < 2 || opt.order > 3)
      throw std::invalid_argument("config: --order must be 2 or 3");
    cfg.order = opt.order;
  }
  if (!opt.seed_dir.empty()) seed_output_dir(cfg, opt.seed_dir);
  return cfg;
}

void print_history(const std::vector<HistoryRow>& rows) {
  for (const auto& r : rows)
    std::cout << "  t=" << r.t << " minJ=" << r.min_jacobian
              << " volume=" << r.volume
              << " residual=" << r.equidistribution_residual
              << " cg=" << r.cg_iterations << '\n';
}

void print_summary(const char* stage, const PipelineArtifacts& art) {
  const auto& last = art.history.back();
  long cg_total = 0;
  for (const auto& r : art.history) cg_total += r.cg_iterations;
  std::cout << stage << ": steps=" << art.history.size() - 1
            << " final minJ=" << last.min_jacobian
            << " volume=" << last.volume
            << " residual=" << last.equidistribution_residual
            << " cg total=" << cg_total << '\n';
  if (verbose_logging()) print_history(art.history);
  if (art.refined) {
    const auto& rl = art.refine_history.back();
    std::cout << "refine: fine nodes=" << art.refined_mesh.n_nodes()
              << " final minJ=" << rl.min_jacobian << " volume=" << rl.volume
              << '\n';
    if (verbose_logging()) print_history(art.refine_history);
  }
  if (art.hoe_built)
    std::cout << "hoe: elements=" << art.hoe.n_elements()
              << " nodes=" << art.hoe.n_nodes()
              << " minJ=" << hoe_min_jacobian(art.hoe) << '\n';
}

int run_pipeline_command(const PipelineOptions& opt, const char* stage) {
  PipelineConfig cfg = effective_config(opt);
  if (opt.dump) {
    std::cout << dump_config(cfg) << '\n';
    return 0;
  }
  PipelineArtifacts art;
  if (std::string(stage) == "generate")
    art = run_generate(cfg);
  else if (std::string(stage) == "refine")
    art = run_refine(cfg);
  else
    art = run_hoe(cfg);
  print_summary(stage, art);
  return 0;
}

int run_check(const std::string& mesh_path, const std::string& shape_spec) {
  const Mesh m = load_mesh(mesh_path);
  const double mn = min_jacobian(m);
  double mx = mn;
  const Vec3 center = {0.5, 0.5, m.dim == 3 ? 0.5 : 0.0};
  for (int e = 0; e < m.n_elements(); ++e)
    mx = std::max(mx, element_jacobian(m, e, center));
  std::cout << "nodes=" << m.n_nodes() << " elements=" << m.n_elements()
            << '\n';
  std::cout << "min J=" << mn << " max center J=" << mx
            << " volume=" << total_volume(m) << '\n';
  if (!shape_spec.empty()) {
    auto shape = build_shape(parse_shape_spec(shape_spec, m.dim), m.dim);
    for (const auto& marker : m.markers) {
      bool used = false;
      for (const auto& f : m.facets)
        if (m.markers[f.marker].name == marker.name) used = true;
      if (!used) continue;
      std::cout << "marker " << marker.name << ": max deviation "
                << edge_deviation(m, marker.name, *shape) << '\n';
    }
  }
  if (mn <= 0.0) {
    std::cerr << "error: mesh is folded (min J = " << mn << ")\n";
    return 2;
  }
  return 0;
}

int run_export(const std::string& mesh_path, const std::string& format,
               const std::string& out) {
  const Mesh m = load_mesh(mesh_path);
  if (format == "msh")
    export_msh(m, out);
  else if (format == "vtk")
    export_vtk(m, out);
  else
    plot_svg(m, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deformation-method mesh generation"};
  app.require_subcommand(1);

  PipelineOptions gen_opt, ref_opt, hoe_opt;
  add_pipeline_options(
      app.add_subcommand("generate", "run the deformation (Algorithm 1)"),
      gen_opt);
  add_pipeline_options(
      app.add_subcommand("refine", "generate and refine (Algorithm 2)"),
      ref_opt);
  add_pipeline_options(
      app.add_subcommand("hoe", "full pipeline to high-order elements"),
      hoe_opt);

  std::string check_mesh, check_shape;
  auto* check = app.add_subcommand("check", "report mesh quality");
  check->add_option("mesh", check_mesh, "mesh JSON file")->required();
  check->add_option("--shape", check_shape,
                    "target shape, e.g. sphere:0,0:1.25");

  std::string export_mesh_path, export_format, export_out;
  auto* exp = app.add_subcommand("export", "convert a mesh JSON file");
  exp->add_option("mesh", export_mesh_path, "mesh JSON file")->required();
  exp->add_option("--format", export_format, "msh, vtk, or svg")
      ->required()
      ->check(CLI::IsMember({"msh", "vtk", "svg"}));
  exp->add_option("--out", export_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("generate"))
      return run_pipeline_command(gen_opt, "generate");
    if (app.got_subcommand("refine"))
      return run_pipeline_command(ref_opt, "refine");
    if (app.got_subcommand("hoe")) return run_pipeline_command(hoe_opt, "hoe");
    if (app.got_subcommand("check")) return run_check(check_mesh, check_shape);
    if (app.got_subcommand("export"))
      return run_export(export_mesh_path, export_format, export_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
