#include "defmesh/pipeline.hpp"

#include <stdexcept>

namespace defmesh {

namespace {

MarkerKind kind_from(const std::string& s) {
  if (s == "moving") return MarkerKind::Moving;
  if (s == "slippery") return MarkerKind::Slippery;
  return MarkerKind::Fixed;
}

ProjectionKind projection_from(const std::string& s) {
  return s == "closest" ? ProjectionKind::Closest : ProjectionKind::Radial;
}

// "name.svg" -> "name_suffix.svg"
std::string svg_variant(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return path + "_" + suffix;
  return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

PipelineArtifacts compute(const PipelineConfig& cfg, bool refine, bool hoe) {
  PipelineArtifacts art;
  art.initial = build_initial_mesh(cfg);
  MonitorSpec monitor = build_monitor(cfg);
  const BoundaryMotion motion = build_motion(cfg);
  DeformResult gen = run_algorithm1(art.initial, monitor, motion,
                                    build_run_config(cfg, false));
  art.coarse = std::move(gen.mesh);
  art.history = std::move(gen.history);
  if (!refine) return art;

  RefineResult ref = refine_and_conform(art.coarse, cfg.order, motion,
                                        build_run_config(cfg, true));
  art.refined = true;
  art.refined_mesh = std::move(ref.mesh);
  art.map = std::move(ref.map);
  art.refine_history = std::move(ref.history);
  if (!hoe) return art;

  art.hoe = build_hoe(art.coarse, art.refined_mesh, art.map);
  art.hoe_built = true;
  return art;
}

void write_common(const PipelineArtifacts& art, const PipelineConfig& cfg) {
  if (!cfg.output.mesh_json.empty()) save_mesh(art.coarse, cfg.output.mesh_json);
  if (!cfg.output.history_csv.empty())
    write_history_csv(cfg.output.history_csv, art.history);
  if (art.refined && !cfg.output.refined_json.empty())
    save_mesh(art.refined_mesh, cfg.output.refined_json);
}

}  // namespace

std::shared_ptr<ImplicitShape> build_shape(const ShapeSpec& spec, int dim) {
  if (spec.kind == "sphere")
    return ImplicitShape::sphere(dim, spec.center, spec.radius);
  return ImplicitShape::ellipsoid(dim, spec.center, spec.semi_axes);
}

Mesh build_initial_mesh(const PipelineConfig& cfg) {
  const auto& g = cfg.grid;
  if (g.dim == 2) {
    const char* names[4] = {"bottom", "right", "top", "left"};
    std::array<Marker, 4> sides;
    for (int i = 0; i < 4; ++i)
      sides[i] = Marker{names[i], kind_from(g.markers.at(names[i]))};
    return rect_grid(g.resolution[0], g.resolution[1], g.bounds, sides);
  }
  const char* names[6] = {"zmin", "zmax", "ymin", "xmax", "ymax", "xmin"};
  std::array<Marker, 6> faces;
  for (int i = 0; i < 6; ++i)
    faces[i] = Marker{names[i], kind_from(g.markers.at(names[i]))};
  return box_grid(g.resolution[0], g.resolution[1], g.resolution[2], g.bounds,
                  faces);
}

BoundaryMotion build_motion(const PipelineConfig& cfg) {
  BoundaryMotion motion;
  std::shared_ptr<ImplicitShape> shape;  // one instance shared by all rules
  for (const auto& [name, kind] : cfg.grid.markers) {
    if (kind != "moving") continue;
    if (!shape) shape = build_shape(cfg.target, cfg.grid.dim);
    motion.rules[name] = MotionRule{MarkerKind::Moving, shape,
                                    projection_from(cfg.target.projection)};
  }
  return motion;
}

MonitorSpec build_monitor(const PipelineConfig& cfg) {
  const VolumeMode mode = cfg.monitor.mode == "moving-domain"
                              ? VolumeMode::MovingDomain
                              : VolumeMode::FixedDomain;
  if (cfg.monitor.source == "uniform")
    return MonitorSpec(MonitorSource::uniform(), mode);
  if (cfg.monitor.source == "interface") {
    auto shape = build_shape(cfg.monitor.interface.shape, cfg.grid.dim);
    auto level = [shape](const Vec3& x) { return shape->level(x); };
    return MonitorSpec(
        MonitorSource::interface(level, cfg.monitor.interface.base,
                                 cfg.monitor.interface.focus,
                                 cfg.monitor.interface.width),
        mode);
  }
  if (cfg.grid.dim != 2)
    throw std::invalid_argument("config: grayscale monitors are 2D only");
  return MonitorSpec(
      MonitorSource::grayscale(cfg.monitor.grayscale.path,
                               cfg.monitor.grayscale.f_min,
                               cfg.monitor.grayscale.f_max, cfg.grid.bounds),
      mode);
}

RunConfig build_run_config(const PipelineConfig& cfg, bool refine_stage) {
  RunConfig rc;
  rc.dt = refine_stage ? cfg.run.dt_refine : cfg.run.dt;
  rc.T = cfg.run.T;
  rc.cg_tol = cfg.run.cg_tol;
  rc.fold_action = cfg.run.fold_action == "halt" ? FoldAction::Halt
                                                 : FoldAction::RetryHalveDt;
  return rc;
}

PipelineArtifacts run_generate(const PipelineConfig& cfg) {
  PipelineArtifacts art = compute(cfg, false, false);
  write_common(art, cfg);
  if (!cfg.output.msh.empty()) export_msh(art.coarse, cfg.output.msh);
  if (!cfg.output.vtk.empty()) export_vtk(art.coarse, cfg.output.vtk);
  if (!cfg.output.svg.empty()) plot_svg(art.coarse, cfg.output.svg);
  return art;
}

PipelineArtifacts run_refine(const PipelineConfig& cfg) {
  PipelineArtifacts art = compute(cfg, true, false);
  write_common(art, cfg);
  if (!cfg.output.msh.empty()) export_msh(art.refined_mesh, cfg.output.msh);
  if (!cfg.output.vtk.empty()) export_vtk(art.refined_mesh, cfg.output.vtk);
  if (!cfg.output.svg.empty()) plot_svg(art.refined_mesh, cfg.output.svg);
  return art;
}

PipelineArtifacts run_hoe(const PipelineConfig& cfg) {
  PipelineArtifacts art = compute(cfg, true, true);
  write_common(art, cfg);
  if (!cfg.output.msh.empty()) export_msh(art.hoe, cfg.output.msh);
  if (!cfg.output.vtk.empty()) export_vtk(art.hoe, cfg.output.vtk);
  if (!cfg.output.svg.empty()) {
    plot_svg(art.coarse, svg_variant(cfg.output.svg, "coarse"));
    plot_svg(art.refined_mesh, svg_variant(cfg.output.svg, "refined"));
    plot_svg(art.hoe, cfg.output.svg);
  }
  return art;
}

}  // namespace defmesh
