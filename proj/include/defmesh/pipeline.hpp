#ifndef DEFMESH_PIPELINE_HPP
#define DEFMESH_PIPELINE_HPP

#include <memory>

#include "defmesh/config.hpp"
#include "defmesh/deform.hpp"
#include "defmesh/hoe.hpp"
#include "defmesh/refine.hpp"

namespace defmesh {

struct PipelineArtifacts {
  Mesh initial;
  Mesh coarse;  // Algorithm 1 output
  std::vector<HistoryRow> history;
  bool refined = false;
  Mesh refined_mesh;
  SubdivisionMap map;
  std::vector<HistoryRow> refine_history;
  bool hoe_built = false;
  HighOrderMesh hoe;
};

std::shared_ptr<ImplicitShape> build_shape(const ShapeSpec& spec, int dim);
Mesh build_initial_mesh(const PipelineConfig& cfg);
BoundaryMotion build_motion(const PipelineConfig& cfg);
MonitorSpec build_monitor(const PipelineConfig& cfg);
RunConfig build_run_config(const PipelineConfig& cfg, bool refine_stage);

// Pipeline stages; each computes its prerequisites and writes the
// requested outputs (generate: coarse artifacts; refine: + refined mesh;
// hoe: + high-order exports, SVG as a coarse/refined/hoe triplet).
PipelineArtifacts run_generate(const PipelineConfig& cfg);
PipelineArtifacts run_refine(const PipelineConfig& cfg);
PipelineArtifacts run_hoe(const PipelineConfig& cfg);

}  // namespace defmesh

#endif
