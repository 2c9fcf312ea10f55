#ifndef DEFMESH_CONFIG_HPP
#define DEFMESH_CONFIG_HPP

#include <map>
#include <string>

#include "defmesh/mesh.hpp"

namespace defmesh {

struct ShapeSpec {
  std::string kind;  // "sphere" | "ellipsoid"
  Vec3 center = {0, 0, 0};
  double radius = 1.0;
  Vec3 semi_axes = {1, 1, 1};
  std::string projection = "radial";  // "radial" | "closest"
};

struct GridSpec {
  int dim = 2;
  std::array<int, 3> resolution = {4, 4, 4};
  Box bounds;
  // side/face name -> "moving" | "slippery" | "fixed"
  std::map<std::string, std::string> markers;
};

struct InterfaceSpec {
  ShapeSpec shape;
  double base = 1.0;
  double focus = 0.5;
  double width = 0.5;
};

struct GrayscaleSpec {
  std::string path;
  double f_min = 0.5;
  double f_max = 2.0;
};

struct MonitorConfig {
  std::string source = "uniform";  // "uniform" | "interface" | "grayscale"
  std::string mode = "auto";  // "auto" | "fixed-domain" | "moving-domain"
  InterfaceSpec interface;
  GrayscaleSpec grayscale;
};

struct RunParams {
  double dt = 0.05;
  double dt_refine = 0.1;
  double T = 1.0;
  double cg_tol = 1e-10;
  std::string fold_action = "retry-halve-dt";  // | "halt"
};

struct OutputSpec {
  std::string mesh_json;
  std::string refined_json;
  std::string history_csv;
  std::string msh;
  std::string vtk;
  std::string svg;
};

struct PipelineConfig {
  int schema_version = 1;
  std::string scenario = "unnamed";
  GridSpec grid;
  bool has_target = false;
  ShapeSpec target;
  MonitorConfig monitor;
  RunParams run;
  int order = 3;
  OutputSpec output;
};

// Strict parse: unknown keys are rejected with their field path; value
// errors name the offending field. Throws std::invalid_argument.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::string& path);

// Effective config with all defaults materialized; parse_config of the
// result reproduces the same config.
std::string dump_config(const PipelineConfig& cfg);

// Prefix all requested output paths with a directory.
void seed_output_dir(PipelineConfig& cfg, const std::string& dir);

}  // namespace defmesh

#endif
