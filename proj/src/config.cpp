#include "defmesh/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace defmesh {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + what + " at '" + path + "'");
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  expect_object(j, path);
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail(path, "unknown key '" + item.key() + "'");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::string get_choice(const json& j, const std::string& path,
                       const std::set<std::string>& choices) {
  const std::string v = get_string(j, path);
  if (!choices.count(v)) fail(path, "invalid value '" + v + "'");
  return v;
}

Vec3 get_vec(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected an array of " + std::to_string(dim) + " numbers");
  Vec3 v = {0, 0, 0};
  for (int d = 0; d < dim; ++d) v[d] = get_number(j[d], path);
  return v;
}

ShapeSpec parse_shape(const json& j, const std::string& path, int dim) {
  check_keys(j, path,
             {"kind", "center", "radius", "semi_axes", "projection"});
  ShapeSpec s;
  if (!j.contains("kind")) fail(path, "missing key 'kind'");
  s.kind = get_choice(j["kind"], path + ".kind", {"sphere", "ellipsoid"});
  if (j.contains("center")) s.center = get_vec(j["center"], path + ".center", dim);
  if (s.kind == "sphere") {
    if (j.contains("semi_axes")) fail(path, "'semi_axes' is for ellipsoids");
    if (!j.contains("radius")) fail(path, "missing key 'radius'");
    s.radius = get_number(j["radius"], path + ".radius");
    if (s.radius <= 0) fail(path + ".radius", "must be positive");
  } else {
    if (j.contains("radius")) fail(path, "'radius' is for spheres");
    if (!j.contains("semi_axes")) fail(path, "missing key 'semi_axes'");
    s.semi_axes = get_vec(j["semi_axes"], path + ".semi_axes", dim);
  }
  if (j.contains("projection"))
    s.projection = get_choice(j["projection"], path + ".projection",
                              {"radial", "closest"});
  return s;
}

json shape_json(const ShapeSpec& s, int dim) {
  json j;
  j["kind"] = s.kind;
  j["center"] = std::vector<double>(s.center.begin(), s.center.begin() + dim);
  if (s.kind == "sphere")
    j["radius"] = s.radius;
  else
    j["semi_axes"] =
        std::vector<double>(s.semi_axes.begin(), s.semi_axes.begin() + dim);
  j["projection"] = s.projection;
  return j;
}

const std::set<std::string>& side_names(int dim) {
  static const std::set<std::string> s2 = {"bottom", "right", "top", "left"};
  static const std::set<std::string> s3 = {"zmin", "zmax", "ymin",
                                           "xmax", "ymax", "xmin"};
  return dim == 2 ? s2 : s3;
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") +
                                e.what());
  }
  check_keys(j, "$",
             {"schema_version", "scenario", "grid", "target", "monitor",
              "run", "order", "output"});

  PipelineConfig cfg;
  if (!j.contains("schema_version")) fail("$", "missing key 'schema_version'");
  if (!j["schema_version"].is_number_integer() || j["schema_version"] != 1)
    fail("$.schema_version", "unsupported schema version");
  if (j.contains("scenario"))
    cfg.scenario = get_string(j["scenario"], "$.scenario");

  if (!j.contains("grid")) fail("$", "missing key 'grid'");
  {
    const json& g = j["grid"];
    check_keys(g, "$.grid", {"dim", "resolution", "bounds", "markers"});
    if (!g.contains("dim")) fail("$.grid", "missing key 'dim'");
    if (!g["dim"].is_number_integer() ||
        (g["dim"] != 2 && g["dim"] != 3))
      fail("$.grid.dim", "must be 2 or 3");
    cfg.grid.dim = g["dim"].get<int>();
    const int dim = cfg.grid.dim;
    if (!g.contains("resolution")) fail("$.grid", "missing key 'resolution'");
    const json& r = g["resolution"];
    if (!r.is_array() || static_cast<int>(r.size()) != dim)
      fail("$.grid.resolution",
           "expected an array of " + std::to_string(dim) + " integers");
    for (int d = 0; d < dim; ++d) {
      if (!r[d].is_number_integer() || r[d].get<int>() < 1)
        fail("$.grid.resolution", "entries must be positive integers");
      cfg.grid.resolution[d] = r[d].get<int>();
    }
    if (g.contains("bounds")) {
      check_keys(g["bounds"], "$.grid.bounds", {"lo", "hi"});
      if (g["bounds"].contains("lo"))
        cfg.grid.bounds.lo = get_vec(g["bounds"]["lo"], "$.grid.bounds.lo", dim);
      if (g["bounds"].contains("hi"))
        cfg.grid.bounds.hi = get_vec(g["bounds"]["hi"], "$.grid.bounds.hi", dim);
      for (int d = 0; d < dim; ++d)
        if (cfg.grid.bounds.lo[d] >= cfg.grid.bounds.hi[d])
          fail("$.grid.bounds", "lo must be below hi on every axis");
    }
    if (!g.contains("markers")) fail("$.grid", "missing key 'markers'");
    expect_object(g["markers"], "$.grid.markers");
    const auto& names = side_names(dim);
    for (const auto& item : g["markers"].items()) {
      if (!names.count(item.key()))
        fail("$.grid.markers", "unknown side '" + item.key() + "'");
      cfg.grid.markers[item.key()] =
          get_choice(item.value(), "$.grid.markers." + item.key(),
                     {"moving", "slippery", "fixed"});
    }
    for (const auto& name : names)
      if (!cfg.grid.markers.count(name))
        fail("$.grid.markers", "missing side '" + name + "'");
  }
  const int dim = cfg.grid.dim;

  bool any_moving = false;
  for (const auto& [name, kind] : cfg.grid.markers)
    if (kind == "moving") any_moving = true;

  if (j.contains("target")) {
    cfg.has_target = true;
    cfg.target = parse_shape(j["target"], "$.target", dim);
  }
  if (any_moving && !cfg.has_target)
    fail("$", "moving markers require a 'target' shape");

  if (j.contains("monitor")) {
    const json& m = j["monitor"];
    check_keys(m, "$.monitor", {"source", "mode", "interface", "grayscale"});
    if (m.contains("source"))
      cfg.monitor.source = get_choice(m["source"], "$.monitor.source",
                                      {"uniform", "interface", "grayscale"});
    if (m.contains("mode"))
      cfg.monitor.mode = get_choice(
          m["mode"], "$.monitor.mode",
          {"auto", "fixed-domain", "moving-domain"});
    if (cfg.monitor.source == "interface") {
      if (!m.contains("interface"))
        fail("$.monitor", "interface source requires 'interface' settings");
      const json& i = m["interface"];
      check_keys(i, "$.monitor.interface", {"shape", "base", "focus", "width"});
      if (!i.contains("shape"))
        fail("$.monitor.interface", "missing key 'shape'");
      cfg.monitor.interface.shape =
          parse_shape(i["shape"], "$.monitor.interface.shape", dim);
      if (i.contains("base"))
        cfg.monitor.interface.base = get_number(i["base"], "$.monitor.interface.base");
      if (i.contains("focus"))
        cfg.monitor.interface.focus =
            get_number(i["focus"], "$.monitor.interface.focus");
      if (i.contains("width"))
        cfg.monitor.interface.width =
            get_number(i["width"], "$.monitor.interface.width");
    } else if (m.contains("interface")) {
      fail("$.monitor", "'interface' settings require the interface source");
    }
    if (cfg.monitor.source == "grayscale") {
      if (!m.contains("grayscale"))
        fail("$.monitor", "grayscale source requires 'grayscale' settings");
      const json& g = m["grayscale"];
      check_keys(g, "$.monitor.grayscale", {"path", "f_min", "f_max"});
      if (!g.contains("path")) fail("$.monitor.grayscale", "missing key 'path'");
      cfg.monitor.grayscale.path =
          get_string(g["path"], "$.monitor.grayscale.path");
      if (g.contains("f_min"))
        cfg.monitor.grayscale.f_min =
            get_number(g["f_min"], "$.monitor.grayscale.f_min");
      if (g.contains("f_max"))
        cfg.monitor.grayscale.f_max =
            get_number(g["f_max"], "$.monitor.grayscale.f_max");
    } else if (m.contains("grayscale")) {
      fail("$.monitor", "'grayscale' settings require the grayscale source");
    }
  }
  if (cfg.monitor.mode == "auto")
    cfg.monitor.mode = any_moving ? "moving-domain" : "fixed-domain";

  if (j.contains("run")) {
    const json& r = j["run"];
    check_keys(r, "$.run", {"dt", "dt_refine", "T", "cg_tol", "fold_action"});
    if (r.contains("dt")) cfg.run.dt = get_number(r["dt"], "$.run.dt");
    if (r.contains("dt_refine"))
      cfg.run.dt_refine = get_number(r["dt_refine"], "$.run.dt_refine");
    if (r.contains("T")) cfg.run.T = get_number(r["T"], "$.run.T");
    if (r.contains("cg_tol"))
      cfg.run.cg_tol = get_number(r["cg_tol"], "$.run.cg_tol");
    if (r.contains("fold_action"))
      cfg.run.fold_action = get_choice(r["fold_action"], "$.run.fold_action",
                                       {"retry-halve-dt", "halt"});
    if (cfg.run.dt <= 0) fail("$.run.dt", "must be positive");
    if (cfg.run.dt_refine <= 0) fail("$.run.dt_refine", "must be positive");
    if (cfg.run.T <= 0) fail("$.run.T", "must be positive");
    if (cfg.run.cg_tol <= 0) fail("$.run.cg_tol", "must be positive");
  }

  if (j.contains("order")) {
    if (!j["order"].is_number_integer() || j["order"].get<int>() < 2 ||
        j["order"].get<int>() > 3)
      fail("$.order", "must be 2 or 3");
    cfg.order = j["order"].get<int>();
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "$.output",
               {"mesh_json", "refined_json", "history_csv", "msh", "vtk",
                "svg"});
    auto opt = [&](const char* key, std::string& out) {
      if (o.contains(key)) out = get_string(o[key], std::string("$.output.") + key);
    };
    opt("mesh_json", cfg.output.mesh_json);
    opt("refined_json", cfg.output.refined_json);
    opt("history_csv", cfg.output.history_csv);
    opt("msh", cfg.output.msh);
    opt("vtk", cfg.output.vtk);
    opt("svg", cfg.output.svg);
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config(os.str());
}

std::string dump_config(const PipelineConfig& cfg) {
  const int dim = cfg.grid.dim;
  json j;
  j["schema_version"] = cfg.schema_version;
  j["scenario"] = cfg.scenario;
  j["grid"]["dim"] = dim;
  j["grid"]["resolution"] = std::vector<int>(
      cfg.grid.resolution.begin(), cfg.grid.resolution.begin() + dim);
  j["grid"]["bounds"]["lo"] = std::vector<double>(
      cfg.grid.bounds.lo.begin(), cfg.grid.bounds.lo.begin() + dim);
  j["grid"]["bounds"]["hi"] = std::vector<double>(
      cfg.grid.bounds.hi.begin(), cfg.grid.bounds.hi.begin() + dim);
  for (const auto& [name, kind] : cfg.grid.markers)
    j["grid"]["markers"][name] = kind;
  if (cfg.has_target) j["target"] = shape_json(cfg.target, dim);
  j["monitor"]["source"] = cfg.monitor.source;
  j["monitor"]["mode"] = cfg.monitor.mode;
  if (cfg.monitor.source == "interface") {
    j["monitor"]["interface"]["shape"] =
        shape_json(cfg.monitor.interface.shape, dim);
    j["monitor"]["interface"]["base"] = cfg.monitor.interface.base;
    j["monitor"]["interface"]["focus"] = cfg.monitor.interface.focus;
    j["monitor"]["interface"]["width"] = cfg.monitor.interface.width;
  }
  if (cfg.monitor.source == "grayscale") {
    j["monitor"]["grayscale"]["path"] = cfg.monitor.grayscale.path;
    j["monitor"]["grayscale"]["f_min"] = cfg.monitor.grayscale.f_min;
    j["monitor"]["grayscale"]["f_max"] = cfg.monitor.grayscale.f_max;
  }
  j["run"]["dt"] = cfg.run.dt;
  j["run"]["dt_refine"] = cfg.run.dt_refine;
  j["run"]["T"] = cfg.run.T;
  j["run"]["cg_tol"] = cfg.run.cg_tol;
  j["run"]["fold_action"] = cfg.run.fold_action;
  j["order"] = cfg.order;
  auto opt = [&](const char* key, const std::string& v) {
    if (!v.empty()) j["output"][key] = v;
  };
  opt("mesh_json", cfg.output.mesh_json);
  opt("refined_json", cfg.output.refined_json);
  opt("history_csv", cfg.output.history_csv);
  opt("msh", cfg.output.msh);
  opt("vtk", cfg.output.vtk);
  opt("svg", cfg.output.svg);
  return j.dump(1);
}

void seed_output_dir(PipelineConfig& cfg, const std::string& dir) {
  auto seed = [&](std::string& path) {
    if (!path.empty()) path = dir + "/" + path;
  };
  seed(cfg.output.mesh_json);
  seed(cfg.output.refined_json);
  seed(cfg.output.history_csv);
  seed(cfg.output.msh);
  seed(cfg.output.vtk);
  seed(cfg.output.svg);
}

}  // namespace defmesh
