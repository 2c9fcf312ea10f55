#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "defmesh/pipeline.hpp"

namespace py = pybind11;
using namespace defmesh;

namespace {

// Trim padded node/coordinate arrays to the mesh dimension for Python.
std::vector<std::vector<double>> node_list(const std::vector<Vec3>& nodes,
                                           int dim) {
  std::vector<std::vector<double>> out;
  out.reserve(nodes.size());
  for (const auto& x : nodes)
    out.emplace_back(x.begin(), x.begin() + dim);
  return out;
}

std::vector<std::vector<int>> element_list(const Mesh& m) {
  std::vector<std::vector<int>> out;
  out.reserve(m.elements.size());
  const int n = m.nodes_per_elem();
  for (const auto& el : m.elements)
    out.emplace_back(el.begin(), el.begin() + n);
  return out;
}

py::dict row_dict(const HistoryRow& r) {
  py::dict d;
  d["t"] = r.t;
  d["min_jacobian"] = r.min_jacobian;
  d["volume"] = r.volume;
  d["equidistribution_residual"] = r.equidistribution_residual;
  d["cg_iterations"] = r.cg_iterations;
  d["cg_relative_residual"] = r.cg_relative_residual;
  return d;
}

py::list history_list(const std::vector<HistoryRow>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(row_dict(r));
  return out;
}

Vec3 to_vec3(const std::vector<double>& v) {
  Vec3 x{0, 0, 0};
  for (size_t i = 0; i < v.size() && i < 3; ++i) x[i] = v[i];
  return x;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deformation-based mesh generation core";

  py::class_<Mesh>(m, "Mesh")
      .def(py::init<>())
      .def_readonly("dim", &Mesh::dim)
      .def_property_readonly(
          "nodes", [](const Mesh& s) { return node_list(s.nodes, s.dim); })
      .def_property_readonly("elements",
                             [](const Mesh& s) { return element_list(s); })
      .def_property_readonly("markers",
                             [](const Mesh& s) {
                               std::vector<std::string> names;
                               for (const auto& mk : s.markers)
                                 names.push_back(mk.name);
                               return names;
                             })
      .def("n_nodes", &Mesh::n_nodes)
      .def("n_elements", &Mesh::n_elements)
      .def("min_jacobian", [](const Mesh& s) { return min_jacobian(s); })
      .def("total_volume", [](const Mesh& s) { return total_volume(s); })
      .def("to_json", [](const Mesh& s) { return mesh_to_json(s); })
      .def("save", [](const Mesh& s, const std::string& path) {
        save_mesh(s, path);
      })
      .def("__repr__", [](const Mesh& s) {
        return "Mesh(dim=" + std::to_string(s.dim) +
               ", nodes=" + std::to_string(s.n_nodes()) +
               ", elements=" + std::to_string(s.n_elements()) + ")";
      });

  py::class_<HighOrderMesh>(m, "HighOrderMesh")
      .def_readonly("dim", &HighOrderMesh::dim)
      .def_readonly("p", &HighOrderMesh::p)
      .def_property_readonly(
          "nodes",
          [](const HighOrderMesh& s) { return node_list(s.nodes, s.dim); })
      .def_readonly("elements", &HighOrderMesh::elements)
      .def("n_nodes", &HighOrderMesh::n_nodes)
      .def("n_elements", &HighOrderMesh::n_elements)
      .def("min_jacobian",
           [](const HighOrderMesh& s) { return hoe_min_jacobian(s); })
      .def("__repr__", [](const HighOrderMesh& s) {
        return "HighOrderMesh(dim=" + std::to_string(s.dim) +
               ", p=" + std::to_string(s.p) +
               ", elements=" + std::to_string(s.n_elements()) + ")";
      });

  py::class_<ImplicitShape, std::shared_ptr<ImplicitShape>>(m, "Shape")
      .def_static("sphere",
                  [](int dim, const std::vector<double>& center, double r) {
                    return ImplicitShape::sphere(dim, to_vec3(center), r);
                  },
                  py::arg("dim"), py::arg("center"), py::arg("radius"))
      .def_static(
          "ellipsoid",
          [](int dim, const std::vector<double>& center,
             const std::vector<double>& semi_axes) {
            return ImplicitShape::ellipsoid(dim, to_vec3(center),
                                            to_vec3(semi_axes));
          },
          py::arg("dim"), py::arg("center"), py::arg("semi_axes"))
      .def("level", [](const ImplicitShape& s, const std::vector<double>& x) {
        return s.level(to_vec3(x));
      })
      .def("distance",
           [](const ImplicitShape& s, const std::vector<double>& x) {
             return s.distance(to_vec3(x));
           });

  py::class_<PipelineConfig>(m, "Config")
      .def_property_readonly("scenario",
                             [](const PipelineConfig& c) { return c.scenario; })
      .def_property_readonly("order",
                             [](const PipelineConfig& c) { return c.order; })
      .def_property_readonly(
          "dim", [](const PipelineConfig& c) { return c.grid.dim; })
      .def("dump", [](const PipelineConfig& c) { return dump_config(c); })
      .def("seed_output_dir", [](PipelineConfig& c, const std::string& dir) {
        seed_output_dir(c, dir);
      });

  py::class_<PipelineArtifacts>(m, "Artifacts")
      .def_readonly("initial", &PipelineArtifacts::initial)
      .def_readonly("coarse", &PipelineArtifacts::coarse)
      .def_property_readonly(
          "history",
          [](const PipelineArtifacts& a) { return history_list(a.history); })
      .def_readonly("refined", &PipelineArtifacts::refined)
      .def_readonly("refined_mesh", &PipelineArtifacts::refined_mesh)
      .def_property_readonly("refine_history",
                             [](const PipelineArtifacts& a) {
                               return history_list(a.refine_history);
                             })
      .def_readonly("hoe_built", &PipelineArtifacts::hoe_built)
      .def_readonly("hoe", &PipelineArtifacts::hoe);

  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def("generate", &run_generate, py::arg("config"));
  m.def("refine", &run_refine, py::arg("config"));
  m.def("hoe", &run_hoe, py::arg("config"));

  m.def("load_mesh", &load_mesh, py::arg("path"));
  m.def("mesh_from_json", &mesh_from_json, py::arg("json_text"));

  m.def("rect_grid",
        [](int nx, int ny, const std::vector<double>& lo,
           const std::vector<double>& hi) {
          Box b{to_vec3(lo), to_vec3(hi)};
          std::array<Marker, 4> sides = {
              Marker{"bottom"}, Marker{"right"}, Marker{"top"}, Marker{"left"}};
          return rect_grid(nx, ny, b, sides);
        },
        py::arg("nx"), py::arg("ny"),
        py::arg("lo") = std::vector<double>{0, 0},
        py::arg("hi") = std::vector<double>{1, 1});
  m.def("box_grid",
        [](int nx, int ny, int nz, const std::vector<double>& lo,
           const std::vector<double>& hi) {
          Box b{to_vec3(lo), to_vec3(hi)};
          std::array<Marker, 6> faces = {Marker{"zmin"}, Marker{"zmax"},
                                         Marker{"ymin"}, Marker{"xmax"},
                                         Marker{"ymax"}, Marker{"xmin"}};
          return box_grid(nx, ny, nz, b, faces);
        },
        py::arg("nx"), py::arg("ny"), py::arg("nz"),
        py::arg("lo") = std::vector<double>{0, 0, 0},
        py::arg("hi") = std::vector<double>{1, 1, 1});

  m.def("edge_deviation",
        [](const Mesh& mesh, const std::string& marker,
           const std::shared_ptr<ImplicitShape>& shape, int samples) {
          return edge_deviation(mesh, marker, *shape, samples);
        },
        py::arg("mesh"), py::arg("marker"), py::arg("shape"),
        py::arg("samples") = 33);
  m.def("hoe_edge_deviation",
        [](const HighOrderMesh& h, const std::string& marker,
           const std::shared_ptr<ImplicitShape>& shape, int samples) {
          return edge_deviation(h, marker, *shape, samples);
        },
        py::arg("mesh"), py::arg("marker"), py::arg("shape"),
        py::arg("samples") = 33);

  m.def("export_msh",
        [](const Mesh& s, const std::string& path) { export_msh(s, path); });
  m.def("export_msh", [](const HighOrderMesh& s, const std::string& path) {
    export_msh(s, path);
  });
  m.def("export_vtk",
        [](const Mesh& s, const std::string& path) { export_vtk(s, path); });
  m.def("export_vtk", [](const HighOrderMesh& s, const std::string& path) {
    export_vtk(s, path);
  });
  m.def("plot_svg",
        [](const Mesh& s, const std::string& path) { plot_svg(s, path); });
  m.def("plot_svg", [](const HighOrderMesh& s, const std::string& path) {
    plot_svg(s, path);
  });

  py::register_exception<std::invalid_argument>(m, "ConfigError",
                                                PyExc_ValueError);
}
