#include <fstream>
#include <sstream>
#include <stdexcept>

#include "defmesh/mesh.hpp"
#include "json.hpp"

namespace defmesh {

namespace {
using nlohmann::json;

const char* kind_name(MarkerKind k) {
  switch (k) {
    case MarkerKind::Moving: return "moving";
    case MarkerKind::Slippery: return "slippery";
    case MarkerKind::Fixed: return "fixed";
  }
  return "fixed";
}

MarkerKind kind_from(const std::string& s) {
  if (s == "moving") return MarkerKind::Moving;
  if (s == "slippery") return MarkerKind::Slippery;
  if (s == "fixed") return MarkerKind::Fixed;
  throw std::invalid_argument("mesh: unknown marker kind '" + s + "'");
}
}  // namespace

std::string mesh_to_json(const Mesh& m) {
  json j;
  j["dim"] = m.dim;
  json nodes = json::array();
  for (const auto& x : m.nodes) {
    json p = json::array();
    for (int d = 0; d < m.dim; ++d) p.push_back(x[d]);
    nodes.push_back(std::move(p));
  }
  j["nodes"] = std::move(nodes);
  json elems = json::array();
  const int nc = m.nodes_per_elem();
  for (const auto& el : m.elements) {
    json e = json::array();
    for (int a = 0; a < nc; ++a) e.push_back(el[a]);
    elems.push_back(std::move(e));
  }
  j["elements"] = std::move(elems);
  json facets = json::array();
  for (const auto& f : m.facets)
    facets.push_back({f.element, f.local_facet, f.marker});
  j["facets"] = std::move(facets);
  json markers = json::array();
  for (const auto& mk : m.markers) {
    json o;
    o["name"] = mk.name;
    o["kind"] = kind_name(mk.kind);
    if (mk.slip_axis >= 0) o["axis"] = mk.slip_axis;
    markers.push_back(std::move(o));
  }
  j["markers"] = std::move(markers);
  return j.dump(1);
}

Mesh mesh_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("mesh: JSON parse error: ") +
                                e.what());
  }
  Mesh m;
  m.dim = j.at("dim").get<int>();
  if (m.dim != 2 && m.dim != 3)
    throw std::invalid_argument("mesh: dim must be 2 or 3");
  const int nc = m.nodes_per_elem();

  for (const auto& p : j.at("nodes")) {
    if ((int)p.size() != m.dim)
      throw std::invalid_argument("mesh: node coordinate count != dim");
    Vec3 x = {0, 0, 0};
    for (int d = 0; d < m.dim; ++d) x[d] = p[d].get<double>();
    m.nodes.push_back(x);
  }
  int ei = 0;
  for (const auto& e : j.at("elements")) {
    if ((int)e.size() != nc)
      throw std::invalid_argument("mesh: element " + std::to_string(ei) +
                                  " has wrong node count");
    std::array<int, 8> el = {-1, -1, -1, -1, -1, -1, -1, -1};
    for (int a = 0; a < nc; ++a) {
      el[a] = e[a].get<int>();
      if (el[a] < 0 || el[a] >= m.n_nodes())
        throw std::invalid_argument("mesh: element " + std::to_string(ei) +
                                    " references out-of-range node " +
                                    std::to_string(el[a]));
    }
    m.elements.push_back(el);
    ++ei;
  }
  for (const auto& f : j.at("facets")) {
    if (f.size() != 3)
      throw std::invalid_argument("mesh: facet entries must be triples");
    BoundaryFacet bf{f[0].get<int>(), f[1].get<int>(), f[2].get<int>()};
    if (bf.element < 0 || bf.element >= m.n_elements())
      throw std::invalid_argument("mesh: facet references invalid element " +
                                  std::to_string(bf.element));
    if (bf.local_facet < 0 || bf.local_facet >= m.facets_per_elem())
      throw std::invalid_argument("mesh: invalid local facet index " +
                                  std::to_string(bf.local_facet));
    m.facets.push_back(bf);
  }
  for (const auto& mk : j.at("markers")) {
    Marker mark;
    mark.name = mk.at("name").get<std::string>();
    mark.kind = kind_from(mk.at("kind").get<std::string>());
    if (mk.contains("axis")) mark.slip_axis = mk.at("axis").get<int>();
    m.markers.push_back(mark);
  }
  for (const auto& f : m.facets)
    if (f.marker < 0 || f.marker >= (int)m.markers.size())
      throw std::invalid_argument("mesh: facet marker out of range");
  m.rebuild_node_markers();
  return m;
}

void save_mesh(const Mesh& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_mesh: cannot open " + path);
  os << mesh_to_json(m) << "\n";
}

Mesh load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_mesh: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return mesh_from_json(ss.str());
}

}  // namespace defmesh
