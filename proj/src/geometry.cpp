#include "defmesh/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace defmesh {

double ImplicitShape::distance(const Vec3& x) const {
  return vec_norm(x - project(x, ProjectionKind::Closest));
}

namespace {

class SphereShape : public ImplicitShape {
 public:
  SphereShape(int dim, const Vec3& center, double radius)
      : dim_(dim), center_(center), radius_(radius) {
    if (radius <= 0.0)
      throw std::invalid_argument("sphere: radius must be positive");
  }

  double level(const Vec3& x) const override {
    return vec_norm(x - center_) - radius_;
  }

  Vec3 project(const Vec3& x, ProjectionKind) const override {
    // closest and radial coincide on a sphere
    const Vec3 d = x - center_;
    const double r = vec_norm(d);
    if (r == 0.0)
      throw std::invalid_argument(
          "sphere: cannot project the center point radially");
    return center_ + (radius_ / r) * d;
  }

  double distance(const Vec3& x) const override {
    return std::abs(vec_norm(x - center_) - radius_);
  }

 private:
  int dim_;
  Vec3 center_;
  double radius_;
};

class EllipsoidShape : public ImplicitShape {
 public:
  EllipsoidShape(int dim, const Vec3& center, const Vec3& semi)
      : dim_(dim), center_(center), semi_(semi) {
    for (int d = 0; d < dim_; ++d)
      if (semi_[d] <= 0.0)
        throw std::invalid_argument("ellipsoid: semi-axes must be positive");
    if (dim_ == 2) semi_[2] = 1.0;  // unused
  }

  double level(const Vec3& x) const override {
    double s = -1.0;
    for (int d = 0; d < dim_; ++d) {
      const double q = (x[d] - center_[d]) / semi_[d];
      s += q * q;
    }
    return s;
  }

  Vec3 project(const Vec3& x, ProjectionKind kind) const override {
    const Vec3 p = x - center_;
    if (kind == ProjectionKind::Radial) {
      double s = 0.0;
      for (int d = 0; d < dim_; ++d) {
        const double q = p[d] / semi_[d];
        s += q * q;
      }
      if (s == 0.0)
        throw std::invalid_argument(
            "ellipsoid: cannot project the center point radially");
      return center_ + (1.0 / std::sqrt(s)) * p;
    }
    return center_ + foot_point(p);
  }

 private:
  // Nearest point on the ellipsoid to p (relative to center): the foot
  // point satisfies y_d = a_d^2 p_d / (t + a_d^2) for the root t of
  // F(t) = sum (a_d p_d / (t + a_d^2))^2 - 1.
  Vec3 foot_point(const Vec3& p) const {
    double amin2 = semi_[0] * semi_[0];
    double t0 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const double a2 = semi_[d] * semi_[d];
      amin2 = std::min(amin2, a2);
      t0 = std::max(t0, semi_[d] * std::abs(p[d]));
    }
    double t = t0 - amin2;  // F(t0 - amin2) >= 0, F decreasing
    double F = 0.0;
    for (int it = 0; it < 50; ++it) {
      F = -1.0;
      double dF = 0.0;
      for (int d = 0; d < dim_; ++d) {
        const double a2 = semi_[d] * semi_[d];
        const double w = semi_[d] * p[d] / (t + a2);
        F += w * w;
        dF -= 2.0 * w * w / (t + a2);
      }
      if (std::abs(F) < 1e-14) break;
      if (dF == 0.0) break;
      double tn = t - F / dF;
      if (tn <= -amin2) tn = 0.5 * (t - amin2);  // keep in domain
      t = tn;
    }
    if (std::abs(F) >= 1e-10) {
      std::ostringstream os;
      os << "ellipsoid: foot-point Newton did not converge, residual " << F;
      throw std::runtime_error(os.str());
    }
    Vec3 y = {0, 0, 0};
    for (int d = 0; d < dim_; ++d) {
      const double a2 = semi_[d] * semi_[d];
      y[d] = a2 * p[d] / (t + a2);
    }
    return y;
  }

  int dim_;
  Vec3 center_;
  Vec3 semi_;
};

}  // namespace

std::shared_ptr<ImplicitShape> ImplicitShape::sphere(int dim,
                                                     const Vec3& center,
                                                     double radius) {
  return std::make_shared<SphereShape>(dim, center, radius);
}

std::shared_ptr<ImplicitShape> ImplicitShape::ellipsoid(int dim,
                                                        const Vec3& center,
                                                        const Vec3& semi) {
  return std::make_shared<EllipsoidShape>(dim, center, semi);
}

MotionRule BoundaryMotion::rule_for(const Marker& m) const {
  auto it = rules.find(m.name);
  if (it != rules.end()) return it->second;
  // no explicit rule: the marker's own kind decides
  if (m.kind == MarkerKind::Slippery)
    return MotionRule{MarkerKind::Slippery, nullptr, ProjectionKind::Radial,
                      m.slip_axis};
  return MotionRule{};
}

NodeBc boundary_velocity(const BoundaryMotion& motion, const Mesh& m,
                         int node) {
  NodeBc bc;
  const auto& ids = m.node_markers[node];
  if (ids.empty()) return bc;

  MotionRule moving;
  bool has_moving = false;
  std::string moving_name;
  bool fixed = false;
  std::array<bool, 3> slip = {false, false, false};

  for (int id : ids) {
    const Marker& mk = m.markers[id];
    const MotionRule r = motion.rule_for(mk);
    switch (r.kind) {
      case MarkerKind::Moving: {
        if (has_moving && (moving.target != r.target ||
                           moving.projection != r.projection)) {
          throw std::invalid_argument(
              "boundary_velocity: node " + std::to_string(node) +
              " carries conflicting moving markers '" + moving_name +
              "' and '" + mk.name + "'");
        }
        moving = r;
        has_moving = true;
        moving_name = mk.name;
        break;
      }
      case MarkerKind::Slippery: {
        const int axis = r.slip_axis >= 0 ? r.slip_axis : mk.slip_axis;
        if (axis < 0 || axis >= m.dim)
          throw std::invalid_argument(
              "boundary_velocity: slippery marker '" + mk.name +
              "' has no valid axis");
        slip[axis] = true;
        break;
      }
      case MarkerKind::Fixed:
        fixed = true;
        break;
    }
  }

  if (fixed) {
    for (int d = 0; d < m.dim; ++d) bc.fixed_comp[d] = true;
    return bc;
  }
  if (has_moving) {
    if (!moving.target)
      throw std::invalid_argument(
          "boundary_velocity: moving rule without target shape");
    const Vec3 x0 = m.nodes[node];
    Vec3 v = moving.target->project(x0, moving.projection) - x0;
    for (int d = 0; d < m.dim; ++d) {
      if (slip[d]) v[d] = 0.0;  // stay on the wall, slide along it
      bc.fixed_comp[d] = true;
    }
    bc.velocity = v;
    return bc;
  }
  for (int d = 0; d < m.dim; ++d)
    if (slip[d]) bc.fixed_comp[d] = true;
  return bc;
}

std::vector<NodeBc> build_node_bcs(const BoundaryMotion& motion,
                                   const Mesh& m) {
  std::vector<NodeBc> bcs(m.n_nodes());
  for (int i = 0; i < m.n_nodes(); ++i) bcs[i] = boundary_velocity(motion, m, i);
  return bcs;
}

Vec3 facet_normal(const Mesh& m, const BoundaryFacet& f) {
  const auto& el = m.elements[f.element];
  Vec3 n = {0, 0, 0};
  Vec3 mid = {0, 0, 0};
  if (m.dim == 2) {
    const auto& c = quad_edge_corners()[f.local_facet];
    const Vec3& a = m.nodes[el[c[0]]];
    const Vec3& b = m.nodes[el[c[1]]];
    const Vec3 t = b - a;
    const double len = vec_norm(t);
    if (len == 0.0)
      throw std::invalid_argument("facet_normal: degenerate edge");
    n = {t[1] / len, -t[0] / len, 0.0};
    mid = 0.5 * (a + b);
  } else {
    const auto& c = hex_face_corners()[f.local_facet];
    const Vec3& a = m.nodes[el[c[0]]];
    const Vec3& b = m.nodes[el[c[1]]];
    const Vec3& cc = m.nodes[el[c[2]]];
    const Vec3& d = m.nodes[el[c[3]]];
    const Vec3 t1 = cc - a;  // diagonals give the mid-plane normal
    const Vec3 t2 = d - b;
    n = {t1[1] * t2[2] - t1[2] * t2[1], t1[2] * t2[0] - t1[0] * t2[2],
         t1[0] * t2[1] - t1[1] * t2[0]};
    const double len = vec_norm(n);
    if (len == 0.0)
      throw std::invalid_argument("facet_normal: degenerate face");
    n = (1.0 / len) * n;
    mid = 0.25 * (a + b + cc + d);
  }
  // outwardness check against the element centroid
  Vec3 cen = {0, 0, 0};
  const int nc = m.nodes_per_elem();
  for (int a = 0; a < nc; ++a) cen = cen + m.nodes[el[a]];
  cen = (1.0 / nc) * cen;
  if (vec_dot(n, mid - cen) < 0.0) n = -1.0 * n;
  return n;
}

double facet_flux(const Mesh& m, const BoundaryFacet& f,
                  const std::vector<NodeBc>& bcs) {
  const auto& el = m.elements[f.element];
  constexpr double ga = 0.21132486540518713;
  constexpr double gb = 0.7886751345948129;
  if (m.dim == 2) {
    const auto& c = quad_edge_corners()[f.local_facet];
    const Vec3& x0 = m.nodes[el[c[0]]];
    const Vec3& x1 = m.nodes[el[c[1]]];
    const Vec3& v0 = bcs[el[c[0]]].velocity;
    const Vec3& v1 = bcs[el[c[1]]].velocity;
    const Vec3 t = x1 - x0;
    const Vec3 n = facet_normal(m, f);
    double flux = 0.0;
    for (double s : {ga, gb}) {
      const Vec3 v = (1.0 - s) * v0 + s * v1;
      flux += 0.5 * vec_dot(v, n) * vec_norm(t);
    }
    return flux;
  }
  const auto& c = hex_face_corners()[f.local_facet];
  const Vec3 x[4] = {m.nodes[el[c[0]]], m.nodes[el[c[1]]], m.nodes[el[c[2]]],
                     m.nodes[el[c[3]]]};
  const Vec3 v[4] = {bcs[el[c[0]]].velocity, bcs[el[c[1]]].velocity,
                     bcs[el[c[2]]].velocity, bcs[el[c[3]]].velocity};
  // orientation sign fixed once from the mid-plane normal
  const Vec3 n_out = facet_normal(m, f);
  double flux = 0.0;
  for (double s : {ga, gb})
    for (double t : {ga, gb}) {
      const double N[4] = {(1 - s) * (1 - t), s * (1 - t), s * t,
                           (1 - s) * t};
      Vec3 ts = {0, 0, 0}, tt = {0, 0, 0}, vv = {0, 0, 0};
      const double dNs[4] = {-(1 - t), (1 - t), t, -t};
      const double dNt[4] = {-(1 - s), -s, s, (1 - s)};
      for (int a = 0; a < 4; ++a) {
        ts = ts + dNs[a] * x[a];
        tt = tt + dNt[a] * x[a];
        vv = vv + N[a] * v[a];
      }
      Vec3 nq = {ts[1] * tt[2] - ts[2] * tt[1], ts[2] * tt[0] - ts[0] * tt[2],
                 ts[0] * tt[1] - ts[1] * tt[0]};
      if (vec_dot(nq, n_out) < 0.0) nq = -1.0 * nq;
      flux += 0.25 * vec_dot(vv, nq);
    }
  return flux;
}

}  // namespace defmesh
