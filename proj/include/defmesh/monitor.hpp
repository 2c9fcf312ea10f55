#ifndef DEFMESH_MONITOR_HPP
#define DEFMESH_MONITOR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "defmesh/mesh.hpp"

namespace defmesh {

constexpr double kMonitorFloor = 1e-3;

// Spatial monitor source f_raw(x) > 0 before normalization.
class MonitorSource {
 public:
  virtual ~MonitorSource() = default;
  virtual double raw(const Vec3& x) const = 0;
  virtual bool is_uniform() const { return false; }

  static std::shared_ptr<MonitorSource> uniform();
  // base - (base - focus) * exp(-(psi(x)/width)^2) around an interface
  // level set
  static std::shared_ptr<MonitorSource> interface(
      std::function<double(const Vec3&)> level, double base, double focus,
      double width);
  // PGM (P2/P5) raster mapped onto a bounding box, intensity mapped
  // affinely onto [f_min, f_max], bilinear between pixel centers
  static std::shared_ptr<MonitorSource> grayscale(const std::string& pgm_path,
                                                  double f_min, double f_max,
                                                  const Box& domain);
};

enum class VolumeMode { FixedDomain, MovingDomain };

using RhsField = std::vector<double>;  // nodal values of g = -d/dt (1/f)

// The prescribed Jacobian f(x,t). The reciprocal 1/f is blended linearly
// in time from 1 to the normalized target, and rescaled against the
// current mesh each step so the compatibility integral of 1/f equals
// |Omega_0| on the quadrature at every accepted time.
class MonitorSpec {
 public:
  MonitorSpec(std::shared_ptr<MonitorSource> source, VolumeMode mode);

  // Normalizes the target on the initial mesh; records |Omega_0|.
  void initialize(const Mesh& m0);

  // Rescale to the current mesh before evaluating at time t. boundary_flux
  // is the rate of volume change from the prescribed boundary velocity
  // (moving-domain modes only).
  void prepare_step(const Mesh& m, double t, double boundary_flux);

  double eval_f(const Vec3& x, double t) const;
  double eval_g(const Vec3& x, double t) const;
  RhsField eval_g_field(const Mesh& m, double t) const;

  // The end-time target scaled to the current normalization; used for the
  // equidistribution residual.
  double target_f(const Vec3& x) const;

  // Compatibility integral of 1/f over the mesh quadrature at time t.
  double reciprocal_integral(const Mesh& m, double t) const;

  double initial_volume() const { return volume0_; }
  bool initialized() const { return initialized_; }
  VolumeMode mode() const { return mode_; }

  // Normalized spatial target f1 (Eq-independent accessor for tests).
  double target_raw(const Vec3& x) const;

 private:
  double blend_recip(const Vec3& x, double t) const;  // (1-t) + t / f1(x)

  std::shared_ptr<MonitorSource> source_;
  VolumeMode mode_;
  bool initialized_ = false;
  double volume0_ = 0.0;
  double target_scale_ = 1.0;  // f1 = target_scale_ * f_raw
  // per-step state
  double t_prep_ = 0.0;
  double c_ = 1.0;       // 1/f = c * blend_recip
  double c_dot_ = 0.0;   // backward difference of c
  double flux_ = 0.0;    // V'(t) from boundary velocity
  double volume_ = 0.0;  // V(t)
};

// Quadrature of a pointwise function over the mesh (2^dim Gauss points).
double integrate(const Mesh& m,
                 const std::function<double(const Vec3&)>& fn);

}  // namespace defmesh

#endif
