#include "defmesh/monitor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace defmesh {

namespace {

constexpr double kGaussA = 0.21132486540518713;
constexpr double kGaussB = 0.7886751345948129;

void gauss_ref_points(int dim, std::vector<Vec3>& pts) {
  const double g[2] = {kGaussA, kGaussB};
  pts.clear();
  if (dim == 2) {
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) pts.push_back({g[i], g[j], 0});
  } else {
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) pts.push_back({g[i], g[j], g[k]});
  }
}

class UniformSource : public MonitorSource {
 public:
  double raw(const Vec3&) const override { return 1.0; }
  bool is_uniform() const override { return true; }
};

class InterfaceSource : public MonitorSource {
 public:
  InterfaceSource(std::function<double(const Vec3&)> level, double base,
                  double focus, double width)
      : level_(std::move(level)), base_(base), focus_(focus), width_(width) {
    if (base <= 0 || focus <= 0 || width <= 0)
      throw std::invalid_argument("interface monitor: parameters must be > 0");
  }
  double raw(const Vec3& x) const override {
    const double q = level_(x) / width_;
    return base_ - (base_ - focus_) * std::exp(-q * q);
  }

 private:
  std::function<double(const Vec3&)> level_;
  double base_, focus_, width_;
};

class GrayscaleSource : public MonitorSource {
 public:
  GrayscaleSource(const std::string& path, double f_min, double f_max,
                  const Box& domain)
      : f_min_(f_min), f_max_(f_max), domain_(domain) {
    if (f_min_ < kMonitorFloor)
      throw std::invalid_argument(
          "grayscale monitor: f_min below the monitor floor");
    load_pgm(path);
  }

  double raw(const Vec3& x) const override {
    // map x into pixel-center coordinates; image row 0 is the top
    const double u =
        (x[0] - domain_.lo[0]) / (domain_.hi[0] - domain_.lo[0]) * w_ - 0.5;
    const double v =
        (1.0 - (x[1] - domain_.lo[1]) / (domain_.hi[1] - domain_.lo[1])) * h_ -
        0.5;
    const double cu = std::clamp(u, 0.0, double(w_ - 1));
    const double cv = std::clamp(v, 0.0, double(h_ - 1));
    const int i0 = std::min(int(cu), w_ - 2 >= 0 ? w_ - 2 : 0);
    const int j0 = std::min(int(cv), h_ - 2 >= 0 ? h_ - 2 : 0);
    const double a = cu - i0, b = cv - j0;
    auto px = [&](int i, int j) {
      return data_[std::min(j, h_ - 1) * w_ + std::min(i, w_ - 1)];
    };
    const double i =
        (1 - a) * (1 - b) * px(i0, j0) + a * (1 - b) * px(i0 + 1, j0) +
        (1 - a) * b * px(i0, j0 + 1) + a * b * px(i0 + 1, j0 + 1);
    return f_min_ + (i / maxval_) * (f_max_ - f_min_);
  }

 private:
  void load_pgm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("grayscale monitor: cannot open " + path);
    std::string magic;
    is >> magic;
    if (magic != "P2" && magic != "P5")
      throw std::invalid_argument("grayscale monitor: not a PGM (P2/P5) file");
    auto next_int = [&]() {
      // skip whitespace and '#' comments
      int c;
      while ((c = is.peek()) != EOF) {
        if (c == '#') {
          std::string line;
          std::getline(is, line);
        } else if (std::isspace(c)) {
          is.get();
        } else {
          break;
        }
      }
      long v;
      if (!(is >> v))
        throw std::invalid_argument("grayscale monitor: malformed PGM header");
      return v;
    };
    w_ = int(next_int());
    h_ = int(next_int());
    maxval_ = double(next_int());
    if (w_ <= 0 || h_ <= 0 || maxval_ <= 0)
      throw std::invalid_argument("grayscale monitor: bad PGM dimensions");
    data_.resize(std::size_t(w_) * h_);
    if (magic == "P2") {
      for (auto& d : data_) {
        long v;
        if (!(is >> v))
          throw std::invalid_argument("grayscale monitor: truncated P2 data");
        d = double(v);
      }
    } else {
      is.get();  // single whitespace after maxval
      if (maxval_ > 255)
        throw std::invalid_argument(
            "grayscale monitor: 16-bit P5 not supported");
      std::vector<unsigned char> buf(data_.size());
      is.read(reinterpret_cast<char*>(buf.data()), buf.size());
      if (std::size_t(is.gcount()) != buf.size())
        throw std::invalid_argument("grayscale monitor: truncated P5 data");
      for (std::size_t i = 0; i < buf.size(); ++i) data_[i] = double(buf[i]);
    }
  }

  double f_min_, f_max_;
  Box domain_;
  int w_ = 0, h_ = 0;
  double maxval_ = 255;
  std::vector<double> data_;
};

}  // namespace

std::shared_ptr<MonitorSource> MonitorSource::uniform() {
  return std::make_shared<UniformSource>();
}

std::shared_ptr<MonitorSource> MonitorSource::interface(
    std::function<double(const Vec3&)> level, double base, double focus,
    double width) {
  return std::make_shared<InterfaceSource>(std::move(level), base, focus,
                                           width);
}

std::shared_ptr<MonitorSource> MonitorSource::grayscale(
    const std::string& pgm_path, double f_min, double f_max,
    const Box& domain) {
  return std::make_shared<GrayscaleSource>(pgm_path, f_min, f_max, domain);
}

double integrate(const Mesh& m,
                 const std::function<double(const Vec3&)>& fn) {
  std::vector<Vec3> pts;
  gauss_ref_points(m.dim, pts);
  const double w = 1.0 / pts.size();
  const int nc = m.nodes_per_elem();
  double sum = 0.0;
  double N[8];
  for (int e = 0; e < m.n_elements(); ++e) {
    for (const auto& rp : pts) {
      shape_values(m.dim, rp, N);
      Vec3 x = {0, 0, 0};
      for (int a = 0; a < nc; ++a) x = x + N[a] * m.nodes[m.elements[e][a]];
      sum += w * element_jacobian(m, e, rp) * fn(x);
    }
  }
  return sum;
}

MonitorSpec::MonitorSpec(std::shared_ptr<MonitorSource> source,
                         VolumeMode mode)
    : source_(std::move(source)), mode_(mode) {
  if (!source_) throw std::invalid_argument("MonitorSpec: null source");
}

void MonitorSpec::initialize(const Mesh& m0) {
  volume0_ = total_volume(m0);
  // normalize: f1 = s * f_raw with integral of 1/f1 equal to |Omega_0|
  const double recip = integrate(m0, [&](const Vec3& x) {
    const double r = source_->raw(x);
    if (r < kMonitorFloor) {
      std::ostringstream os;
      os << "monitor: raw value " << r << " below floor at (" << x[0] << ", "
         << x[1] << ", " << x[2] << ")";
      throw std::invalid_argument(os.str());
    }
    return 1.0 / r;
  });
  target_scale_ = recip / volume0_;
  volume_ = volume0_;
  c_ = 1.0;
  c_dot_ = 0.0;
  t_prep_ = 0.0;
  flux_ = 0.0;
  initialized_ = true;
}

double MonitorSpec::target_raw(const Vec3& x) const {
  return target_scale_ * source_->raw(x);
}

double MonitorSpec::blend_recip(const Vec3& x, double t) const {
  if (t < -1e-12 || t > 1.0 + 1e-12)
    throw std::invalid_argument("monitor: time outside [0, T]");
  return (1.0 - t) + t / target_raw(x);
}

void MonitorSpec::prepare_step(const Mesh& m, double t, double boundary_flux) {
  if (!initialized_) throw std::logic_error("monitor: not initialized");
  volume_ = total_volume(m);
  flux_ = boundary_flux;
  const double recip =
      integrate(m, [&](const Vec3& x) { return blend_recip(x, t); });
  const double c_new = volume0_ / recip;
  if (t > t_prep_ + 1e-14)
    c_dot_ = (c_new - c_) / (t - t_prep_);
  else if (t <= 1e-14)
    c_dot_ = 0.0;
  c_ = c_new;
  t_prep_ = t;
}

double MonitorSpec::eval_f(const Vec3& x, double t) const {
  const double f = 1.0 / (c_ * blend_recip(x, t));
  if (f < kMonitorFloor) {
    std::ostringstream os;
    os << "monitor: f = " << f << " fell below the floor at (" << x[0] << ", "
       << x[1] << ")";
    throw std::runtime_error(os.str());
  }
  return f;
}

double MonitorSpec::eval_g(const Vec3& x, double t) const {
  if (source_->is_uniform() && mode_ == VolumeMode::MovingDomain) {
    // c = |Omega_0| / V(t), so -c' = |Omega_0| V'(t) / V(t)^2 analytically
    return volume0_ * flux_ / (volume_ * volume_);
  }
  // g = -d/dt (c * blend) with c' from a backward difference
  return -c_dot_ * blend_recip(x, t) - c_ * (1.0 / target_raw(x) - 1.0);
}

RhsField MonitorSpec::eval_g_field(const Mesh& m, double t) const {
  RhsField g(m.n_nodes());
  for (int i = 0; i < m.n_nodes(); ++i) g[i] = eval_g(m.nodes[i], t);
  return g;
}

double MonitorSpec::target_f(const Vec3& x) const {
  return target_raw(x) / c_;
}

double MonitorSpec::reciprocal_integral(const Mesh& m, double t) const {
  return integrate(m,
                   [&](const Vec3& x) { return c_ * blend_recip(x, t); });
}

}  // namespace defmesh
