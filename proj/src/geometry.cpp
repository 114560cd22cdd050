#include "pslcmc/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pslcmc {

namespace {

void require_upper_half(const Point3& p) {
  if (!(p.y > 0.0) || !std::isfinite(p.y)) {
    throw std::domain_error("point must satisfy y > 0, got y = " + std::to_string(p.y));
  }
}

void require_frame_index(int i) {
  if (i < 1 || i > 3) {
    throw std::invalid_argument("frame index must be 1, 2 or 3, got " + std::to_string(i));
  }
}

} // namespace

double SymMatrix3::operator()(int i, int j) const {
  if (i > j) {
    std::swap(i, j);
  }
  switch (i * 3 + j) {
  case 0: return xx;
  case 1: return xy;
  case 2: return xt;
  case 4: return yy;
  case 5: return yt;
  case 8: return tt;
  default: throw std::invalid_argument("SymMatrix3 index out of range");
  }
}

double SymMatrix3::apply(const Vec3& v, const Vec3& w) const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s += v[i] * (*this)(i, j) * w[j];
    }
  }
  return s;
}

SymMatrix3 metric_at(const Point3& p, const ModelParams& params) {
  require_upper_half(p);
  const double lam = 1.0 / p.y;
  const double tau = params.tau;
  SymMatrix3 g;
  g.xx = lam * lam * (1.0 + 4.0 * tau * tau);
  g.yy = lam * lam;
  g.tt = 1.0;
  g.xt = -2.0 * tau * lam;
  return g;
}

FrameVectors frame_at(const Point3& p, const ModelParams& params) {
  require_upper_half(p);
  const double inv_lam = p.y;
  FrameVectors frame;
  frame.e[0] = {inv_lam, 0.0, 2.0 * params.tau};
  frame.e[1] = {0.0, inv_lam, 0.0};
  frame.e[2] = {0.0, 0.0, 1.0};
  return frame;
}

Vec3 connection_coefficients(int i, int j, double tau) {
  require_frame_index(i);
  require_frame_index(j);
  // l_y/l^2 = -1 and l_x = 0 for lambda = 1/y.
  constexpr double ly_over_l2 = -1.0;
  constexpr double lx_over_l2 = 0.0;
  switch ((i - 1) * 3 + (j - 1)) {
  case 0: return {0.0, -ly_over_l2, 0.0};
  case 1: return {ly_over_l2, 0.0, tau};
  case 2: return {0.0, -tau, 0.0};
  case 3: return {0.0, lx_over_l2, -tau};
  case 4: return {-lx_over_l2, 0.0, 0.0};
  case 5: return {tau, 0.0, 0.0};
  case 6: return {0.0, -tau, 0.0};
  case 7: return {tau, 0.0, 0.0};
  default: return {0.0, 0.0, 0.0};
  }
}

Vec3 connection_frame(int i, int j, const Point3& p, const ModelParams& params) {
  require_upper_half(p);
  return connection_coefficients(i, j, params.tau);
}

Vec3 lie_bracket_frame(int i, int j, const Point3& p, const ModelParams& params) {
  require_frame_index(i);
  require_frame_index(j);
  require_upper_half(p);
  constexpr double ly_over_l2 = -1.0;
  constexpr double lx_over_l2 = 0.0;
  const Vec3 e12 = {ly_over_l2, -lx_over_l2, 2.0 * params.tau};
  if (i == 1 && j == 2) {
    return e12;
  }
  if (i == 2 && j == 1) {
    return {-e12[0], -e12[1], -e12[2]};
  }
  return {0.0, 0.0, 0.0};
}

namespace {

// Hyperbolic half-plane metric in coordinates (x, y).
std::array<double, 3> base_metric(double x, double y) {
  (void)x;
  const double c = 1.0 / (y * y);
  return {c, 0.0, c}; // g_xx, g_xy, g_yy
}

double base_metric_entry(const std::array<double, 3>& g, int i, int j) {
  return (i == 0 && j == 0) ? g[0] : (i == 1 && j == 1) ? g[2] : g[1];
}

} // namespace

double base_horocycle_curvature(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::domain_error("horocycle height must be positive, got " + std::to_string(c));
  }
  // Curve u -> (u, c), differenced at u = 0.
  auto curve = [c](double u) { return std::array<double, 2>{u, c}; };
  const double h = 1e-4 * std::max(1.0, c);
  const double u0 = 0.0;
  const auto pm = curve(u0 - h);
  const auto p0 = curve(u0);
  const auto pp = curve(u0 + h);
  const std::array<double, 2> vel = {(pp[0] - pm[0]) / (2 * h), (pp[1] - pm[1]) / (2 * h)};
  const std::array<double, 2> acc = {(pp[0] - 2 * p0[0] + pm[0]) / (h * h),
                                     (pp[1] - 2 * p0[1] + pm[1]) / (h * h)};

  // Christoffel symbols from central differences of the metric.
  const double x = p0[0];
  const double y = p0[1];
  const double hm = 1e-4 * y;
  std::array<std::array<double, 3>, 2> dg{}; // dg[k] = d_k (g_xx, g_xy, g_yy)
  {
    const auto gxp = base_metric(x + hm, y);
    const auto gxm = base_metric(x - hm, y);
    const auto gyp = base_metric(x, y + hm);
    const auto gym = base_metric(x, y - hm);
    for (int e = 0; e < 3; ++e) {
      dg[0][e] = (gxp[e] - gxm[e]) / (2 * hm);
      dg[1][e] = (gyp[e] - gym[e]) / (2 * hm);
    }
  }
  const auto g = base_metric(x, y);
  const double det = g[0] * g[2] - g[1] * g[1];
  const double ginv[2][2] = {{g[2] / det, -g[1] / det}, {-g[1] / det, g[0] / det}};
  auto dgk = [&](int k, int i, int j) {
    const int e = (i == 0 && j == 0) ? 0 : (i == 1 && j == 1) ? 2 : 1;
    return dg[k][e];
  };
  std::array<double, 2> cov = acc;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double gamma = 0.0;
        for (int l = 0; l < 2; ++l) {
          gamma += 0.5 * ginv[k][l] * (dgk(i, j, l) + dgk(j, i, l) - dgk(l, i, j));
        }
        cov[k] += gamma * vel[i] * vel[j];
      }
    }
  }

  auto inner = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        s += a[i] * base_metric_entry(g, i, j) * b[j];
      }
    }
    return s;
  };
  // Upward unit normal: rotate the tangent so that the y-component is positive.
  std::array<double, 2> normal = {-vel[1], vel[0]};
  if (normal[1] < 0.0) {
    normal = {-normal[0], -normal[1]};
  }
  const double speed2 = inner(vel, vel);
  const double nlen = std::sqrt(inner(normal, normal));
  return inner(cov, normal) / (nlen * speed2);
}

} // namespace pslcmc
