#pragma once

#include <array>

namespace pslcmc {

using Vec3 = std::array<double, 3>;

/// Ambient space parameters. tau is the bundle curvature; tau = 0 is H^2 x R.
struct ModelParams {
  double tau = 0.0;
};

/// Point of the half-space model {(x, y, t) : y > 0}.
struct Point3 {
  double x = 0.0;
  double y = 1.0;
  double t = 0.0;
};

/// Symmetric bilinear form in the coordinate basis (d_x, d_y, d_t).
struct SymMatrix3 {
  double xx = 0.0, xy = 0.0, xt = 0.0;
  double yy = 0.0, yt = 0.0;
  double tt = 0.0;

  double operator()(int i, int j) const;
  /// v^T M w
  double apply(const Vec3& v, const Vec3& w) const;
};

/// The frame {E1, E2, E3} in coordinate components.
struct FrameVectors {
  std::array<Vec3, 3> e{};
  const Vec3& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
};

/// Coordinate Gram matrix of
///   g = lambda^2 (dx^2 + dy^2) + (-2 tau lambda dx + dt)^2,   lambda = 1/y.
/// Throws std::domain_error for y <= 0.
SymMatrix3 metric_at(const Point3& p, const ModelParams& params);

/// E1 = d_x/lambda + 2 tau d_t, E2 = d_y/lambda, E3 = d_t.
FrameVectors frame_at(const Point3& p, const ModelParams& params);

/// Coefficients of nabla_{E_i} E_j in the frame, indices 1..3.
///
/// For a general conformal factor lambda(x, y) the connection reads
///   nabla_{E1}E1 = -(l_y/l^2) E2          nabla_{E1}E2 = (l_y/l^2) E1 + tau E3
///   nabla_{E1}E3 = -tau E2                nabla_{E2}E1 = (l_x/l^2) E2 - tau E3
///   nabla_{E2}E2 = -(l_x/l^2) E1          nabla_{E2}E3 = tau E1
///   nabla_{E3}E1 = -tau E2                nabla_{E3}E2 = tau E1
///   nabla_{E3}E3 = 0
/// With lambda = 1/y we have l_x = 0 and l_y/l^2 = -1 everywhere, so the table
/// has constant coefficients and the base point only enters through the
/// y > 0 check.
Vec3 connection_frame(int i, int j, const Point3& p, const ModelParams& params);

/// Frame coefficients of [E_i, E_j]; in general
///   [E1,E2] = (l_y/l^2) E1 - (l_x/l^2) E2 + 2 tau E3,  [E1,E3] = [E2,E3] = 0,
/// which is [E1,E2] = -E1 + 2 tau E3 for lambda = 1/y.
Vec3 lie_bracket_frame(int i, int j, const Point3& p, const ModelParams& params);

/// Connection table without the base point (valid because it is constant).
Vec3 connection_coefficients(int i, int j, double tau);

/// Signed geodesic curvature of the horizontal line y = c in the hyperbolic
/// half-plane (dx^2 + dy^2)/y^2, computed with finite differences: the curve
/// derivatives and the Christoffel symbols of the base metric are both
/// differenced numerically. The sign is taken against the unit normal that
/// points towards increasing y, which is the direction of the curvature
/// vector of a horocycle; with this convention the result is +1 and the
/// horocylinder y = c has mean curvature +1/2 with respect to N = E2.
double base_horocycle_curvature(double c);

} // namespace pslcmc
