#include "pslcmc/graph_surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pslcmc/detail/pointwise.hpp"
#include "pslcmc/errors.hpp"

namespace pslcmc {

namespace {

void require_positive(const Jet2& j) {
  if (!(j.f > 0.0) || !std::isfinite(j.f)) {
    throw std::domain_error("graph value must satisfy f > 0, got f = " + std::to_string(j.f));
  }
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// nabla_{A} B for frame-coefficient fields, where dB holds the derivative of
// B's coefficients along A's parameter direction.
Vec3 covariant(const Vec3& a, const Vec3& b, const Vec3& dB, double tau) {
  Vec3 out = dB;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      const double w = a[k] * b[i];
      if (w == 0.0) {
        continue;
      }
      const Vec3 c = connection_coefficients(k + 1, i + 1, tau);
      for (int m = 0; m < 3; ++m) {
        out[m] += w * c[m];
      }
    }
  }
  return out;
}

} // namespace

double gradient_w(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  return detail::w_of(j.f, j.fx, j.ft, params.tau);
}

double gradient_w_lambda_form(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double lam = 1.0 / j.f;
  const double s = j.fx + 2.0 * params.tau * lam * j.ft;
  return std::sqrt(j.f * j.f + j.ft * j.ft + j.f * j.f * s * s);
}

std::array<double, 3> first_fundamental_form(double f, double fx, double ft, const ModelParams& params) {
  if (!(f > 0.0)) {
    throw std::domain_error("graph value must satisfy f > 0, got f = " + std::to_string(f));
  }
  const double lam = 1.0 / f;
  const double tau = params.tau;
  return {lam * lam * ((1.0 + 4.0 * tau * tau) + fx * fx), lam * lam * fx * ft - 2.0 * tau * lam,
          1.0 + lam * lam * ft * ft};
}

std::array<Vec3, 2> tangent_frame(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double lam = 1.0 / j.f;
  return {Vec3{lam, lam * j.fx, -2.0 * params.tau * lam}, Vec3{0.0, lam * j.ft, 1.0}};
}

Vec3 unit_normal_frame(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double lam = 1.0 / j.f;
  const double s = j.fx + 2.0 * params.tau * lam * j.ft;
  const double norm = std::sqrt(1.0 + s * s + lam * lam * j.ft * j.ft);
  return {-s / norm, 1.0 / norm, -lam * j.ft / norm};
}

FormCoefficients fundamental_forms(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double tau = params.tau;
  const double lam = 1.0 / j.f;
  // lambda restricted to the surface is 1/f(x, t).
  const double lam_x = -lam * lam * j.fx;
  const double lam_t = -lam * lam * j.ft;

  const auto [px, pt] = tangent_frame(j, params);
  const Vec3 n = unit_normal_frame(j, params);

  const Vec3 dx_px = {lam_x, lam_x * j.fx + lam * j.fxx, -2.0 * tau * lam_x};
  const Vec3 dt_px = {lam_t, lam_t * j.fx + lam * j.fxt, -2.0 * tau * lam_t};
  const Vec3 dt_pt = {0.0, lam_t * j.ft + lam * j.ftt, 0.0};

  const Vec3 nxx = covariant(px, px, dx_px, tau);
  const Vec3 ntx = covariant(pt, px, dt_px, tau);
  const Vec3 ntt = covariant(pt, pt, dt_pt, tau);

  const auto g = first_fundamental_form(j.f, j.fx, j.ft, params);
  FormCoefficients out;
  out.g11 = g[0];
  out.g12 = g[1];
  out.g22 = g[2];
  out.b11 = dot(nxx, n);
  out.b12 = dot(ntx, n);
  out.b22 = dot(ntt, n);
  const double det = out.det();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw NumericalDegeneracy("degenerate immersion: first fundamental form determinant " + std::to_string(det));
  }
  return out;
}

PrintedSecondForm printed_second_form(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double tau = params.tau;
  const double l = 1.0 / j.f;
  const double k = 1.0 + 4.0 * tau * tau;
  PrintedSecondForm b;
  b.b11 = l * j.fxx + l * l * k * j.fx * j.fx + 2.0 * tau * l * l * l * k * j.fx * j.ft + l * l * k;
  b.b12 = l * j.fxt - tau * l * j.fx * j.fx + 2.0 * tau * l * l * l * (0.5 + 2.0 * tau * tau) * j.ft * j.ft - tau * l;
  b.b22 = l * j.ftt - 2.0 * tau * l * j.fx * j.ft - l * l * j.ft * j.ft * k;
  return b;
}

SecondFormComparison compare_printed_second_form(const Jet2& j, const ModelParams& params) {
  const FormCoefficients forms = fundamental_forms(j, params);
  const PrintedSecondForm p = printed_second_form(j, params);
  const double scale = gradient_w(j, params) / j.f; // |N_raw| = lambda W
  SecondFormComparison c;
  c.raw_max_diff = std::max({std::abs(p.b11 - forms.b11), std::abs(p.b12 - forms.b12), std::abs(p.b22 - forms.b22)});
  c.normalised_max_diff = std::max({std::abs(p.b11 / scale - forms.b11), std::abs(p.b12 / scale - forms.b12),
                                    std::abs(p.b22 / scale - forms.b22)});
  return c;
}

double mean_curvature(const Jet2& j, const ModelParams& params) {
  const FormCoefficients c = fundamental_forms(j, params);
  return 0.5 * (c.b11 * c.g22 + c.b22 * c.g11 - 2.0 * c.b12 * c.g12) / c.det();
}

namespace {

double lemma21_rhs(const Jet2& j, double tau) {
  return (j.f * j.f + j.ft * j.ft) * j.fxx - 2.0 * (j.fx * j.ft - 2.0 * tau * j.f) * j.fxt +
         ((1.0 + 4.0 * tau * tau) + j.fx * j.fx) * j.ftt + j.f * (1.0 + j.fx * j.fx) + 2.0 * tau * j.fx * j.ft;
}

double second_order_part(const Jet2& j, double tau) {
  return (j.f * j.f + j.ft * j.ft) * j.fxx - 2.0 * (j.fx * j.ft - 2.0 * tau * j.f) * j.fxt +
         (j.fx * j.fx + (1.0 + 4.0 * tau * tau)) * j.ftt;
}

} // namespace

double residual_eq_lemma21(const Jet2& j, double H, const ModelParams& params) {
  require_positive(j);
  const double w = gradient_w_lambda_form(j, params);
  const double lam = 1.0 / j.f;
  return 2.0 * H * lam * lam * w * w * w - lemma21_rhs(j, params.tau);
}

double residual_eq1(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double tau = params.tau;
  const double w = gradient_w(j, params);
  const double lhs = second_order_part(j, tau);
  const double rhs = -j.f * (1.0 + j.fx * j.fx) - 2.0 * tau * j.fx * j.ft + w * w * w / (j.f * j.f);
  return lhs - rhs;
}

Lemma22Values lemma22_identities(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double tau = params.tau;
  const double f = j.f;
  const double w = gradient_w(j, params);
  Lemma22Values out;
  out.laplace_f = (f * f / w) * (1.0 - f / w + (f * j.fx * j.fx + 2.0 * tau * j.ft * j.fx) / w);
  out.laplace_inv_f = (w - f) / (f * w) + (j.ft * j.ft + 2.0 * tau * (f * j.fx * j.ft + 2.0 * tau * j.ft * j.ft)) / w;
  return out;
}

double laplace_inv_f_solution_form(const Jet2& j, const ModelParams& params) {
  require_positive(j);
  const double tau = params.tau;
  const double f = j.f;
  const double w = gradient_w(j, params);
  return (w - f) / (f * w) + (j.ft * j.ft + 2.0 * tau * (f * j.fx * j.ft + 2.0 * tau * j.ft * j.ft)) / (f * w * w);
}

namespace {

double laplace_general(const Jet2& j, const ModelParams& params, bool corrected) {
  require_positive(j);
  const double tau = params.tau;
  const double f = j.f;
  const double w = gradient_w(j, params);
  const double a = f * j.fx + 2.0 * tau * j.ft;
  const double sqrt_g = w / (f * f);
  const double last = corrected ? a * j.fx * j.ft : a * j.fx;
  const double bracket = f * f * second_order_part(j, tau) + (a * a * a + f * f * f * j.fx) * j.fx +
                         (last - (1.0 + 4.0 * tau * tau) * f * j.ft) * j.ft;
  return bracket / (sqrt_g * w * w * w);
}

} // namespace

double laplace_f_general_printed(const Jet2& j, const ModelParams& params) {
  return laplace_general(j, params, false);
}

double laplace_f_general_corrected(const Jet2& j, const ModelParams& params) {
  return laplace_general(j, params, true);
}

double laplace_beltrami_pointwise(const Jet2& s, const ScalarJet2& phi, const ModelParams& params) {
  require_positive(s);
  using D = detail::Dual<3>;
  const auto m = detail::weighted_inverse_metric(D::variable(s.f, 0), D::variable(s.fx, 1), D::variable(s.ft, 2),
                                                 params.tau);
  // d/dx and d/dt of a function of (f, f_x, f_t) along the parameter plane.
  auto ddx = [&](const D& q) { return q.d[0] * s.fx + q.d[1] * s.fxx + q.d[2] * s.fxt; };
  auto ddt = [&](const D& q) { return q.d[0] * s.ft + q.d[1] * s.fxt + q.d[2] * s.ftt; };
  const double sq = m[3].v;
  const double second = (m[0].v * phi.vxx + 2.0 * m[1].v * phi.vxt + m[2].v * phi.vtt) / sq;
  const double first = (ddx(m[0]) + ddt(m[1])) * phi.vx + (ddx(m[1]) + ddt(m[2])) * phi.vt;
  return second + first / sq;
}

SurfaceField::SurfaceField(double x0_, double t0_, double hx_, double ht_, std::size_t nx_, std::size_t nt_)
    : x0(x0_), t0(t0_), hx(hx_), ht(ht_), nx(nx_), nt(nt_), values(nx_ * nt_, 0.0) {
  if (!(hx > 0.0) || !(ht > 0.0)) {
    throw std::invalid_argument("grid spacings must be positive");
  }
}

bool SurfaceField::same_grid(const SurfaceField& o) const {
  return nx == o.nx && nt == o.nt && x0 == o.x0 && t0 == o.t0 && hx == o.hx && ht == o.ht;
}

SurfaceField laplace_beltrami(const SurfaceField& S, const SurfaceField& phi, const ModelParams& params) {
  if (!S.same_grid(phi)) {
    throw std::invalid_argument("laplace_beltrami: surface and scalar are sampled on different grids");
  }
  if (S.nx < 3 || S.nt < 3) {
    throw std::invalid_argument("laplace_beltrami: grid needs at least 3x3 nodes");
  }
  for (double v : S.values) {
    if (!(v > 0.0)) {
      throw std::domain_error("laplace_beltrami: surface samples must be positive");
    }
  }
  const double tau = params.tau;
  const double hx = S.hx;
  const double ht = S.ht;
  const std::size_t nx = S.nx;
  const std::size_t nt = S.nt;

  auto ct = [&](const SurfaceField& u, std::size_t i, std::size_t j) {
    return (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * ht);
  };
  auto cx = [&](const SurfaceField& u, std::size_t i, std::size_t j) {
    return (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * hx);
  };

  // Flux through the face between (i, j) and (i+1, j).
  auto flux_x = [&](std::size_t i, std::size_t j) {
    const double f = 0.5 * (S.at(i, j) + S.at(i + 1, j));
    const double fx = (S.at(i + 1, j) - S.at(i, j)) / hx;
    const double ft = 0.5 * (ct(S, i, j) + ct(S, i + 1, j));
    const auto m = detail::weighted_inverse_metric(f, fx, ft, tau);
    const double px = (phi.at(i + 1, j) - phi.at(i, j)) / hx;
    const double pt = 0.5 * (ct(phi, i, j) + ct(phi, i + 1, j));
    return m[0] * px + m[1] * pt;
  };
  // Flux through the face between (i, j) and (i, j+1).
  auto flux_t = [&](std::size_t i, std::size_t j) {
    const double f = 0.5 * (S.at(i, j) + S.at(i, j + 1));
    const double ft = (S.at(i, j + 1) - S.at(i, j)) / ht;
    const double fx = 0.5 * (cx(S, i, j) + cx(S, i, j + 1));
    const auto m = detail::weighted_inverse_metric(f, fx, ft, tau);
    const double pt = (phi.at(i, j + 1) - phi.at(i, j)) / ht;
    const double px = 0.5 * (cx(phi, i, j) + cx(phi, i, j + 1));
    return m[1] * px + m[2] * pt;
  };

  SurfaceField out(S.x0 + hx, S.t0 + ht, hx, ht, nx - 2, nt - 2);
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < nt; ++j) {
      // Face fluxes on the i-1/2 and j-1/2 sides need central t (resp. x)
      // differences at i-1 (resp. j-1), which exist for every interior node.
      const double div = (flux_x(i, j) - flux_x(i - 1, j)) / hx + (flux_t(i, j) - flux_t(i, j - 1)) / ht;
      const double sq = detail::weighted_inverse_metric(S.at(i, j), cx(S, i, j), ct(S, i, j), tau)[3];
      out.at(i - 1, j - 1) = div / sq;
    }
  }
  return out;
}

} // namespace pslcmc
