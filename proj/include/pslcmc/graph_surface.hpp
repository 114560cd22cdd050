#pragma once

#include <cstddef>
#include <vector>

#include "pslcmc/geometry.hpp"

namespace pslcmc {

/// Value and derivatives up to order two of the graph function y = f(x, t)
/// at one point. Every operation taking a Jet2 requires f > 0.
struct Jet2 {
  double f = 1.0;
  double fx = 0.0;
  double ft = 0.0;
  double fxx = 0.0;
  double fxt = 0.0;
  double ftt = 0.0;
};

/// 2-jet of an arbitrary scalar function on the graph's parameter plane.
struct ScalarJet2 {
  double v = 0.0;
  double vx = 0.0;
  double vt = 0.0;
  double vxx = 0.0;
  double vxt = 0.0;
  double vtt = 0.0;
};

struct FormCoefficients {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  double b11 = 0.0, b12 = 0.0, b22 = 0.0;

  double det() const { return g11 * g22 - g12 * g12; }
};

/// W = sqrt(f^2 + f_t^2 + (f f_x + 2 tau f_t)^2).
double gradient_w(const Jet2& j, const ModelParams& params);

/// Same quantity written as sqrt(f^2 + f_t^2 + f^2 (f_x + 2 tau lambda f_t)^2)
/// with lambda = 1/f.
double gradient_w_lambda_form(const Jet2& j, const ModelParams& params);

/// First fundamental form (g11, g12, g22) of the graph at (f, f_x, f_t):
///   g11 = l^2 ((1 + 4 tau^2) + f_x^2), g12 = l^2 f_x f_t - 2 tau l,
///   g22 = 1 + l^2 f_t^2, l = 1/f.
std::array<double, 3> first_fundamental_form(double f, double fx, double ft, const ModelParams& params);

/// Frame coefficients of the tangent vectors phi_x, phi_t of
/// phi(x, t) = (x, f(x, t), t).
std::array<Vec3, 2> tangent_frame(const Jet2& j, const ModelParams& params);

/// Frame coefficients of the unit normal
///   N = (-(f_x + 2 tau l f_t) E1 + E2 - l f_t E3) / sqrt(1 + (f_x + 2 tau l f_t)^2 + l^2 f_t^2).
Vec3 unit_normal_frame(const Jet2& j, const ModelParams& params);

/// First and second fundamental forms. The second form is computed from the
/// connection table: b_ab = < nabla_{phi_a} phi_b, N >, differentiating the
/// frame coefficients of phi_b along the surface (lambda = 1/f there).
/// Throws NumericalDegeneracy if the first form is not positive definite.
FormCoefficients fundamental_forms(const Jet2& j, const ModelParams& params);

/// The closed-form b_ij as printed alongside the graph mean curvature
/// equation, before normalisation of N. Dividing by |N_raw| = lambda W gives
/// the second form; see compare_printed_second_form.
struct PrintedSecondForm {
  double b11 = 0.0, b12 = 0.0, b22 = 0.0;
};
PrintedSecondForm printed_second_form(const Jet2& j, const ModelParams& params);

/// Largest absolute difference between the printed b_ij and the connection
/// derived ones, both with and without the 1/(lambda W) normalisation.
struct SecondFormComparison {
  double raw_max_diff = 0.0;
  double normalised_max_diff = 0.0;
};
SecondFormComparison compare_printed_second_form(const Jet2& j, const ModelParams& params);

/// Mean curvature, oriented so that horocylinders f = const have H = +1/2
/// with respect to N (which is E2 for a constant graph).
double mean_curvature(const Jet2& j, const ModelParams& params);

/// 2 H l^2 W^3 - [(f^2+f_t^2) f_xx - 2(f_x f_t - 2 tau f) f_xt
///                + ((1+4 tau^2) + f_x^2) f_tt + f(1 + f_x^2) + 2 tau f_x f_t]
double residual_eq_lemma21(const Jet2& j, double H, const ModelParams& params);

/// Residual of the H = 1/2 graph equation written as
///   (f^2+f_t^2) f_xx - 2(f_x f_t - 2 tau f) f_xt + (f_x^2 + 1 + 4 tau^2) f_tt
///     + f(1 + f_x^2) + 2 tau f_x f_t - W^3/f^2.
/// Equals -residual_eq_lemma21(j, 1/2, params).
double residual_eq1(const Jet2& j, const ModelParams& params);

/// Closed forms valid on solutions of the H = 1/2 equation:
///   laplace_f     = (f^2/W)(1 - f/W + (f f_x^2 + 2 tau f_t f_x)/W)
///   laplace_inv_f = (W - f)/(f W) + (f_t^2 + 2 tau (f f_x f_t + 2 tau f_t^2))/W
/// Both are returned exactly as printed; the second one does not hold in
/// general (see laplace_inv_f_solution_form).
struct Lemma22Values {
  double laplace_f = 0.0;
  double laplace_inv_f = 0.0;
};
Lemma22Values lemma22_identities(const Jet2& j, const ModelParams& params);

/// Delta_S(1/f) on solutions with the denominator of the second term being
/// f W^2 instead of W. This is what -Delta_S f / f^2 + 2 |grad f|^2 / f^3
/// reduces to once Delta_S f is replaced by its closed form.
double laplace_inv_f_solution_form(const Jet2& j, const ModelParams& params);

/// General expansion of Delta_S f in terms of the 2-jet, with a = f f_x + 2 tau f_t:
///   (1/(sqrt(g) W^3)) [ f^2 E + (a^3 + f^3 f_x) f_x + (a f_x - (1+4tau^2) f f_t) f_t ]
/// where E is the second order part of the mean curvature operator. Printed form.
double laplace_f_general_printed(const Jet2& j, const ModelParams& params);

/// Same expansion with the last group as (a f_x f_t - (1+4tau^2) f f_t) f_t,
/// which agrees with the divergence form operator for every jet.
double laplace_f_general_corrected(const Jet2& j, const ModelParams& params);

/// Exact pointwise Laplace-Beltrami of a scalar on the graph,
///   g^{ij} phi_ij + (1/sqrt g) d_i(sqrt g g^{ij}) phi_j,
/// with the metric derivatives obtained by the chain rule through the jet.
double laplace_beltrami_pointwise(const Jet2& surface, const ScalarJet2& phi, const ModelParams& params);

/// Scalar samples on a rectangular (x, t) grid; node (i, j) sits at
/// (x0 + i hx, t0 + j ht) and is stored at values[i * nt + j].
struct SurfaceField {
  double x0 = 0.0;
  double t0 = 0.0;
  double hx = 1.0;
  double ht = 1.0;
  std::size_t nx = 0;
  std::size_t nt = 0;
  std::vector<double> values;

  SurfaceField() = default;
  SurfaceField(double x0, double t0, double hx, double ht, std::size_t nx, std::size_t nt);

  double& at(std::size_t i, std::size_t j) { return values[i * nt + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * nt + j]; }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
  double t(std::size_t j) const { return t0 + static_cast<double>(j) * ht; }
  bool same_grid(const SurfaceField& o) const;
};

/// Divergence form Laplace-Beltrami of phi on the graph of S,
///   (1/sqrt g) sum_ij d_i(sqrt g g^{ij} d_j phi),
/// with fluxes at staggered half nodes. Returns the interior nodes only, as a
/// field of size (nx-2) x (nt-2) whose origin is node (1, 1).
/// Throws std::invalid_argument on grid mismatch or grids smaller than 3x3,
/// std::domain_error if S has a non-positive sample.
SurfaceField laplace_beltrami(const SurfaceField& S, const SurfaceField& phi, const ModelParams& params);

} // namespace pslcmc
