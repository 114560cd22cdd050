#pragma once

#include <array>
#include <cmath>

#include "pslcmc/detail/dual.hpp"

// Scalar-generic versions of the pointwise formulas so they can be evaluated
// on dual numbers (Jacobians, chain-rule oracles) as well as doubles.
namespace pslcmc::detail {

template <typename T>
T w_of(const T& f, const T& fx, const T& ft, double tau) {
  using std::sqrt;
  const T a = f * fx + 2.0 * tau * ft;
  return sqrt(f * f + ft * ft + a * a);
}

/// (sqrt g g^11, sqrt g g^12, sqrt g g^22, sqrt g) of the graph's first form.
template <typename T>
std::array<T, 4> weighted_inverse_metric(const T& f, const T& fx, const T& ft, double tau) {
  using std::sqrt;
  const T lam = 1.0 / f;
  const T g11 = lam * lam * ((1.0 + 4.0 * tau * tau) + fx * fx);
  const T g12 = lam * lam * fx * ft - 2.0 * tau * lam;
  const T g22 = 1.0 + lam * lam * ft * ft;
  const T det = g11 * g22 - g12 * g12;
  const T sq = sqrt(det);
  return {sq * g22 / det, -sq * g12 / det, sq * g11 / det, sq};
}

template <typename T>
struct Coefficients {
  T a, b, c, d, e;
};

/// Coefficients of L_f w = a w_xx + 2 b w_xt + c w_tt + d w_x + e w_t frozen
/// at (f, f_x, f_t). With Q = W^2/(f^2 (W + f)) + 1/f:
///   a = f^2 + f_t^2, b = 2 tau f - f_x f_t, c = f_x^2 + 1 + 4 tau^2,
///   d = f f_x + 2 tau f_t - Q f^2 f_x, e = -Q ((1 + 4 tau^2) f_t + 4 tau f f_x).
template <typename T>
Coefficients<T> frozen(const T& f, const T& fx, const T& ft, double tau) {
  const T w = w_of(f, fx, ft, tau);
  const T q = (w * w) / (f * f * (w + f)) + 1.0 / f;
  const double k = 1.0 + 4.0 * tau * tau;
  return {f * f + ft * ft,
          2.0 * tau * f - fx * ft,
          fx * fx + k,
          f * fx + 2.0 * tau * ft - q * f * f * fx,
          -q * (k * ft + 4.0 * tau * f * fx)};
}

} // namespace pslcmc::detail
