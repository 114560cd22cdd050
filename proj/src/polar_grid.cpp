#include "pslcmc/polar_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pslcmc {

PolarGrid::PolarGrid(double r1, double r2, std::size_t n_r, std::size_t n_theta)
    : r1_(r1), r2_(r2), n_r_(n_r), n_theta_(n_theta) {
  if (!(r1 > 0.0) || !(r2 > r1) || !std::isfinite(r2)) {
    throw std::invalid_argument("polar grid needs 0 < R1 < R2");
  }
  if (n_r < min_radial_nodes) {
    throw std::invalid_argument("polar grid needs n_r >= 8, got " + std::to_string(n_r));
  }
  if (n_theta < min_angular_nodes) {
    throw std::invalid_argument("polar grid needs n_theta >= 16, got " + std::to_string(n_theta));
  }
  ds_ = std::log(r2 / r1) / static_cast<double>(n_r - 1);
  dtheta_ = 2.0 * std::numbers::pi / static_cast<double>(n_theta);
  radii_.resize(n_r);
  for (std::size_t i = 0; i < n_r; ++i) {
    radii_[i] = r1 * std::exp(static_cast<double>(i) * ds_);
  }
  radii_.front() = r1;
  radii_.back() = r2;
}

double PolarGrid::theta(std::size_t j) const { return static_cast<double>(j) * dtheta_; }
double PolarGrid::x(std::size_t i, std::size_t j) const { return radii_[i] * std::cos(theta(j)); }
double PolarGrid::t(std::size_t i, std::size_t j) const { return radii_[i] * std::sin(theta(j)); }

bool PolarGrid::operator==(const PolarGrid& o) const {
  return r1_ == o.r1_ && r2_ == o.r2_ && n_r_ == o.n_r_ && n_theta_ == o.n_theta_;
}

AnnulusField::AnnulusField(PolarGrid g, double fill) : grid(std::move(g)), values(grid.size(), fill) {}

namespace {

std::size_t wrap(std::size_t j, long offset, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((static_cast<long>(j) + offset) % m + m) % m);
}

// Second-order first derivative in s at ring i for a per-ring quantity.
template <typename Get>
double ds2(Get get, std::size_t i, std::size_t n, double h) {
  if (i == 0) {
    return (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h);
  }
  if (i == n - 1) {
    return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h);
  }
  return (get(i + 1) - get(i - 1)) / (2.0 * h);
}

template <typename Get>
double dss2(Get get, std::size_t i, std::size_t n, double h) {
  if (i == 0) {
    return (2.0 * get(0) - 5.0 * get(1) + 4.0 * get(2) - get(3)) / (h * h);
  }
  if (i == n - 1) {
    return (2.0 * get(n - 1) - 5.0 * get(n - 2) + 4.0 * get(n - 3) - get(n - 4)) / (h * h);
  }
  return (get(i + 1) - 2.0 * get(i) + get(i - 1)) / (h * h);
}

template <typename Get>
double ds4(Get get, std::size_t i, std::size_t n, double h) {
  if (i == 1) {
    return (-3.0 * get(0) - 10.0 * get(1) + 18.0 * get(2) - 6.0 * get(3) + get(4)) / (12.0 * h);
  }
  if (i == n - 2) {
    return -(-3.0 * get(n - 1) - 10.0 * get(n - 2) + 18.0 * get(n - 3) - 6.0 * get(n - 4) + get(n - 5)) / (12.0 * h);
  }
  return (-get(i + 2) + 8.0 * get(i + 1) - 8.0 * get(i - 1) + get(i - 2)) / (12.0 * h);
}

template <typename Get>
double dss4(Get get, std::size_t i, std::size_t n, double h) {
  if (i == 1) {
    return (10.0 * get(0) - 15.0 * get(1) - 4.0 * get(2) + 14.0 * get(3) - 6.0 * get(4) + get(5)) / (12.0 * h * h);
  }
  if (i == n - 2) {
    return (10.0 * get(n - 1) - 15.0 * get(n - 2) - 4.0 * get(n - 3) + 14.0 * get(n - 4) - 6.0 * get(n - 5) +
            get(n - 6)) /
           (12.0 * h * h);
  }
  return (-get(i + 2) + 16.0 * get(i + 1) - 30.0 * get(i) + 16.0 * get(i - 1) - get(i - 2)) / (12.0 * h * h);
}

} // namespace

PolarDerivatives polar_derivatives(const AnnulusField& u, std::size_t i, std::size_t j) {
  const PolarGrid& g = u.grid;
  const std::size_t n = g.n_r();
  const std::size_t nt = g.n_theta();
  const double hs = g.ds();
  const double ht = g.dtheta();
  const std::size_t jp = wrap(j, 1, nt);
  const std::size_t jm = wrap(j, -1, nt);

  PolarDerivatives d;
  d.v = u.at(i, j);
  d.vs = ds2([&](std::size_t k) { return u.at(k, j); }, i, n, hs);
  d.vss = dss2([&](std::size_t k) { return u.at(k, j); }, i, n, hs);
  d.vth = (u.at(i, jp) - u.at(i, jm)) / (2.0 * ht);
  d.vthth = (u.at(i, jp) - 2.0 * u.at(i, j) + u.at(i, jm)) / (ht * ht);
  d.vsth = ds2([&](std::size_t k) { return (u.at(k, jp) - u.at(k, jm)) / (2.0 * ht); }, i, n, hs);
  return d;
}

PolarDerivatives polar_derivatives_fourth_order(const AnnulusField& u, std::size_t i, std::size_t j) {
  const PolarGrid& g = u.grid;
  const std::size_t n = g.n_r();
  if (i < 1 || i + 2 > n) {
    throw std::invalid_argument("fourth-order polar derivatives need an interior ring");
  }
  const std::size_t nt = g.n_theta();
  const double hs = g.ds();
  const double ht = g.dtheta();
  auto th1 = [&](std::size_t k) {
    return (-u.at(k, wrap(j, 2, nt)) + 8.0 * u.at(k, wrap(j, 1, nt)) - 8.0 * u.at(k, wrap(j, -1, nt)) +
            u.at(k, wrap(j, -2, nt))) /
           (12.0 * ht);
  };

  PolarDerivatives d;
  d.v = u.at(i, j);
  d.vs = ds4([&](std::size_t k) { return u.at(k, j); }, i, n, hs);
  d.vss = dss4([&](std::size_t k) { return u.at(k, j); }, i, n, hs);
  d.vth = th1(i);
  d.vthth = (-u.at(i, wrap(j, 2, nt)) + 16.0 * u.at(i, wrap(j, 1, nt)) - 30.0 * u.at(i, j) +
             16.0 * u.at(i, wrap(j, -1, nt)) - u.at(i, wrap(j, -2, nt))) /
            (12.0 * ht * ht);
  d.vsth = ds4(th1, i, n, hs);
  return d;
}

ScalarJet2 cartesian_jet(const PolarDerivatives& d, double r, double theta) {
  // s = log r: v_r = v_s / r, v_rr = (v_ss - v_s)/r^2, v_rth = v_sth / r.
  const double vr = d.vs / r;
  const double vrr = (d.vss - d.vs) / (r * r);
  const double vrt = d.vsth / r;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double r2 = r * r;

  ScalarJet2 out;
  out.v = d.v;
  out.vx = c * vr - s / r * d.vth;
  out.vt = s * vr + c / r * d.vth;
  out.vxx = c * c * vrr - 2.0 * s * c / r * vrt + s * s / r2 * d.vthth + s * s / r * vr + 2.0 * s * c / r2 * d.vth;
  out.vtt = s * s * vrr + 2.0 * s * c / r * vrt + c * c / r2 * d.vthth + c * c / r * vr - 2.0 * s * c / r2 * d.vth;
  out.vxt = s * c * vrr + (c * c - s * s) / r * vrt - s * c / r2 * d.vthth - s * c / r * vr -
            (c * c - s * s) / r2 * d.vth;
  return out;
}

namespace {

Jet2 to_graph_jet(const ScalarJet2& s) { return {s.v, s.vx, s.vt, s.vxx, s.vxt, s.vtt}; }

} // namespace

Jet2 polar_jet(const AnnulusField& f, std::size_t i, std::size_t j) {
  return to_graph_jet(cartesian_jet(polar_derivatives(f, i, j), f.grid.radius(i), f.grid.theta(j)));
}

Jet2 polar_jet_fourth_order(const AnnulusField& f, std::size_t i, std::size_t j) {
  return to_graph_jet(cartesian_jet(polar_derivatives_fourth_order(f, i, j), f.grid.radius(i), f.grid.theta(j)));
}

} // namespace pslcmc
