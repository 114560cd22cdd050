#pragma once

#include <cstddef>
#include <vector>

#include "pslcmc/graph_surface.hpp"

namespace pslcmc {

/// Structured grid over the annulus R1 <= r <= R2 in the (x, t) plane.
/// Radial nodes are uniform in s = log(r/R1) (both circles are nodes), angular
/// nodes are uniform and periodic. Node (i, j) has flat index i * n_theta + j.
class PolarGrid {
public:
  static constexpr std::size_t min_radial_nodes = 8;
  static constexpr std::size_t min_angular_nodes = 16;

  PolarGrid(double r1, double r2, std::size_t n_r, std::size_t n_theta);

  std::size_t n_r() const { return n_r_; }
  std::size_t n_theta() const { return n_theta_; }
  std::size_t size() const { return n_r_ * n_theta_; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * n_theta_ + j; }

  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double ds() const { return ds_; }
  double dtheta() const { return dtheta_; }
  double radius(std::size_t i) const { return radii_[i]; }
  double theta(std::size_t j) const;
  double x(std::size_t i, std::size_t j) const;
  double t(std::size_t i, std::size_t j) const;

  bool operator==(const PolarGrid& o) const;

private:
  double r1_;
  double r2_;
  std::size_t n_r_;
  std::size_t n_theta_;
  double ds_;
  double dtheta_;
  std::vector<double> radii_;
};

struct AnnulusField {
  PolarGrid grid;
  std::vector<double> values;

  explicit AnnulusField(PolarGrid g, double fill = 0.0);

  double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
};

/// Derivatives in (s, theta) of a field at one node.
struct PolarDerivatives {
  double v = 0.0;
  double vs = 0.0, vth = 0.0;
  double vss = 0.0, vsth = 0.0, vthth = 0.0;
};

/// Second-order differences: central in the interior, one-sided on the two
/// boundary circles. Theta is periodic.
PolarDerivatives polar_derivatives(const AnnulusField& u, std::size_t i, std::size_t j);

/// Fourth-order differences for 1 <= i <= n_r - 2 (biased stencils on the
/// rings next to the boundary circles).
PolarDerivatives polar_derivatives_fourth_order(const AnnulusField& u, std::size_t i, std::size_t j);

/// Cartesian (x, t) 2-jet from (s, theta) derivatives at radius r, angle theta.
ScalarJet2 cartesian_jet(const PolarDerivatives& d, double r, double theta);

/// Cartesian 2-jet of a field at a node, with second-order differences.
Jet2 polar_jet(const AnnulusField& f, std::size_t i, std::size_t j);

/// Same with fourth-order differences; requires 1 <= i <= n_r - 2.
Jet2 polar_jet_fourth_order(const AnnulusField& f, std::size_t i, std::size_t j);

} // namespace pslcmc
