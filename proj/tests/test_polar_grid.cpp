#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pslcmc/polar_grid.hpp"

using namespace pslcmc;

namespace {

// u = exp(0.3 x) sin(0.5 t) + x^2 t with its exact Cartesian jet.
double u(double x, double t) { return std::exp(0.3 * x) * std::sin(0.5 * t) + x * x * t; }

ScalarJet2 u_jet(double x, double t) {
  const double e = std::exp(0.3 * x);
  const double s = std::sin(0.5 * t);
  const double c = std::cos(0.5 * t);
  return {u(x, t),           0.3 * e * s + 2.0 * x * t, 0.5 * e * c + x * x, 0.09 * e * s + 2.0 * t,
          0.15 * e * c + 2.0 * x, -0.25 * e * s};
}

AnnulusField sample(const PolarGrid& g) {
  AnnulusField f(g);
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      f.at(i, j) = u(g.x(i, j), g.t(i, j));
    }
  }
  return f;
}

double jet_error(const ScalarJet2& a, const ScalarJet2& b) {
  return std::max({std::abs(a.v - b.v), std::abs(a.vx - b.vx), std::abs(a.vt - b.vt), std::abs(a.vxx - b.vxx),
                   std::abs(a.vxt - b.vxt), std::abs(a.vtt - b.vtt)});
}

template <class Jet>
double max_error(const AnnulusField& f, Jet jet, std::size_t lo, std::size_t hi) {
  double err = 0.0;
  const PolarGrid& g = f.grid;
  for (std::size_t i = lo; i < hi; ++i) {
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      err = std::max(err, jet_error(jet(f, i, j), u_jet(g.x(i, j), g.t(i, j))));
    }
  }
  return err;
}

} // namespace

TEST(PolarGrid, NodesAndSpacing) {
  const PolarGrid g(1.0, 8.0, 10, 32);
  EXPECT_DOUBLE_EQ(g.radius(0), 1.0);
  EXPECT_NEAR(g.radius(9), 8.0, 1e-14);
  EXPECT_NEAR(g.ds(), std::log(8.0) / 9.0, 1e-15);
  EXPECT_NEAR(g.dtheta(), 2.0 * std::numbers::pi / 32.0, 1e-15);
  for (std::size_t i = 1; i < g.n_r(); ++i) {
    EXPECT_GT(g.radius(i), g.radius(i - 1));
    EXPECT_NEAR(std::log(g.radius(i) / g.radius(i - 1)), g.ds(), 1e-13);
  }
  EXPECT_NEAR(g.x(3, 8), g.radius(3) * std::cos(g.theta(8)), 1e-14);
  EXPECT_NEAR(g.t(3, 8), g.radius(3) * std::sin(g.theta(8)), 1e-14);
  EXPECT_EQ(g.index(2, 5), 2u * 32u + 5u);
}

TEST(PolarGrid, RejectsInvalidSizes) {
  EXPECT_THROW(PolarGrid(1.0, 8.0, 7, 32), std::invalid_argument);
  EXPECT_THROW(PolarGrid(1.0, 8.0, 8, 15), std::invalid_argument);
  EXPECT_THROW(PolarGrid(2.0, 1.0, 8, 16), std::invalid_argument);
  EXPECT_THROW(PolarGrid(0.0, 1.0, 8, 16), std::invalid_argument);
  EXPECT_NO_THROW(PolarGrid(1.0, 2.0, 8, 16));
}

TEST(PolarDerivatives, SecondOrderAgainstAnalyticJet) {
  double prev = 0.0;
  for (std::size_t k : {1u, 2u, 4u}) {
    const PolarGrid g(1.0, 3.0, 16 * k + 1, 64 * k);
    const AnnulusField f = sample(g);
    const double err = max_error(
        f,
        [](const AnnulusField& a, std::size_t i, std::size_t j) {
          return cartesian_jet(polar_derivatives(a, i, j), a.grid.radius(i), a.grid.theta(j));
        },
        0, g.n_r());
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.5);
      EXPECT_LT(prev / err, 4.6);
    }
    prev = err;
  }
}

TEST(PolarDerivatives, FourthOrderAgainstAnalyticJet) {
  double prev = 0.0;
  for (std::size_t k : {1u, 2u, 4u}) {
    const PolarGrid g(1.0, 3.0, 16 * k + 1, 64 * k);
    const AnnulusField f = sample(g);
    const double err = max_error(
        f,
        [](const AnnulusField& a, std::size_t i, std::size_t j) {
          return cartesian_jet(polar_derivatives_fourth_order(a, i, j), a.grid.radius(i), a.grid.theta(j));
        },
        1, g.n_r() - 1);
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 12.0);
    }
    prev = err;
  }
}

TEST(PolarDerivatives, FourthOrderNeedsInteriorRing) {
  const PolarGrid g(1.0, 3.0, 9, 16);
  const AnnulusField f = sample(g);
  EXPECT_THROW(polar_derivatives_fourth_order(f, 0, 0), std::invalid_argument);
  EXPECT_THROW(polar_derivatives_fourth_order(f, 8, 0), std::invalid_argument);
}

TEST(PolarDerivatives, GraphJetCarriesSameValues) {
  const PolarGrid g(1.0, 3.0, 17, 64);
  const AnnulusField f = sample(g);
  const Jet2 j = polar_jet(f, 5, 7);
  const ScalarJet2 s = cartesian_jet(polar_derivatives(f, 5, 7), g.radius(5), g.theta(7));
  EXPECT_EQ(j.f, s.v);
  EXPECT_EQ(j.fx, s.vx);
  EXPECT_EQ(j.ft, s.vt);
  EXPECT_EQ(j.fxx, s.vxx);
  EXPECT_EQ(j.fxt, s.vxt);
  EXPECT_EQ(j.ftt, s.vtt);
}
