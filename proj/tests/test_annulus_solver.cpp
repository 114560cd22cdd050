#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "oracles.hpp"
#include "pslcmc/annulus_solver.hpp"
#include "pslcmc/errors.hpp"

using namespace pslcmc;

namespace {

AnnulusSpec make_spec(double tau, double eps = 0.02, BarrierSign sign = BarrierSign::Plus, double r2 = 8.0) {
  AnnulusSpec s;
  s.R1 = 1.0;
  s.R2 = r2;
  s.epsilon = eps;
  s.sign = sign;
  s.params.tau = tau;
  return s;
}

double max_abs_diff(const AnnulusField& a, const AnnulusField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    m = std::max(m, std::abs(a.values[k] - b.values[k]));
  }
  return m;
}

// Solves the discrete problem for arbitrary boundary values.
AnnulusField solve_with_boundary(const AnnulusField& freeze, const AnnulusField& boundary, const ModelParams& p) {
  const LinearSystem sys = assemble_linear_system(freeze, boundary, p);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys.matrix);
  const Eigen::VectorXd x = lu.solve(sys.rhs);
  AnnulusField w = boundary;
  const std::size_t nt = boundary.grid.n_theta();
  for (std::size_t i = 1; i + 1 < boundary.grid.n_r(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      w.at(i, j) = x[static_cast<Eigen::Index>((i - 1) * nt + j)];
    }
  }
  return w;
}

} // namespace

TEST(AnnulusSpec, Validation) {
  EXPECT_NO_THROW(make_spec(0.25).validate());
  EXPECT_NO_THROW(make_spec(0.25, 0.0).validate());
  EXPECT_THROW(make_spec(0.25, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(make_spec(0.25, -0.1).validate(), std::invalid_argument);
  EXPECT_THROW(make_spec(0.25, 0.02, BarrierSign::Plus, 1.5).validate(), std::invalid_argument);
  AnnulusSpec s = make_spec(0.25);
  s.R1 = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Barrier, Examples) {
  for (BarrierSign sign : {BarrierSign::Plus, BarrierSign::Minus}) {
    const AnnulusSpec s = make_spec(0.0, 0.1, sign, 9.0);
    const double pm = sign == BarrierSign::Plus ? 1.0 : -1.0;
    EXPECT_NEAR(barrier_h(1.0, s), 1.0 + pm * 0.1, 1e-15);
    EXPECT_NEAR(barrier_h(9.0, s), 1.0, 1e-15);
    EXPECT_NEAR(barrier_h(3.0, s), 1.0 + pm * 0.05, 1e-15);
    EXPECT_THROW(barrier_h(0.5, s), std::domain_error);
    EXPECT_THROW(barrier_h(9.5, s), std::domain_error);
  }
}

TEST(Barrier, MonotoneInRadius) {
  const AnnulusSpec s = make_spec(0.0);
  double prev = barrier_h(1.0, s);
  for (double r = 1.1; r <= 8.0; r += 0.1) {
    const double h = barrier_h(r, s);
    EXPECT_LT(h, prev);
    prev = h;
  }
}

TEST(FrozenCoefficients, FlatGraph) {
  const FrozenCoefficients c = frozen_coefficients(1.0, 0.0, 0.0, {0.3});
  EXPECT_DOUBLE_EQ(c.a, 1.0);
  EXPECT_DOUBLE_EQ(c.b, 0.6);
  EXPECT_DOUBLE_EQ(c.c, 1.0 + 4.0 * 0.09);
  EXPECT_DOUBLE_EQ(c.d, 0.0);
  EXPECT_DOUBLE_EQ(c.e, 0.0);
}

TEST(FrozenCoefficients, UnitSlope) {
  const FrozenCoefficients c = frozen_coefficients(1.0, 1.0, 0.0, {0.0});
  const double W = std::sqrt(2.0);
  const double Q = W * W / (W + 1.0) + 1.0;
  EXPECT_NEAR(c.a, 1.0, 1e-15);
  EXPECT_NEAR(c.b, 0.0, 1e-15);
  EXPECT_NEAR(c.c, 2.0, 1e-15);
  EXPECT_NEAR(c.d, 1.0 - Q, 1e-15);
  EXPECT_NEAR(c.e, 0.0, 1e-15);
  // L_f[f] against the equation for the jet (1, 1, 0, fxx, fxt, ftt).
  const Jet2 j{1.0, 1.0, 0.0, 0.3, -0.2, 0.7};
  const double eq = j.fxx + 2.0 * j.ftt + 2.0 - W * W * W;
  EXPECT_NEAR(apply_frozen_operator(j, {0.0}), eq, 1e-14);
}

TEST(FrozenCoefficients, ContractAndEllipticityOnRandomJets) {
  oracle::JetSource src(99);
  for (int n = 0; n < 1000; ++n) {
    const oracle::Jet o = src.jet();
    const double tau = src.uniform(-2.0, 2.0);
    const Jet2 j{o.f, o.fx, o.ft, o.fxx, o.fxt, o.ftt};
    const double W = std::sqrt(o.f * o.f + o.ft * o.ft + std::pow(o.f * o.fx + 2.0 * tau * o.ft, 2));
    const double eq = (o.f * o.f + o.ft * o.ft) * o.fxx - 2.0 * (o.fx * o.ft - 2.0 * tau * o.f) * o.fxt +
                      (o.fx * o.fx + 1.0 + 4.0 * tau * tau) * o.ftt + o.f * (1.0 + o.fx * o.fx) +
                      2.0 * tau * o.fx * o.ft - W * W * W / (o.f * o.f);
    const double scale = std::max(1.0, W * W * W / (o.f * o.f));
    ASSERT_NEAR(apply_frozen_operator(j, {tau}), eq, 1e-9 * scale);
    ASSERT_NEAR(apply_frozen_operator(j, {tau}), residual_eq1(j, {tau}), 1e-9 * scale);
    EXPECT_GT(frozen_coefficients(o.f, o.fx, o.ft, {tau}).ellipticity(), 0.0);
  }
  EXPECT_THROW(frozen_coefficients(0.0, 0.0, 0.0, {0.0}), std::domain_error);
}

TEST(FrozenCoefficients, NoTwistMixedCoefficient) {
  const FrozenCoefficients c = frozen_coefficients(1.3, 0.4, -0.7, {0.0});
  EXPECT_DOUBLE_EQ(c.b, -0.4 * -0.7);
}

TEST(Assembly, ConstantCoefficientRowsSumToZero) {
  const PolarGrid g(1.0, 4.0, 12, 32);
  const AnnulusSpec s = make_spec(0.4);
  const LinearSystem sys = assemble_linear_system(AnnulusField(g, 1.0), s);
  const std::size_t nt = g.n_theta();
  ASSERT_EQ(sys.matrix.rows(), static_cast<Eigen::Index>((g.n_r() - 2) * nt));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.matrix.cols());
  const Eigen::VectorXd rows = sys.matrix * ones;
  for (std::size_t i = 2; i + 2 < g.n_r(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      EXPECT_NEAR(rows[static_cast<Eigen::Index>((i - 1) * nt + j)], 0.0, 1e-10);
    }
  }
}

TEST(Assembly, NonPositiveFreezeIsRejected) {
  const PolarGrid g(1.0, 4.0, 12, 32);
  AnnulusField f(g, 1.0);
  f.at(4, 4) = -0.5;
  EXPECT_THROW(assemble_linear_system(f, make_spec(0.0)), std::domain_error);
}

TEST(ApplyT, HarmonicBarrierIsReproduced) {
  const PolarGrid g(1.0, 8.0, 32, 64);
  const AnnulusSpec s = make_spec(0.0, 0.1);
  const AnnulusField w = apply_T(AnnulusField(g, 1.0), s);
  EXPECT_LT(max_abs_diff(w, barrier_field(g, s)), 1e-11);
}

TEST(ApplyT, ConstantDataGivesConstant) {
  const PolarGrid g(1.0, 8.0, 16, 32);
  const AnnulusField w = apply_T(AnnulusField(g, 1.0), make_spec(0.3, 0.0));
  for (double v : w.values) {
    EXPECT_NEAR(v, 1.0, 1e-12);
  }
}

TEST(ApplyT, StaysWithinBarrierRange) {
  const PolarGrid g(1.0, 8.0, 32, 128);
  for (BarrierSign sign : {BarrierSign::Plus, BarrierSign::Minus}) {
    const AnnulusSpec s = make_spec(0.25, 0.05, sign);
    const AnnulusField h = barrier_field(g, s);
    const auto [lo, hi] = std::minmax_element(h.values.begin(), h.values.end());
    const AnnulusField w = apply_T(h, s);
    for (double v : w.values) {
      EXPECT_GE(v, *lo - 1e-8);
      EXPECT_LE(v, *hi + 1e-8);
    }
  }
}

TEST(ApplyT, TwistChangesTheOutput) {
  const PolarGrid g(1.0, 8.0, 24, 64);
  const AnnulusSpec s0 = make_spec(0.0);
  const AnnulusSpec s5 = make_spec(0.5);
  const AnnulusField f = barrier_field(g, s0);
  EXPECT_GT(max_abs_diff(apply_T(f, s0), apply_T(f, s5)), 1e-6);
}

TEST(ApplyT, ManufacturedAnisotropicSolution) {
  // At f = 1 the operator is tr(M D^2) with M = [[1, 2 tau], [2 tau, 1 + 4 tau^2]],
  // which annihilates log(X^T M^{-1} X).
  const double tau = 0.25;
  const double m11 = 1.0;
  const double m12 = 2.0 * tau;
  const double m22 = 1.0 + 4.0 * tau * tau;
  const double det = m11 * m22 - m12 * m12;
  auto exact = [&](double x, double t) { return std::log((m22 * x * x - 2.0 * m12 * x * t + m11 * t * t) / det); };
  double prev = 0.0;
  for (std::size_t k : {1u, 2u, 4u}) {
    const PolarGrid g(1.0, 4.0, 16 * k + 1, 64 * k);
    AnnulusField boundary(g);
    for (std::size_t i = 0; i < g.n_r(); ++i) {
      for (std::size_t j = 0; j < g.n_theta(); ++j) {
        boundary.at(i, j) = exact(g.x(i, j), g.t(i, j));
      }
    }
    const AnnulusField w = solve_with_boundary(AnnulusField(g, 1.0), boundary, {tau});
    const double err = max_abs_diff(w, boundary);
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.6);
      EXPECT_LT(prev / err, 4.4);
    }
    prev = err;
  }
}

TEST(FixedPoint, ReferenceSolve) {
  const AnnulusSpec s = make_spec(0.25);
  const SolveReport r = fixed_point_solve(s, PolarGrid(1.0, 8.0, 64, 256), {});
  ASSERT_TRUE(r.converged) << r.message;
  EXPECT_LE(r.iterations, 50u);
  EXPECT_LT(r.update_norms.back(), 1e-10);
  EXPECT_EQ(r.update_norms.size(), r.iterations);
  EXPECT_FALSE(r.used_newton);
  EXPECT_TRUE(r.bounds_ok);
  EXPECT_GE(r.min_value, 1.0 - 1e-6);
  EXPECT_LE(r.max_value, 1.02 + 1e-6);
  EXPECT_TRUE(r.admissible);
  EXPECT_LE(r.weighted_norm_of_u, std::sqrt(0.02));
  ASSERT_TRUE(r.block_norms.has_value());
  EXPECT_LT(r.discrete_residual_maxnorm, 1e-8);
  EXPECT_GE(r.nonlinear_residual_maxnorm, 0.0);
  EXPECT_TRUE(std::isnan(r.residual.front()));
  EXPECT_TRUE(std::isnan(r.residual.back()));
}

TEST(FixedPoint, ZeroEpsilonIsConstant) {
  const SolveReport r = fixed_point_solve(make_spec(0.25, 0.0), PolarGrid(1.0, 8.0, 16, 32), {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
  for (double v : r.solution.values) {
    EXPECT_EQ(v, 1.0);
  }
}

TEST(FixedPoint, RestartFromSolutionIsImmediate) {
  const AnnulusSpec s = make_spec(0.25);
  const PolarGrid g(1.0, 8.0, 32, 128);
  const SolveReport first = fixed_point_solve(s, g, {});
  ASSERT_TRUE(first.converged);
  const SolveReport again = fixed_point_solve(s, g, {}, first.solution);
  EXPECT_TRUE(again.converged);
  EXPECT_LE(again.iterations, 2u);
}

TEST(FixedPoint, NewtonAgreesWithPicard) {
  const AnnulusSpec s = make_spec(0.25);
  const PolarGrid g(1.0, 8.0, 32, 128);
  const SolveReport picard = fixed_point_solve(s, g, {});
  const SolveReport newton = newton_solve(s, g, {});
  ASSERT_TRUE(picard.converged);
  ASSERT_TRUE(newton.converged);
  EXPECT_LT(max_abs_diff(picard.solution, newton.solution), 1e-9);
}

TEST(FixedPoint, DampedIterationReachesSameSolution) {
  const AnnulusSpec s = make_spec(0.25);
  const PolarGrid g(1.0, 8.0, 24, 64);
  IterationConfig damped;
  damped.damping = 0.5;
  const SolveReport a = fixed_point_solve(s, g, {});
  const SolveReport b = fixed_point_solve(s, g, damped);
  ASSERT_TRUE(b.converged);
  EXPECT_GT(b.iterations, a.iterations);
  EXPECT_LT(max_abs_diff(a.solution, b.solution), 1e-9);
}

TEST(FixedPoint, IterationLimitIsReported) {
  IterationConfig cfg;
  cfg.max_iterations = 2;
  cfg.newton_fallback = false;
  const SolveReport r = fixed_point_solve(make_spec(0.25), PolarGrid(1.0, 8.0, 24, 64), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.update_norms.size(), 2u);
  EXPECT_FALSE(r.message.empty());
}

TEST(FixedPoint, MinusSignMirrorsPlusWithoutTwist) {
  const double eps = 0.02;
  const PolarGrid g(1.0, 8.0, 32, 128);
  const SolveReport plus = fixed_point_solve(make_spec(0.0, eps, BarrierSign::Plus), g, {});
  const SolveReport minus = fixed_point_solve(make_spec(0.0, eps, BarrierSign::Minus), g, {});
  ASSERT_TRUE(plus.converged);
  ASSERT_TRUE(minus.converged);
  EXPECT_GE(minus.min_value, 1.0 - eps - 1e-6);
  EXPECT_LE(minus.max_value, 1.0 + 1e-6);
  double sym = 0.0;
  for (std::size_t k = 0; k < plus.solution.values.size(); ++k) {
    sym = std::max(sym, std::abs((plus.solution.values[k] - 1.0) + (minus.solution.values[k] - 1.0)));
  }
  EXPECT_LT(sym, 2.0 * eps * eps);
}

TEST(FixedPoint, NoTwistStaysInBounds) {
  const SolveReport r = fixed_point_solve(make_spec(0.0), PolarGrid(1.0, 8.0, 32, 128), {});
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(r.bounds_ok);
  EXPECT_TRUE(r.admissible);
}

TEST(IterationConfig, Validation) {
  IterationConfig c;
  EXPECT_NO_THROW(c.validate());
  c.damping = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.damping = 1.0;
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.tolerance = 1e-10;
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
