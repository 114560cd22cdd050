#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "pslcmc/errors.hpp"
#include "pslcmc/graph_surface.hpp"

using namespace pslcmc;

namespace {

Jet2 to_jet(const oracle::Jet& j) { return {j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt}; }

Jet2 constant(double c) { return {c, 0.0, 0.0, 0.0, 0.0, 0.0}; }

// Jet of f = 1 + 0.1 sin x sin t.
Jet2 wave_jet(double x, double t) {
  const double s = 0.1 * std::sin(x) * std::sin(t);
  return {1.0 + s, 0.1 * std::cos(x) * std::sin(t), 0.1 * std::sin(x) * std::cos(t), -s,
          0.1 * std::cos(x) * std::cos(t), -s};
}

SurfaceField wave_field(std::size_t n) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  SurfaceField S(0.0, 0.0, h, h, n + 1, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t k = 0; k <= n; ++k) {
      S.at(i, k) = wave_jet(S.x(i), S.t(k)).f;
    }
  }
  return S;
}

} // namespace

TEST(GradientW, Examples) {
  EXPECT_DOUBLE_EQ(gradient_w(constant(1.0), {0.3}), 1.0);
  EXPECT_DOUBLE_EQ(gradient_w(constant(2.0), {-1.0}), 2.0);
  EXPECT_NEAR(gradient_w({1.0, 1.0, 1.0, 0.0, 0.0, 0.0}, {0.0}), std::sqrt(3.0), 1e-15);
}

TEST(GradientW, BothFormsAgreeAndBoundBelowByF) {
  oracle::JetSource src(11);
  for (int n = 0; n < 1000; ++n) {
    const Jet2 j = to_jet(src.jet());
    const ModelParams p{src.uniform(-2.0, 2.0)};
    const double W = gradient_w(j, p);
    EXPECT_NEAR(W, gradient_w_lambda_form(j, p), 1e-14 * W);
    EXPECT_GE(W, j.f);
  }
}

TEST(FundamentalForms, ConstantGraphWithoutTwist) {
  const FormCoefficients c = fundamental_forms(constant(1.0), {0.0});
  EXPECT_NEAR(c.g11, 1.0, 1e-15);
  EXPECT_NEAR(c.g12, 0.0, 1e-15);
  EXPECT_NEAR(c.g22, 1.0, 1e-15);
  EXPECT_NEAR(c.b11, 1.0, 1e-15);
  EXPECT_NEAR(c.b12, 0.0, 1e-15);
  EXPECT_NEAR(c.b22, 0.0, 1e-15);
}

TEST(FundamentalForms, ConstantGraphWithTwist) {
  for (double tau : {-1.5, 0.25, 2.0}) {
    const FormCoefficients c = fundamental_forms(constant(1.0), {tau});
    EXPECT_NEAR(c.g11, 1.0 + 4.0 * tau * tau, 1e-14);
    EXPECT_NEAR(c.g12, -2.0 * tau, 1e-14);
    EXPECT_NEAR(c.g22, 1.0, 1e-14);
  }
}

TEST(FundamentalForms, FirstFormMatchesAmbientMetric) {
  oracle::JetSource src(5);
  for (int n = 0; n < 200; ++n) {
    const oracle::Jet o = src.jet();
    const double tau = src.uniform(-2.0, 2.0);
    const FormCoefficients c = fundamental_forms(to_jet(o), {tau});
    const oracle::Mat g = oracle::metric(o.f, tau);
    const oracle::Vec px{1.0, o.fx, 0.0};
    const oracle::Vec pt{0.0, o.ft, 1.0};
    EXPECT_NEAR(c.g11, oracle::inner(g, px, px), 1e-12 * std::max(1.0, c.g11));
    EXPECT_NEAR(c.g12, oracle::inner(g, px, pt), 1e-12 * std::max(1.0, std::abs(c.g12)));
    EXPECT_NEAR(c.g22, oracle::inner(g, pt, pt), 1e-12 * std::max(1.0, c.g22));
    EXPECT_GT(c.det(), 0.0);
  }
}

TEST(FundamentalForms, RejectsNonPositiveGraph) {
  EXPECT_THROW(fundamental_forms(constant(0.0), {0.0}), std::domain_error);
  EXPECT_THROW(mean_curvature(constant(-1.0), {0.0}), std::domain_error);
}

TEST(MeanCurvature, HorocylindersHaveOneHalf) {
  oracle::JetSource src(1);
  for (int n = 0; n < 100; ++n) {
    const double c = src.uniform(0.1, 10.0);
    const double tau = src.uniform(-2.0, 2.0);
    EXPECT_NEAR(mean_curvature(constant(c), {tau}), 0.5, 1e-12);
  }
}

TEST(MeanCurvature, TwiceHorocylinderEqualsHorocycleCurvature) {
  for (double c : {0.3, 1.0, 5.0}) {
    EXPECT_NEAR(2.0 * mean_curvature(constant(c), {0.7}), base_horocycle_curvature(c), 1e-6);
  }
}

TEST(MeanCurvature, MatchesEmbeddingOracle) {
  oracle::JetSource src(2024);
  for (int n = 0; n < 1000; ++n) {
    const oracle::Jet o = src.jet();
    const double tau = src.uniform(-2.0, 2.0);
    const double H = mean_curvature(to_jet(o), {tau});
    ASSERT_NEAR(H, oracle::mean_curvature(o, tau), 1e-10 * std::max(1.0, std::abs(H)));
  }
}

TEST(MeanCurvature, SmallSlopeAgainstDisplayedEquation) {
  const Jet2 j{1.0, 0.1, 0.0, 0.0, 0.0, 0.0};
  const ModelParams p{0.0};
  const double W = gradient_w(j, p);
  const double rhs = (j.f * j.f + j.ft * j.ft) * j.fxx + j.f * (1.0 + j.fx * j.fx);
  EXPECT_NEAR(mean_curvature(j, p), 0.5 * rhs / (W * W * W / (j.f * j.f)), 1e-14);
}

TEST(MeanCurvature, SymmetricUnderReflectionsWithoutTwist) {
  oracle::JetSource src(9);
  for (int n = 0; n < 100; ++n) {
    const Jet2 j = to_jet(src.jet());
    const double H = mean_curvature(j, {0.0});
    EXPECT_NEAR(H, mean_curvature({j.f, -j.fx, -j.ft, j.fxx, j.fxt, j.ftt}, {0.0}), 1e-12);
    EXPECT_NEAR(H, mean_curvature({j.f, -j.fx, j.ft, j.fxx, -j.fxt, j.ftt}, {0.0}), 1e-12);
  }
}

TEST(UnitNormal, HasUnitLength) {
  oracle::JetSource src(4);
  for (int n = 0; n < 200; ++n) {
    const Jet2 j = to_jet(src.jet());
    const Vec3 N = unit_normal_frame(j, {src.uniform(-2.0, 2.0)});
    EXPECT_NEAR(N[0] * N[0] + N[1] * N[1] + N[2] * N[2], 1.0, 1e-12);
  }
}

TEST(ResidualHForm, Examples) {
  for (double c : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(residual_eq_lemma21(constant(c), 0.5, {0.4}), 0.0, 1e-14);
    EXPECT_NEAR(residual_eq_lemma21(constant(c), 0.0, {0.4}), -c, 1e-14);
  }
}

TEST(ResidualHForm, VanishesAtComputedMeanCurvature) {
  oracle::JetSource src(17);
  for (int n = 0; n < 500; ++n) {
    const Jet2 j = to_jet(src.jet());
    const ModelParams p{src.uniform(-2.0, 2.0)};
    const double W = gradient_w(j, p);
    const double H = mean_curvature(j, p);
    const double scale = std::max(1.0, std::abs(2.0 * H * W * W * W / (j.f * j.f)));
    EXPECT_NEAR(residual_eq_lemma21(j, H, p) / scale, 0.0, 1e-9);
  }
}

TEST(ResidualEq1, Examples) {
  EXPECT_DOUBLE_EQ(residual_eq1(constant(2.5), {0.3}), 0.0);
  EXPECT_NEAR(residual_eq1({1.0, 0.0, 0.0, 1.0, 0.0, 0.0}, {0.0}), 1.0, 1e-15);
}

TEST(ResidualEq1, OppositeSignToHForm) {
  oracle::JetSource src(23);
  for (int n = 0; n < 500; ++n) {
    const Jet2 j = to_jet(src.jet());
    const ModelParams p{src.uniform(-2.0, 2.0)};
    const double a = residual_eq1(j, p);
    const double b = residual_eq_lemma21(j, 0.5, p);
    EXPECT_NEAR(a, -b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(ResidualEq1, VanishesOnSolutionJets) {
  oracle::JetSource src(29);
  for (int n = 0; n < 500; ++n) {
    Jet2 j = to_jet(src.jet());
    const ModelParams p{src.uniform(-2.0, 2.0)};
    // The equation is linear in f_xx with coefficient f^2 + f_t^2.
    j.fxx = 0.0;
    j.fxx = -residual_eq1(j, p) / (j.f * j.f + j.ft * j.ft);
    EXPECT_NEAR(residual_eq1(j, p), 0.0, 1e-10 * std::max(1.0, std::abs(j.fxx)));
    EXPECT_NEAR(mean_curvature(j, p), 0.5, 1e-10);
    EXPECT_NEAR(oracle::mean_curvature({j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt}, p.tau), 0.5, 1e-10);
  }
}

TEST(SecondForm, PrintedFormsAgreeAfterNormalisation) {
  oracle::JetSource src(31);
  for (int n = 0; n < 200; ++n) {
    const Jet2 j = to_jet(src.jet());
    const SecondFormComparison c = compare_printed_second_form(j, {src.uniform(-2.0, 2.0)});
    EXPECT_LT(c.normalised_max_diff, 1e-10);
  }
  const SecondFormComparison c = compare_printed_second_form({2.0, 0.3, -0.4, 0.1, 0.2, 0.3}, {0.5});
  EXPECT_GT(c.raw_max_diff, 1e-3);
}

TEST(Lemma22, ConstantGraph) {
  const Lemma22Values v = lemma22_identities(constant(1.7), {0.9});
  EXPECT_NEAR(v.laplace_f, 0.0, 1e-15);
  EXPECT_NEAR(v.laplace_inv_f, 0.0, 1e-15);
  EXPECT_NEAR(laplace_inv_f_solution_form(constant(1.7), {0.9}), 0.0, 1e-15);
}

TEST(Lemma22, ClosedFormsOnSolutionJets) {
  oracle::JetSource src(37);
  for (int n = 0; n < 300; ++n) {
    Jet2 j = to_jet(src.jet());
    const ModelParams p{src.uniform(-2.0, 2.0)};
    j.fxx = 0.0;
    j.fxx = -residual_eq1(j, p) / (j.f * j.f + j.ft * j.ft);
    const ScalarJet2 f{j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt};
    const double lf = laplace_beltrami_pointwise(j, f, p);
    EXPECT_NEAR(lf, lemma22_identities(j, p).laplace_f, 1e-10 * std::max(1.0, std::abs(lf)));

    const double f2 = j.f * j.f;
    const double f3 = f2 * j.f;
    const ScalarJet2 inv{1.0 / j.f,
                         -j.fx / f2,
                         -j.ft / f2,
                         -j.fxx / f2 + 2.0 * j.fx * j.fx / f3,
                         -j.fxt / f2 + 2.0 * j.fx * j.ft / f3,
                         -j.ftt / f2 + 2.0 * j.ft * j.ft / f3};
    const double li = laplace_beltrami_pointwise(j, inv, p);
    EXPECT_NEAR(li, laplace_inv_f_solution_form(j, p), 1e-10 * std::max(1.0, std::abs(li)));
  }
}

TEST(Lemma22, GeneralExpansionMatchesPointwiseOperator) {
  oracle::JetSource src(41);
  for (int n = 0; n < 500; ++n) {
    const Jet2 j = to_jet(src.jet());
    const ModelParams p{src.uniform(-2.0, 2.0)};
    const double exact = laplace_beltrami_pointwise(j, {j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt}, p);
    EXPECT_NEAR(laplace_f_general_corrected(j, p), exact, 1e-10 * std::max(1.0, std::abs(exact)));
  }
  // The printed grouping only differs when f_t is not 0 or 1.
  const Jet2 j{1.3, 0.4, 0.5, 0.1, -0.2, 0.3};
  EXPECT_GT(std::abs(laplace_f_general_printed(j, {0.3}) - laplace_f_general_corrected(j, {0.3})), 1e-3);
}

TEST(LaplaceBeltrami, ConstantScalarGivesZero) {
  const SurfaceField S = wave_field(16);
  SurfaceField phi = S;
  for (double& v : phi.values) {
    v = 3.0;
  }
  const SurfaceField out = laplace_beltrami(S, phi, {0.4});
  EXPECT_EQ(out.nx, 15u);
  EXPECT_EQ(out.nt, 15u);
  for (double v : out.values) {
    EXPECT_NEAR(v, 0.0, 1e-13);
  }
}

TEST(LaplaceBeltrami, ConstantGraphGivesZero) {
  SurfaceField S(0.0, 0.0, 0.1, 0.1, 10, 10);
  for (double& v : S.values) {
    v = 2.0;
  }
  for (double v : laplace_beltrami(S, S, {0.6}).values) {
    EXPECT_NEAR(v, 0.0, 1e-13);
  }
}

TEST(LaplaceBeltrami, SecondOrderAgainstPointwiseOperator) {
  for (double tau : {0.0, 0.25, -1.0}) {
    double prev = 0.0;
    for (std::size_t n : {32u, 64u, 128u}) {
      const SurfaceField S = wave_field(n);
      const SurfaceField out = laplace_beltrami(S, S, {tau});
      double err = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 1; k < n; ++k) {
          const Jet2 j = wave_jet(S.x(i), S.t(k));
          const double exact = laplace_beltrami_pointwise(j, {j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt}, {tau});
          err = std::max(err, std::abs(out.at(i - 1, k - 1) - exact));
        }
      }
      if (prev > 0.0) {
        EXPECT_GT(prev / err, 3.5) << "tau=" << tau << " n=" << n;
        EXPECT_LT(prev / err, 4.5) << "tau=" << tau << " n=" << n;
      }
      prev = err;
    }
  }
}

TEST(LaplaceBeltrami, RejectsBadInput) {
  const SurfaceField S = wave_field(8);
  const SurfaceField other(0.0, 0.0, 0.5, 0.5, 9, 9);
  EXPECT_THROW(laplace_beltrami(S, other, {0.0}), std::invalid_argument);
  const SurfaceField tiny(0.0, 0.0, 0.1, 0.1, 2, 2);
  EXPECT_THROW(laplace_beltrami(tiny, tiny, {0.0}), std::invalid_argument);
  SurfaceField bad = S;
  bad.values[3] = 0.0;
  EXPECT_THROW(laplace_beltrami(bad, S, {0.0}), std::domain_error);
}
