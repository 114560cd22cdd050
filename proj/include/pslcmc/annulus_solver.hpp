#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "pslcmc/geometry.hpp"
#include "pslcmc/polar_grid.hpp"

namespace pslcmc {

enum class BarrierSign { Plus, Minus };

/// Dirichlet problem on U = B_{R2} \ B_{R1} with barrier boundary data.
struct AnnulusSpec {
  double R1 = 1.0;
  double R2 = 8.0;
  double epsilon = 0.02;
  BarrierSign sign = BarrierSign::Plus;
  ModelParams params{};

  double sign_value() const { return sign == BarrierSign::Plus ? 1.0 : -1.0; }

  /// Throws std::invalid_argument naming the offending field. Requires
  /// 0 < R1, R2 >= 2 R1 and 0 <= epsilon < 1 (epsilon = 0 is the trivial
  /// constant problem).
  void validate() const;
};

/// h(r) = 1 +- (eps / log(R2/R1)) log(R2/r); throws std::domain_error for r
/// outside [R1, R2].
double barrier_h(double r, const AnnulusSpec& spec);

/// barrier_h sampled on every node of the grid.
AnnulusField barrier_field(const PolarGrid& grid, const AnnulusSpec& spec);

struct FrozenCoefficients {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;

  double ellipticity() const { return a * c - b * b; }
};

/// Coefficients of L_f w = a w_xx + 2 b w_xt + c w_tt + d w_x + e w_t frozen at
/// (f, f_x, f_t), chosen so that L_f applied to f itself is the residual of
/// the H = 1/2 equation (residual_eq1). Throws std::domain_error for f <= 0.
FrozenCoefficients frozen_coefficients(double f, double fx, double ft, const ModelParams& params);

/// L_f[f] at a jet using frozen_coefficients.
double apply_frozen_operator(const Jet2& j, const ModelParams& params);

/// Discrete L_f w = 0 with w = h on both circles. Unknowns are the interior
/// rings 1..n_r-2, flat index (i - 1) * n_theta + j.
struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::size_t n_r = 0;
  std::size_t n_theta = 0;
};

/// Transforms L_f to (s = log r, theta), multiplies by r^2 and discretises
/// with second-order central differences (nine-point stencil for the mixed
/// term). Boundary rings of the result take their values from barrier_h.
/// Throws AssemblyError naming the node if a c - b^2 <= 0 anywhere, and
/// std::domain_error if f <= 0 at some node.
LinearSystem assemble_linear_system(const AnnulusField& f, const AnnulusSpec& spec);

/// Same assembly for arbitrary boundary values (taken from the first and last
/// ring of `boundary`).
LinearSystem assemble_linear_system(const AnnulusField& f, const AnnulusField& boundary, const ModelParams& params);

/// w = T f: solution of the assembled system, boundary rings filled with h.
/// Throws SolverError if the factorisation fails or the relative algebraic
/// residual exceeds 1e-12.
AnnulusField apply_T(const AnnulusField& f, const AnnulusSpec& spec);

struct IterationConfig {
  std::size_t max_iterations = 200;
  double tolerance = 1e-10;
  double damping = 1.0;
  bool newton_fallback = true;
  double stagnation_ratio = 0.99;
  std::size_t stagnation_window = 10;
  double alpha = 0.5;

  void validate() const;
};

struct SolveReport {
  AnnulusField solution;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> update_norms;
  bool used_newton = false;
  /// Sup over interior nodes of |residual_eq1| on fourth-order jets.
  double nonlinear_residual_maxnorm = 0.0;
  /// Sup of the discrete residual L_f[f] of the assembled scheme.
  double discrete_residual_maxnorm = 0.0;
  /// residual_eq1 per node; NaN on the two boundary circles.
  std::vector<double> residual;
  bool bounds_ok = false;
  double min_value = 0.0;
  double max_value = 0.0;
  double weighted_norm_of_u = 0.0;
  bool admissible = false;
  /// Weighted norm of u = f - h on U1, U2, U3 when R2 >= 4 R1.
  std::optional<std::array<double, 3>> block_norms;
  std::string message;

  explicit SolveReport(PolarGrid g) : solution(std::move(g)) {}
};

/// Picard iteration f_{k+1} = (1 - theta) f_k + theta T(f_k) from f_0 = h (or
/// `initial`), until the sup-norm update drops below the tolerance. If the
/// update ratio stays above stagnation_ratio for stagnation_window
/// consecutive steps and newton_fallback is set, continues with Newton on the
/// discrete residual. Non-convergence is reported, not thrown.
/// Throws std::domain_error if the iterate drops below 1e-8.
SolveReport fixed_point_solve(const AnnulusSpec& spec, const PolarGrid& grid, const IterationConfig& config,
                              const std::optional<AnnulusField>& initial = std::nullopt);

/// Newton's method on the discrete residual L_f[f] with Dirichlet data h.
SolveReport newton_solve(const AnnulusSpec& spec, const PolarGrid& grid, const IterationConfig& config,
                         const std::optional<AnnulusField>& initial = std::nullopt);

/// residual_eq1 on fourth-order jets at interior nodes, NaN on both circles.
std::vector<double> equation_residual_field(const AnnulusField& f, const ModelParams& params);

/// Discrete residual of the assembled scheme at interior nodes (0 on circles).
std::vector<double> discrete_residual_field(const AnnulusField& f, const ModelParams& params);

} // namespace pslcmc
