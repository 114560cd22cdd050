#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pslcmc/geometry.hpp"

namespace pslcmc {

/// One line of a check suite. Informational entries never fail the suite.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool informational = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  bool passed() const;
};

/// Sampling for the random suites. Points have y in [0.1, 10]; tau is drawn
/// from [-2, 2] unless fixed.
struct SuiteOptions {
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  std::optional<double> tau;
};

/// Orthonormality, torsion, metric compatibility, brackets by finite
/// differences of the frame, Killing property of E3 and the horocycle
/// curvature. Throws std::invalid_argument if samples == 0.
SuiteReport geometry_suite(const SuiteOptions& opts);

/// Horocylinder mean curvature and 2H against the base horocycle.
CheckResult horocylinder_check(const SuiteOptions& opts);

/// Relative deviation of L_f[f] from the H = 1/2 equation on random jets.
CheckResult linearization_contract_check(const SuiteOptions& opts);

/// Discrete Laplace-Beltrami of f = 1 + 0.1 sin x sin t on [0, 2pi]^2 against
/// pointwise closed forms, at the given numbers of intervals per side.
struct LaplaceRefinement {
  std::vector<std::size_t> intervals;
  /// Max interior error against the corrected general expansion.
  std::vector<double> errors;
  std::vector<double> ratios;
  std::vector<double> orders;
  /// Same against the expansion as printed.
  std::vector<double> printed_errors;
  std::vector<double> printed_orders;
  /// Largest pointwise gap between the printed and corrected expansions.
  double printed_gap = 0.0;
};
LaplaceRefinement laplace_refinement(const ModelParams& params, const std::vector<std::size_t>& intervals = {32, 64, 128});

/// Everything from horocylinder_check and linearization_contract_check plus W
/// coherence, equation coherence, normal length, the printed second form and
/// Laplace-Beltrami closed forms (hard where they hold, reported otherwise)
/// and the refinement study.
SuiteReport identity_suite(const SuiteOptions& opts);

} // namespace pslcmc
