#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pslcmc/annulus_solver.hpp"

namespace pslcmc {

/// How the grid grows with R2: the radial spacing in log r is kept fixed, so
/// n_r = max(min_n_r, ceil(nodes_per_log_unit * log(R2/R1)) + 1).
struct GridPolicy {
  std::size_t n_theta = 256;
  double nodes_per_log_unit = 30.0;
  std::size_t min_n_r = 16;

  PolarGrid grid_for(double r1, double r2) const;
};

struct SweepRow {
  double factor = 0.0;
  double R2 = 0.0;
  std::size_t n_r = 0;
  std::size_t n_theta = 0;
  bool converged = false;
  std::size_t iterations = 0;
  /// sup over R1 <= r <= 2 R1 of |f - (1 +- eps)|.
  double deviation = 0.0;
  /// eps log 2 / log(R2/R1), the barrier's own deviation on the same set.
  double barrier_deviation = 0.0;
  double residual = 0.0;
  double weighted_norm_of_u = 0.0;
  bool admissible = false;
  bool bounds_ok = false;
  std::string error;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool all_converged = false;
  /// Deviations non-increasing up to a 5% relative slack.
  bool monotone = false;
};

/// sup over the compact set {R1 <= r <= 2 R1} of |f - (1 +- eps)|.
double compact_deviation(const AnnulusField& f, const AnnulusSpec& spec);

/// Solves the annulus problem for R2 = factor * R1 for each factor (each
/// >= 2, strictly increasing; std::invalid_argument otherwise). Member solves
/// run on up to `workers` threads (0 = hardware concurrency); failures are
/// recorded in their row and do not abort the sweep.
SweepTable r2_sweep(const AnnulusSpec& base, const std::vector<double>& factors, const GridPolicy& policy,
                    const IterationConfig& config, std::size_t workers = 0);

} // namespace pslcmc
