#include "pslcmc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace pslcmc {

PolarGrid GridPolicy::grid_for(double r1, double r2) const {
  const auto wanted = static_cast<std::size_t>(std::ceil(nodes_per_log_unit * std::log(r2 / r1))) + 1;
  return PolarGrid(r1, r2, std::max({min_n_r, wanted, PolarGrid::min_radial_nodes}), n_theta);
}

double compact_deviation(const AnnulusField& f, const AnnulusSpec& spec) {
  const double target = 1.0 + spec.sign_value() * spec.epsilon;
  const double limit = 2.0 * spec.R1 * (1.0 + 1e-12);
  double sup = 0.0;
  for (std::size_t i = 0; i < f.grid.n_r() && f.grid.radius(i) <= limit; ++i) {
    for (std::size_t j = 0; j < f.grid.n_theta(); ++j) {
      sup = std::max(sup, std::abs(f.at(i, j) - target));
    }
  }
  return sup;
}

namespace {

SweepRow run_member(const AnnulusSpec& base, double factor, const GridPolicy& policy, const IterationConfig& config) {
  SweepRow row;
  row.factor = factor;
  row.R2 = factor * base.R1;
  row.barrier_deviation = base.epsilon * std::log(2.0) / std::log(factor);
  try {
    AnnulusSpec spec = base;
    spec.R2 = row.R2;
    const PolarGrid grid = policy.grid_for(spec.R1, spec.R2);
    row.n_r = grid.n_r();
    row.n_theta = grid.n_theta();
    const SolveReport report = fixed_point_solve(spec, grid, config);
    row.converged = report.converged;
    row.iterations = report.iterations;
    row.deviation = compact_deviation(report.solution, spec);
    row.residual = report.nonlinear_residual_maxnorm;
    row.weighted_norm_of_u = report.weighted_norm_of_u;
    row.admissible = report.admissible;
    row.bounds_ok = report.bounds_ok;
    if (!report.converged) {
      row.error = report.message;
    }
  } catch (const std::exception& e) {
    row.converged = false;
    row.error = e.what();
  }
  return row;
}

} // namespace

SweepTable r2_sweep(const AnnulusSpec& base, const std::vector<double>& factors, const GridPolicy& policy,
                    const IterationConfig& config, std::size_t workers) {
  if (factors.empty()) {
    throw std::invalid_argument("factors: at least one factor is required");
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (!(factors[k] >= 2.0)) {
      throw std::invalid_argument("factors: each factor must be >= 2");
    }
    if (k > 0 && !(factors[k] > factors[k - 1])) {
      throw std::invalid_argument("factors: must be strictly increasing");
    }
  }
  AnnulusSpec check = base;
  check.R2 = factors.front() * base.R1;
  check.validate();
  config.validate();

  SweepTable table;
  table.rows.resize(factors.size());
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, factors.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < factors.size(); k = next++) {
      table.rows[k] = run_member(base, factors[k], policy, config);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }

  table.all_converged = std::all_of(table.rows.begin(), table.rows.end(), [](const SweepRow& r) { return r.converged; });
  table.monotone = true;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    if (table.rows[k].deviation > 1.05 * table.rows[k - 1].deviation) {
      table.monotone = false;
    }
  }
  return table;
}

} // namespace pslcmc
