#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pslcmc/annulus_solver.hpp"
#include "pslcmc/sweep.hpp"

namespace pslcmc::cli {

enum ExitCode : int { ok = 0, check_failed = 1, invalid_arguments = 2, not_converged = 3 };

/// Everything a command needs, after flags and the optional config file have
/// been merged.
struct RunConfig {
  std::string command;
  AnnulusSpec spec;
  std::size_t n_r = 64;
  std::size_t n_theta = 256;
  IterationConfig iteration;
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  bool tau_given = false;
  std::vector<double> factors{4.0, 8.0, 16.0, 32.0};
  double nodes_per_log_unit = 30.0;
  std::size_t workers = 0;
  std::string out;
};

/// Shortest decimal that reads back to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double v);

/// Header `r,theta,x,t,f,residual_eq1`, one row per node in (r index, theta
/// index) order.
void write_solution_csv(std::ostream& os, const SolveReport& report);
void write_solve_report(std::ostream& os, const RunConfig& cfg, const SolveReport& report);
void write_sweep_csv(std::ostream& os, const SweepTable& table);
void write_sweep_report(std::ostream& os, const RunConfig& cfg, const SweepTable& table);

/// Parses argv and runs the selected command. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pslcmc::cli
