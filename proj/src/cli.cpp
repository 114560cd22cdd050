#include "pslcmc/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "pslcmc/checks.hpp"
#include "pslcmc/diagnostics.hpp"

namespace pslcmc::cli {

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const char* sign_name(BarrierSign s) { return s == BarrierSign::Plus ? "plus" : "minus"; }
const char* yes_no(bool b) { return b ? "true" : "false"; }

void write_config(std::ostream& os, const RunConfig& cfg) {
  os << "command: " << cfg.command << '\n';
  os << "seed: " << cfg.seed << '\n';
  os << "tau: " << format_double(cfg.spec.params.tau) << '\n';
  os << "r1: " << format_double(cfg.spec.R1) << '\n';
  os << "r2: " << format_double(cfg.spec.R2) << '\n';
  os << "eps: " << format_double(cfg.spec.epsilon) << '\n';
  os << "sign: " << sign_name(cfg.spec.sign) << '\n';
  os << "max_iters: " << cfg.iteration.max_iterations << '\n';
  os << "tol: " << format_double(cfg.iteration.tolerance) << '\n';
  os << "damping: " << format_double(cfg.iteration.damping) << '\n';
  os << "alpha: " << format_double(cfg.iteration.alpha) << '\n';
}

void write_checks(std::ostream& os, const SuiteReport& r) {
  os << "seed: " << r.seed << '\n';
  os << "samples: " << r.samples << '\n';
  for (const CheckResult& c : r.checks) {
    const char* status = c.pass ? "ok" : (c.informational ? "discrepancy" : "FAIL");
    os << c.name << ": " << format_double(c.value) << " (tolerance " << format_double(c.tolerance) << ") "
       << status;
    if (c.informational) {
      os << " [informational]";
    }
    if (!c.detail.empty()) {
      os << " -- " << c.detail;
    }
    os << '\n';
  }
  os << "result: " << (r.passed() ? "pass" : "fail") << '\n';
}

bool open_for_write(std::ofstream& f, const std::string& path, std::ostream& err) {
  f.open(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "cannot open " << path << " for writing\n";
    return false;
  }
  return true;
}

int run_checks(const RunConfig& cfg, bool geometry, std::ostream& out, std::ostream& err) {
  SuiteOptions opts;
  opts.seed = cfg.seed;
  opts.samples = cfg.samples;
  if (cfg.tau_given) {
    opts.tau = cfg.spec.params.tau;
  }
  const SuiteReport r = geometry ? geometry_suite(opts) : identity_suite(opts);
  std::ostringstream text;
  text << "command: " << cfg.command << '\n';
  if (cfg.tau_given) {
    text << "tau: " << format_double(cfg.spec.params.tau) << '\n';
  } else {
    text << "tau: random in [-2, 2]\n";
  }
  write_checks(text, r);
  out << text.str();
  if (!cfg.out.empty()) {
    std::ofstream f;
    if (!open_for_write(f, cfg.out + ".report.txt", err)) {
      return check_failed;
    }
    f << text.str();
  }
  return r.passed() ? ok : check_failed;
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PolarGrid grid(cfg.spec.R1, cfg.spec.R2, cfg.n_r, cfg.n_theta);
  SolveReport report(grid);
  try {
    report = fixed_point_solve(cfg.spec, grid, cfg.iteration);
  } catch (const std::domain_error& e) {
    report.converged = false;
    report.message = e.what();
  }
  const std::string base = cfg.out.empty() ? "solution" : cfg.out;
  std::ofstream csv;
  std::ofstream rep;
  if (!open_for_write(csv, base + ".csv", err) || !open_for_write(rep, base + ".report.txt", err)) {
    return check_failed;
  }
  write_solution_csv(csv, report);
  write_solve_report(rep, cfg, report);

  out << "converged: " << yes_no(report.converged) << '\n';
  out << "iterations: " << report.iterations << '\n';
  out << "residual_eq1_maxnorm: " << format_double(report.nonlinear_residual_maxnorm) << '\n';
  out << "range: [" << format_double(report.min_value) << ", " << format_double(report.max_value) << "]\n";
  out << "admissible: " << yes_no(report.admissible) << '\n';
  out << "wrote " << base << ".csv and " << base << ".report.txt\n";
  if (!report.converged) {
    err << "solve did not converge: " << report.message << '\n';
    return not_converged;
  }
  return ok;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  GridPolicy policy;
  policy.n_theta = cfg.n_theta;
  policy.nodes_per_log_unit = cfg.nodes_per_log_unit;
  policy.min_n_r = std::max(cfg.n_r, PolarGrid::min_radial_nodes);
  const SweepTable table = r2_sweep(cfg.spec, cfg.factors, policy, cfg.iteration, cfg.workers);

  const std::string base = cfg.out.empty() ? "sweep" : cfg.out;
  std::ofstream csv;
  std::ofstream rep;
  if (!open_for_write(csv, base + ".csv", err) || !open_for_write(rep, base + ".report.txt", err)) {
    return check_failed;
  }
  write_sweep_csv(csv, table);
  write_sweep_report(rep, cfg, table);
  write_sweep_csv(out, table);
  out << "all_converged: " << yes_no(table.all_converged) << '\n';
  out << "monotone: " << yes_no(table.monotone) << '\n';
  if (!table.all_converged) {
    err << "at least one member solve failed\n";
    return not_converged;
  }
  return table.monotone ? ok : check_failed;
}

} // namespace

void write_solution_csv(std::ostream& os, const SolveReport& report) {
  const PolarGrid& g = report.solution.grid;
  os << "r,theta,x,t,f,residual_eq1\n";
  for (std::size_t i = 0; i < g.n_r(); ++i) {
    for (std::size_t j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const double res = k < report.residual.size() ? report.residual[k] : std::nan("");
      os << format_double(g.radius(i)) << ',' << format_double(g.theta(j)) << ',' << format_double(g.x(i, j)) << ','
         << format_double(g.t(i, j)) << ',' << format_double(report.solution.values[k]) << ',' << format_double(res)
         << '\n';
    }
  }
}

void write_solve_report(std::ostream& os, const RunConfig& cfg, const SolveReport& report) {
  write_config(os, cfg);
  os << "n_r: " << report.solution.grid.n_r() << '\n';
  os << "n_theta: " << report.solution.grid.n_theta() << '\n';
  os << "converged: " << yes_no(report.converged) << '\n';
  os << "iterations: " << report.iterations << '\n';
  os << "used_newton: " << yes_no(report.used_newton) << '\n';
  os << "residual_eq1_maxnorm: " << format_double(report.nonlinear_residual_maxnorm) << '\n';
  os << "discrete_residual_maxnorm: " << format_double(report.discrete_residual_maxnorm) << '\n';
  os << "min_value: " << format_double(report.min_value) << '\n';
  os << "max_value: " << format_double(report.max_value) << '\n';
  os << "bounds_ok: " << yes_no(report.bounds_ok) << '\n';
  os << "weighted_norm_of_u: " << format_double(report.weighted_norm_of_u) << '\n';
  os << "admissibility_threshold: " << format_double(std::sqrt(cfg.spec.epsilon)) << '\n';
  os << "admissible: " << yes_no(report.admissible) << '\n';
  if (report.block_norms) {
    for (std::size_t b = 0; b < 3; ++b) {
      os << "block_norm_u" << b + 1 << ": " << format_double((*report.block_norms)[b]) << '\n';
    }
  }
  if (!report.message.empty()) {
    os << "message: " << report.message << '\n';
  }
  os << "trace:\n";
  for (std::size_t k = 0; k < report.update_norms.size(); ++k) {
    os << "update_norm_" << k + 1 << ": " << format_double(report.update_norms[k]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "factor,R2,n_r,n_theta,converged,iterations,deviation,barrier_deviation,residual_eq1,weighted_norm_of_u,"
        "admissible,bounds_ok,error\n";
  for (const SweepRow& r : table.rows) {
    std::string error = r.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') {
        c = ';';
      }
    }
    os << format_double(r.factor) << ',' << format_double(r.R2) << ',' << r.n_r << ',' << r.n_theta << ','
       << yes_no(r.converged) << ',' << r.iterations << ',' << format_double(r.deviation) << ','
       << format_double(r.barrier_deviation) << ',' << format_double(r.residual) << ','
       << format_double(r.weighted_norm_of_u) << ',' << yes_no(r.admissible) << ',' << yes_no(r.bounds_ok) << ','
       << error << '\n';
  }
}

void write_sweep_report(std::ostream& os, const RunConfig& cfg, const SweepTable& table) {
  write_config(os, cfg);
  os << "n_theta: " << cfg.n_theta << '\n';
  os << "nodes_per_log_unit: " << format_double(cfg.nodes_per_log_unit) << '\n';
  os << "members: " << table.rows.size() << '\n';
  os << "all_converged: " << yes_no(table.all_converged) << '\n';
  os << "monotone: " << yes_no(table.monotone) << '\n';
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const SweepRow& r = table.rows[k];
    const std::string p = "member_" + std::to_string(k + 1) + "_";
    os << p << "factor: " << format_double(r.factor) << '\n';
    os << p << "converged: " << yes_no(r.converged) << '\n';
    os << p << "deviation: " << format_double(r.deviation) << '\n';
    os << p << "deviation_over_barrier: " << format_double(r.deviation / r.barrier_deviation) << '\n';
    if (!r.error.empty()) {
      os << p << "error: " << r.error << '\n';
    }
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string sign = "plus";
  CLI::App app{"Numerical laboratory for H = 1/2 horizontal graphs in PSL2(R, tau)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Plain-text key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  CLI::Option* tau = app.add_option("--tau", cfg.spec.params.tau, "Bundle curvature tau (checks draw tau at random when omitted)")
                         ->capture_default_str();
  app.add_option("--r1", cfg.spec.R1, "Inner radius R1")->capture_default_str();
  app.add_option("--r2", cfg.spec.R2, "Outer radius R2 (>= 2 R1)")->capture_default_str();
  app.add_option("--eps", cfg.spec.epsilon, "Barrier height epsilon in [0, 1)")->capture_default_str();
  app.add_option("--sign", sign, "Barrier sign")->check(CLI::IsMember({"plus", "minus"}))->capture_default_str();
  app.add_option("--nr", cfg.n_r, "Radial nodes (sweep: minimum radial nodes)")->capture_default_str();
  app.add_option("--ntheta", cfg.n_theta, "Angular nodes")->capture_default_str();
  app.add_option("--max-iters", cfg.iteration.max_iterations, "Maximum fixed-point iterations")->capture_default_str();
  app.add_option("--tol", cfg.iteration.tolerance, "Sup-norm update tolerance")->capture_default_str();
  app.add_option("--damping", cfg.iteration.damping, "Damping theta in (0, 1]")->capture_default_str();
  app.add_option("--alpha", cfg.iteration.alpha, "Hoelder exponent of the weighted norm")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for random points and jets")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Random samples per check")->capture_default_str();
  app.add_option("--factors", cfg.factors, "Sweep factors R2/R1, increasing, each >= 2")->capture_default_str();
  app.add_option("--nodes-per-log", cfg.nodes_per_log_unit, "Sweep radial nodes per unit of log(R2/R1)")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "Concurrent sweep members (0 = available parallelism)")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output path prefix; solve and sweep write <out>.csv and <out>.report.txt");

  app.add_subcommand("check-geometry", "Frame, connection, bracket and Killing checks at random points")->fallthrough();
  app.add_subcommand("check-identities", "Mean curvature, equation, linearization and Laplace-Beltrami identities")
      ->fallthrough();
  app.add_subcommand("solve", "Fixed-point solve on one annulus")->fallthrough();
  app.add_subcommand("sweep", "Solves for a list of R2/R1 factors")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid_arguments;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.tau_given = tau->count() > 0;
  cfg.spec.sign = sign == "plus" ? BarrierSign::Plus : BarrierSign::Minus;

  try {
    if (!std::isfinite(cfg.spec.params.tau)) {
      throw std::invalid_argument("tau must be finite");
    }
    if (cfg.command == "check-geometry" || cfg.command == "check-identities") {
      if (cfg.samples == 0) {
        throw std::invalid_argument("samples must be >= 1");
      }
      return run_checks(cfg, cfg.command == "check-geometry", out, err);
    }
    cfg.spec.validate();
    cfg.iteration.validate();
    if (cfg.command == "solve") {
      return run_solve(cfg, out, err);
    }
    return run_sweep(cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "invalid arguments: " << e.what() << '\n';
    return invalid_arguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return check_failed;
  }
}

} // namespace pslcmc::cli
