#include "pslcmc/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pslcmc/annulus_solver.hpp"
#include "pslcmc/graph_surface.hpp"

namespace pslcmc {

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.informational || c.pass; });
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  std::optional<double> fixed_tau;

  Sampler(const SuiteOptions& o) : rng(o.seed), fixed_tau(o.tau) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double tau() { return fixed_tau ? *fixed_tau : uniform(-2.0, 2.0); }
  Point3 point() {
    Point3 p;
    p.x = uniform(-10.0, 10.0);
    p.y = uniform(0.1, 10.0);
    p.t = uniform(-10.0, 10.0);
    return p;
  }
  Jet2 jet() {
    Jet2 j;
    j.f = uniform(0.2, 5.0);
    j.fx = uniform(-2.0, 2.0);
    j.ft = uniform(-2.0, 2.0);
    j.fxx = uniform(-2.0, 2.0);
    j.fxt = uniform(-2.0, 2.0);
    j.ftt = uniform(-2.0, 2.0);
    return j;
  }
};

void require_samples(const SuiteOptions& o) {
  if (o.samples == 0) {
    throw std::invalid_argument("samples must be >= 1");
  }
}

std::string point_text(const Point3& p, double tau) {
  std::ostringstream s;
  s.precision(17);
  s << "(x, y, t) = (" << p.x << ", " << p.y << ", " << p.t << "), tau = " << tau;
  return s.str();
}

std::string jet_text(const Jet2& j, double tau) {
  std::ostringstream s;
  s.precision(17);
  s << "jet (" << j.f << ", " << j.fx << ", " << j.ft << ", " << j.fxx << ", " << j.fxt << ", " << j.ftt
    << "), tau = " << tau;
  return s.str();
}

// Tracks the worst sample of a check.
struct Worst {
  double value = 0.0;
  std::string where;
  void offer(double v, const std::function<std::string()>& w) {
    if (!(v <= value)) {
      value = v;
      where = w();
    }
  }
};

CheckResult finish(std::string name, const Worst& w, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.value = w.value;
  r.tolerance = tol;
  r.pass = w.value <= tol;
  if (!r.pass) {
    r.detail = "worst at " + w.where;
  }
  return r;
}

Vec3 to_coordinates(const Vec3& c, const FrameVectors& e) {
  Vec3 v{};
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) {
      v[a] += c[k] * e[k][a];
    }
  }
  return v;
}

// Frame coefficients of a coordinate vector, by projection (the frame is
// orthonormal).
Vec3 to_frame(const Vec3& v, const Point3& p, const ModelParams& params) {
  const SymMatrix3 g = metric_at(p, params);
  const FrameVectors e = frame_at(p, params);
  return {g.apply(v, e[0]), g.apply(v, e[1]), g.apply(v, e[2])};
}

Point3 shifted(Point3 p, int axis, double h) {
  if (axis == 0) {
    p.x += h;
  } else if (axis == 1) {
    p.y += h;
  } else {
    p.t += h;
  }
  return p;
}

// Coordinate bracket [E_i, E_j]^a = E_i^b d_b E_j^a - E_j^b d_b E_i^a with
// central differences.
Vec3 fd_bracket(int i, int j, const Point3& p, const ModelParams& params) {
  const double h = 1e-4 * std::max(1.0, std::sqrt(p.x * p.x + p.y * p.y + p.t * p.t));
  std::array<FrameVectors, 3> plus;
  std::array<FrameVectors, 3> minus;
  for (int b = 0; b < 3; ++b) {
    plus[b] = frame_at(shifted(p, b, h), params);
    minus[b] = frame_at(shifted(p, b, -h), params);
  }
  const FrameVectors e = frame_at(p, params);
  Vec3 out{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double dEj = (plus[b][j - 1][a] - minus[b][j - 1][a]) / (2.0 * h);
      const double dEi = (plus[b][i - 1][a] - minus[b][i - 1][a]) / (2.0 * h);
      out[a] += e[i - 1][b] * dEj - e[j - 1][b] * dEi;
    }
  }
  return out;
}

double max_abs_diff(const Vec3& a, const Vec3& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

} // namespace

SuiteReport geometry_suite(const SuiteOptions& opts) {
  require_samples(opts);
  Sampler s(opts);
  Worst ortho;
  Worst torsion;
  Worst compat;
  Worst bracket;
  Worst killing;

  for (std::size_t n = 0; n < opts.samples; ++n) {
    const Point3 p = s.point();
    const ModelParams params{s.tau()};
    const auto where = [&] { return point_text(p, params.tau); };
    const SymMatrix3 g = metric_at(p, params);
    const FrameVectors e = frame_at(p, params);

    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        ortho.offer(std::abs(g.apply(e[i], e[j]) - (i == j ? 1.0 : 0.0)), where);
      }
    }

    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const Vec3 a = connection_frame(i, j, p, params);
        const Vec3 b = connection_frame(j, i, p, params);
        const Vec3 br = lie_bracket_frame(i, j, p, params);
        torsion.offer(max_abs_diff({a[0] - b[0], a[1] - b[1], a[2] - b[2]}, br), where);

        const Vec3 fd = to_frame(fd_bracket(i, j, p, params), p, params);
        bracket.offer(max_abs_diff(fd, br), where);
      }
    }

    for (int k = 1; k <= 3; ++k) {
      for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
          const Vec3 dki = to_coordinates(connection_frame(k, i, p, params), e);
          const Vec3 dkj = to_coordinates(connection_frame(k, j, p, params), e);
          compat.offer(std::abs(g.apply(dki, e[j - 1]) + g.apply(e[i - 1], dkj)), where);
        }
      }
    }

    // The coordinate field d_t is E3; its Lie derivative of g is d_t g_ab.
    const double h = 1e-4 * std::max(1.0, std::abs(p.t));
    const SymMatrix3 gp = metric_at(shifted(p, 2, h), params);
    const SymMatrix3 gm = metric_at(shifted(p, 2, -h), params);
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        killing.offer(std::abs(gp(a, b) - gm(a, b)) / (2.0 * h), where);
      }
    }
  }

  SuiteReport out;
  out.seed = opts.seed;
  out.samples = opts.samples;
  out.checks.push_back(finish("orthonormality", ortho, 1e-12));
  out.checks.push_back(finish("torsion_free", torsion, 1e-14));
  out.checks.push_back(finish("metric_compatibility", compat, 1e-12));
  out.checks.push_back(finish("bracket_finite_difference", bracket, 1e-6));
  out.checks.push_back(finish("killing_e3", killing, 1e-10));

  Worst horo;
  for (std::size_t n = 0; n < std::min<std::size_t>(opts.samples, 100); ++n) {
    const double c = s.uniform(0.1, 10.0);
    horo.offer(std::abs(base_horocycle_curvature(c) - 1.0), [c] { return "c = " + std::to_string(c); });
  }
  out.checks.push_back(finish("horocycle_curvature", horo, 1e-6));
  return out;
}

CheckResult horocylinder_check(const SuiteOptions& opts) {
  require_samples(opts);
  Sampler s(opts);
  Worst w;
  for (std::size_t n = 0; n < opts.samples; ++n) {
    Jet2 j;
    j.f = s.uniform(0.1, 10.0);
    j.fx = j.ft = j.fxx = j.fxt = j.ftt = 0.0;
    const ModelParams params{s.fixed_tau ? *s.fixed_tau : s.uniform(-2.0, 2.0)};
    w.offer(std::abs(mean_curvature(j, params) - 0.5), [&] { return jet_text(j, params.tau); });
  }
  return finish("horocylinder_mean_curvature", w, 1e-12);
}

CheckResult linearization_contract_check(const SuiteOptions& opts) {
  require_samples(opts);
  Sampler s(opts);
  Worst w;
  for (std::size_t n = 0; n < opts.samples; ++n) {
    const Jet2 j = s.jet();
    const ModelParams params{s.tau()};
    const double tau = params.tau;
    const double W = gradient_w(j, params);
    const double terms[] = {(j.f * j.f + j.ft * j.ft) * j.fxx, 2.0 * (j.fx * j.ft - 2.0 * tau * j.f) * j.fxt,
                            (j.fx * j.fx + 1.0 + 4.0 * tau * tau) * j.ftt, j.f * (1.0 + j.fx * j.fx),
                            2.0 * tau * j.fx * j.ft, W * W * W / (j.f * j.f)};
    const double combination = terms[0] - terms[1] + terms[2] + terms[3] + terms[4] - terms[5];
    double scale = 0.0;
    for (double t : terms) {
      scale += std::abs(t);
    }
    const double dev = std::abs(apply_frozen_operator(j, params) - combination) / std::max(1.0, scale);
    w.offer(dev, [&] { return jet_text(j, tau); });
  }
  return finish("linearization_contract", w, 1e-9);
}

LaplaceRefinement laplace_refinement(const ModelParams& params, const std::vector<std::size_t>& intervals) {
  LaplaceRefinement out;
  out.intervals = intervals;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t n : intervals) {
    if (n < 2) {
      throw std::invalid_argument("laplace_refinement: need at least two intervals");
    }
    const double h = two_pi / static_cast<double>(n);
    SurfaceField S(0.0, 0.0, h, h, n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t k = 0; k <= n; ++k) {
        S.at(i, k) = 1.0 + 0.1 * std::sin(S.x(i)) * std::sin(S.t(k));
      }
    }
    const SurfaceField lb = laplace_beltrami(S, S, params);
    double err = 0.0;
    double err_printed = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t k = 1; k < n; ++k) {
        const double x = S.x(i);
        const double t = S.t(k);
        Jet2 j;
        j.f = 1.0 + 0.1 * std::sin(x) * std::sin(t);
        j.fx = 0.1 * std::cos(x) * std::sin(t);
        j.ft = 0.1 * std::sin(x) * std::cos(t);
        j.fxx = -0.1 * std::sin(x) * std::sin(t);
        j.fxt = 0.1 * std::cos(x) * std::cos(t);
        j.ftt = j.fxx;
        const double v = lb.at(i - 1, k - 1);
        const double corrected = laplace_f_general_corrected(j, params);
        const double printed = laplace_f_general_printed(j, params);
        err = std::max(err, std::abs(v - corrected));
        err_printed = std::max(err_printed, std::abs(v - printed));
        out.printed_gap = std::max(out.printed_gap, std::abs(printed - corrected));
      }
    }
    out.errors.push_back(err);
    out.printed_errors.push_back(err_printed);
  }
  for (std::size_t k = 1; k < out.errors.size(); ++k) {
    const double ratio = out.errors[k - 1] / out.errors[k];
    const double hr = static_cast<double>(out.intervals[k]) / static_cast<double>(out.intervals[k - 1]);
    out.ratios.push_back(ratio);
    out.orders.push_back(std::log(ratio) / std::log(hr));
    out.printed_orders.push_back(std::log(out.printed_errors[k - 1] / out.printed_errors[k]) / std::log(hr));
  }
  return out;
}

SuiteReport identity_suite(const SuiteOptions& opts) {
  require_samples(opts);
  SuiteReport out;
  out.seed = opts.seed;
  out.samples = opts.samples;
  out.checks.push_back(horocylinder_check(opts));

  Sampler s(opts);
  Worst horo2h;
  for (std::size_t n = 0; n < std::min<std::size_t>(opts.samples, 100); ++n) {
    Jet2 j;
    j.f = s.uniform(0.1, 10.0);
    j.fx = j.ft = j.fxx = j.fxt = j.ftt = 0.0;
    const ModelParams params{s.tau()};
    horo2h.offer(std::abs(2.0 * mean_curvature(j, params) - base_horocycle_curvature(j.f)),
                 [&] { return jet_text(j, params.tau); });
  }
  out.checks.push_back(finish("horocylinder_vs_horocycle", horo2h, 1e-6));

  Worst wco;
  Worst eqco;
  Worst hcons;
  Worst normal;
  Worst lap_general;
  Worst lap_f;
  Worst lap_inv;
  Worst lap_inv_printed;
  Worst b_raw;
  Worst b_norm;
  for (std::size_t n = 0; n < opts.samples; ++n) {
    Jet2 j = s.jet();
    const ModelParams params{s.tau()};
    const auto where = [&] { return jet_text(j, params.tau); };

    const double W = gradient_w(j, params);
    wco.offer(std::abs(W - gradient_w_lambda_form(j, params)) / W, where);

    // residual_eq1 is minus the H-form residual at H = 1/2.
    const double r1 = residual_eq1(j, params);
    const double r21 = residual_eq_lemma21(j, 0.5, params);
    eqco.offer(std::abs(r1 + r21) / std::max({1.0, std::abs(r1), std::abs(r21)}), where);

    const double H = mean_curvature(j, params);
    const double lhs_scale = 2.0 * std::abs(H) * W * W * W / (j.f * j.f);
    hcons.offer(std::abs(residual_eq_lemma21(j, H, params)) / std::max(1.0, lhs_scale), where);

    const Point3 p{0.0, j.f, 0.0};
    const Vec3 nc = to_coordinates(unit_normal_frame(j, params), frame_at(p, params));
    normal.offer(std::abs(std::sqrt(metric_at(p, params).apply(nc, nc)) - 1.0), where);

    const SecondFormComparison cmp = compare_printed_second_form(j, params);
    b_raw.offer(cmp.raw_max_diff, where);
    b_norm.offer(cmp.normalised_max_diff, where);

    const ScalarJet2 phi{j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt};
    const double exact = laplace_beltrami_pointwise(j, phi, params);
    lap_general.offer(std::abs(exact - laplace_f_general_corrected(j, params)) / std::max(1.0, std::abs(exact)),
                      where);

    // Solution jet: solve the equation for f_xx.
    j.fxx -= residual_eq1(j, params) / (j.f * j.f + j.ft * j.ft);
    const ScalarJet2 sol{j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt};
    const double lf = laplace_beltrami_pointwise(j, sol, params);
    const Lemma22Values closed = lemma22_identities(j, params);
    lap_f.offer(std::abs(lf - closed.laplace_f) / std::max(1.0, std::abs(lf)), where);

    const double f2 = j.f * j.f;
    const ScalarJet2 inv{1.0 / j.f,
                         -j.fx / f2,
                         -j.ft / f2,
                         -j.fxx / f2 + 2.0 * j.fx * j.fx / (f2 * j.f),
                         -j.fxt / f2 + 2.0 * j.fx * j.ft / (f2 * j.f),
                         -j.ftt / f2 + 2.0 * j.ft * j.ft / (f2 * j.f)};
    const double linv = laplace_beltrami_pointwise(j, inv, params);
    lap_inv.offer(std::abs(linv - laplace_inv_f_solution_form(j, params)) / std::max(1.0, std::abs(linv)), where);
    lap_inv_printed.offer(std::abs(linv - closed.laplace_inv_f) / std::max(1.0, std::abs(linv)), where);
  }
  out.checks.push_back(finish("w_coherence", wco, 1e-14));
  out.checks.push_back(finish("equation_coherence", eqco, 1e-12));
  out.checks.back().detail = "residual_eq1 = -residual_eq_lemma21(H = 1/2)";
  out.checks.push_back(finish("mean_curvature_consistency", hcons, 1e-9));
  out.checks.push_back(linearization_contract_check(opts));
  out.checks.push_back(finish("normal_unit_length", normal, 1e-12));
  out.checks.push_back(finish("laplace_general_expansion", lap_general, 1e-10));
  out.checks.push_back(finish("laplace_f_on_solutions", lap_f, 1e-10));
  out.checks.push_back(finish("laplace_inv_f_on_solutions", lap_inv, 1e-10));

  CheckResult inv_printed = finish("laplace_inv_f_printed", lap_inv_printed, 1e-10);
  inv_printed.informational = true;
  inv_printed.detail = inv_printed.pass ? "match" : "discrepancy: printed second term has denominator W, matches with f W^2";
  out.checks.push_back(inv_printed);

  CheckResult raw = finish("second_form_printed_raw", b_raw, 1e-10);
  raw.informational = true;
  raw.detail = raw.pass ? "match" : "discrepancy: printed b_ij are not normalised";
  out.checks.push_back(raw);
  CheckResult norm = finish("second_form_printed_normalised", b_norm, 1e-10);
  norm.informational = true;
  norm.detail = norm.pass ? "match after division by lambda W" : "discrepancy after division by lambda W";
  out.checks.push_back(norm);

  const ModelParams lb_params{opts.tau ? *opts.tau : 0.25};
  const LaplaceRefinement lr = laplace_refinement(lb_params);
  CheckResult order;
  order.name = "laplace_beltrami_order";
  order.value = *std::min_element(lr.orders.begin(), lr.orders.end());
  order.tolerance = 1.8;
  order.pass = order.value >= 1.8 && std::all_of(lr.ratios.begin(), lr.ratios.end(),
                                                 [](double r) { return r >= 3.2 && r <= 4.8; });
  {
    std::ostringstream d;
    d.precision(4);
    d << "tau = " << lb_params.tau << ", errors";
    for (double e : lr.errors) {
      d << ' ' << e;
    }
    d << ", ratios";
    for (double r : lr.ratios) {
      d << ' ' << r;
    }
    order.detail = d.str();
  }
  out.checks.push_back(order);

  CheckResult printed;
  printed.name = "laplace_general_printed";
  printed.informational = true;
  printed.value = lr.printed_gap;
  printed.tolerance = lr.errors.back();
  printed.pass = lr.printed_gap <= lr.errors.back();
  {
    std::ostringstream d;
    d.precision(4);
    if (printed.pass) {
      d << "match O(h^2)";
    } else {
      d << "discrepancy: errors against printed form";
      for (double e : lr.printed_errors) {
        d << ' ' << e;
      }
      d << "; the f_t group needs an extra factor f_t on its first term";
    }
    printed.detail = d.str();
  }
  out.checks.push_back(printed);
  return out;
}

} // namespace pslcmc
