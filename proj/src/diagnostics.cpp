#include "pslcmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pslcmc/errors.hpp"

namespace pslcmc {

double weighted_norm(const AnnulusField& v, double alpha, std::size_t ring_begin, std::size_t ring_end) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("weighted_norm: alpha must lie in (0, 1)");
  }
  const PolarGrid& g = v.grid;
  if (g.n_r() < PolarGrid::min_radial_nodes) {
    throw std::invalid_argument("weighted_norm: grid too coarse (n_r < 8)");
  }
  ring_end = std::min(ring_end, g.n_r());
  if (ring_begin >= ring_end) {
    return 0.0;
  }
  const std::size_t nt = g.n_theta();

  // Hessians are needed on the neighbouring rings too.
  const std::size_t lo = ring_begin == 0 ? 0 : ring_begin - 1;
  const std::size_t hi = std::min(g.n_r(), ring_end + 1);
  std::vector<ScalarJet2> jets((hi - lo) * nt);
  for (std::size_t i = lo; i < hi; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      jets[(i - lo) * nt + j] = cartesian_jet(polar_derivatives(v, i, j), g.radius(i), g.theta(j));
    }
  }
  auto jet = [&](std::size_t i, std::size_t j) -> const ScalarJet2& { return jets[(i - lo) * nt + j]; };
  auto hess_diff = [](const ScalarJet2& a, const ScalarJet2& b) {
    const double dxx = a.vxx - b.vxx;
    const double dxt = a.vxt - b.vxt;
    const double dtt = a.vtt - b.vtt;
    return std::sqrt(dxx * dxx + 2.0 * dxt * dxt + dtt * dtt);
  };

  double sup = 0.0;
  for (std::size_t i = ring_begin; i < ring_end; ++i) {
    const double r = g.radius(i);
    for (std::size_t j = 0; j < nt; ++j) {
      const ScalarJet2& d = jet(i, j);
      const double grad = std::hypot(d.vx, d.vt);
      const double hess = std::sqrt(d.vxx * d.vxx + 2.0 * d.vxt * d.vxt + d.vtt * d.vtt);

      double holder = 0.0;
      const double x = g.x(i, j);
      const double t = g.t(i, j);
      for (int di = -1; di <= 1; ++di) {
        const long ii = static_cast<long>(i) + di;
        if (ii < static_cast<long>(lo) || ii >= static_cast<long>(hi)) {
          continue;
        }
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) {
            continue;
          }
          const std::size_t jj = (j + nt - 1 + static_cast<std::size_t>(dj + 1)) % nt;
          const std::size_t iu = static_cast<std::size_t>(ii);
          const double dist = std::hypot(g.x(iu, jj) - x, g.t(iu, jj) - t);
          holder = std::max(holder, hess_diff(d, jet(iu, jj)) / std::pow(dist, alpha));
        }
      }
      const double term = std::abs(d.v) + r * grad + r * r * hess + std::pow(r, 2.0 + alpha) * holder;
      sup = std::max(sup, term);
    }
  }
  return sup;
}

double weighted_norm(const AnnulusField& v, double alpha) { return weighted_norm(v, alpha, 0, v.grid.n_r()); }

Admissibility admissibility_check(const AnnulusField& f, const AnnulusSpec& spec, double alpha) {
  const AnnulusField h = barrier_field(f.grid, spec);
  AnnulusField u(f.grid);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    u.values[k] = f.values[k] - h.values[k];
  }
  Admissibility out;
  out.norm = weighted_norm(u, alpha);
  out.admissible = out.norm <= std::sqrt(spec.epsilon);
  return out;
}

ScaleBlocks scale_blocks(const PolarGrid& grid, const AnnulusSpec& spec) {
  if (spec.R2 < 4.0 * spec.R1) {
    throw PreconditionError("scale_blocks requires R2 >= 4 R1");
  }
  const double m0 = spec.R2 / spec.R1;
  ScaleBlocks out;
  out.cuts = {(m0 + 2.0) / 3.0 * spec.R1, 2.0 * (m0 + 1.0) / 3.0 * spec.R1};
  const std::array<double, 4> edges = {spec.R1, out.cuts[0], out.cuts[1], spec.R2};
  const double slack = 1e-12 * spec.R2;

  for (std::size_t b = 0; b < 3; ++b) {
    std::size_t first = grid.n_r();
    std::size_t last = 0;
    for (std::size_t i = 0; i < grid.n_r(); ++i) {
      const double r = grid.radius(i);
      if (r >= edges[b] - slack && r <= edges[b + 1] + slack) {
        first = std::min(first, i);
        last = i + 1;
      }
    }
    if (first >= last) {
      first = last = 0;
    }
    out.rings[b] = {first, last};
    for (std::size_t i = first; i < last; ++i) {
      for (std::size_t j = 0; j < grid.n_theta(); ++j) {
        out.nodes[b].push_back(grid.index(i, j));
      }
    }
    out.scale_constants[b] = {edges[b] / spec.R1, edges[b + 1] / spec.R1};
  }
  return out;
}

} // namespace pslcmc
