#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "pslcmc/annulus_solver.hpp"

namespace pslcmc {

/// Discrete weighted C^{2,alpha} norm
///   sup_X { |v| + r |Dv| + r^2 |D^2 v| + r^{2+alpha} [D^2 v]_{alpha;X} }
/// with D, D^2 the Cartesian (x, t) gradient and Hessian (Euclidean and
/// Frobenius norms), both from second-order differences on the polar grid.
/// The Hoelder coefficient at X is the largest |D^2v(X) - D^2v(Y)| / |X-Y|^alpha
/// over the eight grid neighbours Y of X. Rings [ring_begin, ring_end) only.
/// Throws std::invalid_argument unless 0 < alpha < 1 and n_r >= 8.
double weighted_norm(const AnnulusField& v, double alpha, std::size_t ring_begin, std::size_t ring_end);
double weighted_norm(const AnnulusField& v, double alpha);

struct Admissibility {
  bool admissible = false;
  double norm = 0.0;
};

/// |f - h|*_{2,alpha} <= sqrt(eps).
Admissibility admissibility_check(const AnnulusField& f, const AnnulusSpec& spec, double alpha);

/// U = U1 u U2 u U3 with radial cuts (m0 + 2)/3 R1 and 2 (m0 + 1)/3 R1,
/// m0 = R2/R1. A ring lying exactly on a cut belongs to both neighbours.
struct ScaleBlocks {
  std::array<double, 2> cuts{};
  /// Rings [first, last) of each block.
  std::array<std::pair<std::size_t, std::size_t>, 3> rings{};
  /// Flat node indices of each block.
  std::array<std::vector<std::size_t>, 3> nodes;
  /// c1, c2 with c1 R1 <= |X| <= c2 R1 on each block.
  std::array<std::pair<double, double>, 3> scale_constants{};
};

/// Throws PreconditionError if R2 < 4 R1.
ScaleBlocks scale_blocks(const PolarGrid& grid, const AnnulusSpec& spec);

} // namespace pslcmc
