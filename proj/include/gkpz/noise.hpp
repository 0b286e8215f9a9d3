#pragma once

#include <cstdint>

#include "gkpz/kernels.hpp"

namespace gkpz {

/// Deterministic counter-based standard normal attached to a lattice cell;
/// independent across (seed, sample, i, j) and order-free.
double gauss_cell(std::uint64_t seed, std::uint64_t sample, int i, int j);

/// White-noise field: i.i.d. centred normals of variance 1/(dt dx).
Field white_noise(const Grid& grid, std::uint64_t seed, std::uint64_t sample);

/// Mollified noise rho^eps * W built from the cell-integrated mollifier;
/// rows too close to the window ends are truncated to zero.
Field mollified_noise(const Grid& grid, const MollifierSample& rho,
                      std::uint64_t seed, std::uint64_t sample);
Field mollify(const Grid& grid, const MollifierSample& rho, const Field& w);

}  // namespace gkpz
