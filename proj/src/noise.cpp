#include "gkpz/noise.hpp"

#include <cmath>

namespace gkpz {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double to_unit(std::uint64_t u) {
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double gauss_cell(std::uint64_t seed, std::uint64_t sample, int i, int j) {
  std::uint64_t key = splitmix(seed ^ splitmix(sample));
  key = splitmix(key ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32 |
                        static_cast<std::uint32_t>(j)));
  const double u1 = to_unit(key);
  const double u2 = to_unit(splitmix(key));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Field white_noise(const Grid& grid, std::uint64_t seed, std::uint64_t sample) {
  Field w(grid.nt, grid.nx);
  const double scale = 1.0 / std::sqrt(grid.cell());
  for (int i = 0; i < grid.nt; ++i)
    for (int j = 0; j < grid.nx; ++j)
      w(i, j) = scale * gauss_cell(seed, sample, i, j);
  return w;
}

Field mollify(const Grid& grid, const MollifierSample& rho, const Field& w) {
  // two-sided kernel: run the causal engine on rows shifted by rows0,
  // wrapping the columns onto the circle
  const int rt = static_cast<int>(rho.values.rows());
  Field kernel = Field::Zero(rt, grid.nx);
  for (int i = 0; i < rt; ++i)
    for (int c = -rho.cols0; c <= rho.cols0; ++c)
      kernel(i, ((c % grid.nx) + grid.nx) % grid.nx) += rho.values(i, c + rho.cols0);
  ConvEngine engine(grid, kernel);
  Field shifted = engine.apply(w);
  Field out = Field::Zero(grid.nt, grid.nx);
  for (int i = 0; i + rho.rows0 < grid.nt; ++i) out.row(i) = shifted.row(i + rho.rows0);
  return out;
}

Field mollified_noise(const Grid& grid, const MollifierSample& rho,
                      std::uint64_t seed, std::uint64_t sample) {
  return mollify(grid, rho, white_noise(grid, seed, sample));
}

}  // namespace gkpz
