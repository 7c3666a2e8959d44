#include "fracpq/random.hpp"

#include <cmath>
#include <numbers>

namespace fracpq {

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
  // FNV-1a over the tag, then splitmix64 finalization.
  std::uint64_t h = 14695981039346656037ull ^ base;
  for (char c : tag) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 1099511628211ull;
  }
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

GridFunction fourier_sample(const GridPtr& grid, std::mt19937_64& rng, int modes) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Grid& g = *grid;
  GridFunction u = GridFunction::zero(grid);

  if (g.n == 1) {
    const double len = g.hi[0] - g.lo[0];
    for (int k = 1; k <= modes; ++k) {
      const double ck = gauss(rng) / static_cast<double>(k);
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double xi = (g.coords(i, 0) - g.lo[0]) / len;
        u.values[i] += ck * std::sin(std::numbers::pi * k * xi);
      }
    }
  } else {
    const double lx = g.hi[0] - g.lo[0];
    const double ly = g.hi[1] - g.lo[1];
    for (int kx = 1; kx <= modes; ++kx)
      for (int ky = 1; ky <= modes; ++ky) {
        const double ck = gauss(rng) / static_cast<double>(kx * ky);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
          const double xi = (g.coords(i, 0) - g.lo[0]) / lx;
          const double yi = (g.coords(i, 1) - g.lo[1]) / ly;
          u.values[i] += ck * std::sin(std::numbers::pi * kx * xi) *
                         std::sin(std::numbers::pi * ky * yi);
        }
      }
  }
  return u;
}

}  // namespace fracpq
