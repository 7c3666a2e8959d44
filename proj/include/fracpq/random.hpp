#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "fracpq/grid.hpp"

namespace fracpq {

/// Derives a reproducible sub-stream seed from the run seed and a tag, so
/// independent routines never share a stream.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

/// Smooth random function: a combination of the first `modes` Dirichlet sine
/// modes with N(0,1)/k coefficients. Vanishes at the domain boundary.
GridFunction fourier_sample(const GridPtr& grid, std::mt19937_64& rng, int modes = 6);

}  // namespace fracpq
