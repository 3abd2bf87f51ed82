#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "isqnls/ground_state.hpp"
#include "isqnls/radial_field.hpp"
#include "isqnls/radial_grid.hpp"

namespace isqnls::testing {

GridPtr geometric_grid(int d, double r_min, double r_max, std::size_t n);

/// Grid used by every ground-state test: geometric, 1e-6 to 120, 4096 nodes.
GridPtr ground_state_grid(int d);

/// Smooth radial field built from a few random Gaussian bumps, optionally
/// with a mildly singular r^{-β} component near the origin, vanishing at
/// r_max. With `support` set every sample beyond that radius is zero.
RealRadialField random_field(GridPtr const& grid, std::mt19937_64& rng, double support = 0.0);
ComplexRadialField random_complex_field(GridPtr const& grid, std::mt19937_64& rng);

/// Ground state for the given parameters on ground_state_grid, solved once
/// per process and cached.
GroundState const& cached_ground_state(Params const& params);

double relative_difference(double a, double b);

} // namespace isqnls::testing
