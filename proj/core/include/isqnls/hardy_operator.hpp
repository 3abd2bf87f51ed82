#pragma once

#include <complex>
#include <span>

#include "isqnls/params.hpp"
#include "isqnls/radial_grid.hpp"
#include "isqnls/tridiagonal.hpp"

namespace isqnls {

// Discrete Hardy form on a truncated radial grid.
//
// The gradient energy is the exact Dirichlet energy of the piecewise-linear
// interpolant of the samples; the inverse-square term uses the grid
// quadrature. Below r_min a field is continued as v(r_min)(r/r_min)^{-σ}
// with σ the indicial exponent, which contributes closed-form multiples of
// |v(r_min)|² to both terms. This continuation acts as the boundary
// condition at r_min and matches the behaviour of finite-energy solutions
// at the origin. Its stiffness matrix is used by the stationary solver and
// the time stepper alike, so the discrete residual is exactly the gradient
// of the discrete action.

/// Contributions of the inner ball {|x| < r_min} per unit |v(r_min)|².
struct OriginTail {
    double kinetic = 0.0;
    double potential = 0.0;
};

OriginTail origin_tail(RadialGrid const& grid, Params const& params);

/// ‖∇v‖² including the inner-ball continuation.
double dirichlet_energy(RadialGrid const& grid, Params const& params, std::span<double const> v);
double dirichlet_energy(RadialGrid const& grid, Params const& params,
                        std::span<std::complex<double> const> v);

/// ‖v/|x|‖² including the inner-ball continuation.
double inverse_square_moment(RadialGrid const& grid, Params const& params,
                             std::span<double const> v);
double inverse_square_moment(RadialGrid const& grid, Params const& params,
                             std::span<std::complex<double> const> v);

/// Matrix A with vᵀAv = ‖∇v‖² − c‖v/|x|‖² (all n nodes; callers impose the
/// Dirichlet node at r_max by dropping the last row/column).
SymTridiagonal<double> hardy_matrix(RadialGrid const& grid, Params const& params);

/// out = A v on the first `v.size()` nodes, entries beyond treated as zero
/// (so passing the free nodes imposes the Dirichlet node at r_max).
void apply_hardy(RadialGrid const& grid, Params const& params, std::span<double const> v,
                 std::span<double> out);
void apply_hardy(RadialGrid const& grid, Params const& params,
                 std::span<std::complex<double> const> v, std::span<std::complex<double>> out);

} // namespace isqnls
