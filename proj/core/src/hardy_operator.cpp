#include "isqnls/hardy_operator.hpp"

#include <cmath>

namespace isqnls {

OriginTail origin_tail(RadialGrid const& grid, Params const& params) {
    double const nu = params.nu();
    double const sigma = params.indicial_exponent();
    // ∫_0^{r0} r^{-2σ-2} r^{d-1} dr = r0^{d-2-2σ}/(d-2-2σ), and d-2-2σ = 2ν.
    double const scale = grid.surface() * std::pow(grid.r_min(), grid.d() - 2) / (2.0 * nu);
    return OriginTail{sigma * sigma * scale, scale};
}

namespace {

template <class T>
double dirichlet_energy_impl(RadialGrid const& grid, Params const& params, std::span<T const> v) {
    auto const kappa = grid.conductance();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) sum += kappa[i] * std::norm(v[i + 1] - v[i]);
    return sum + origin_tail(grid, params).kinetic * std::norm(v[0]);
}

template <class T>
double inverse_square_impl(RadialGrid const& grid, Params const& params, std::span<T const> v) {
    auto const w = grid.weights();
    auto const r = grid.r();
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) sum += w[i] * std::norm(v[i]) / (r[i] * r[i]);
    return sum + origin_tail(grid, params).potential * std::norm(v[0]);
}

} // namespace

double dirichlet_energy(RadialGrid const& grid, Params const& params, std::span<double const> v) {
    return dirichlet_energy_impl(grid, params, v);
}
double dirichlet_energy(RadialGrid const& grid, Params const& params,
                        std::span<std::complex<double> const> v) {
    return dirichlet_energy_impl(grid, params, v);
}
double inverse_square_moment(RadialGrid const& grid, Params const& params,
                             std::span<double const> v) {
    return inverse_square_impl(grid, params, v);
}
double inverse_square_moment(RadialGrid const& grid, Params const& params,
                             std::span<std::complex<double> const> v) {
    return inverse_square_impl(grid, params, v);
}

SymTridiagonal<double> hardy_matrix(RadialGrid const& grid, Params const& params) {
    auto const n = grid.size();
    auto const kappa = grid.conductance();
    auto const w = grid.weights();
    auto const r = grid.r();
    SymTridiagonal<double> a;
    a.diag.assign(n, 0.0);
    a.off.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a.diag[i] += kappa[i];
        a.diag[i + 1] += kappa[i];
        a.off[i] = -kappa[i];
    }
    for (std::size_t i = 0; i < n; ++i) a.diag[i] -= params.c * w[i] / (r[i] * r[i]);
    auto const tail = origin_tail(grid, params);
    a.diag[0] += tail.kinetic - params.c * tail.potential;
    return a;
}

namespace {

// Flux form κ_{i-1}(v_i − v_{i-1}) + κ_i(v_i − v_{i+1}) + onsite·v_i. Differencing
// first avoids the cancellation of the assembled diagonal against its
// neighbours, which near r_min swamps the result by many orders.
template <class T>
void apply_hardy_impl(RadialGrid const& grid, Params const& params, std::span<T const> v,
                      std::span<T> out) {
    auto const m = v.size();
    auto const kappa = grid.conductance();
    auto const w = grid.weights();
    auto const r = grid.r();
    auto const tail = origin_tail(grid, params);
    for (std::size_t i = 0; i < m; ++i) {
        T s = -params.c * w[i] / (r[i] * r[i]) * v[i];
        if (i > 0) s += kappa[i - 1] * (v[i] - v[i - 1]);
        if (i + 1 < grid.size()) s += kappa[i] * (v[i] - (i + 1 < m ? v[i + 1] : T{}));
        out[i] = s;
    }
    out[0] += (tail.kinetic - params.c * tail.potential) * v[0];
}

} // namespace

void apply_hardy(RadialGrid const& grid, Params const& params, std::span<double const> v,
                 std::span<double> out) {
    apply_hardy_impl(grid, params, v, out);
}

void apply_hardy(RadialGrid const& grid, Params const& params,
                 std::span<std::complex<double> const> v, std::span<std::complex<double>> out) {
    apply_hardy_impl(grid, params, v, out);
}

} // namespace isqnls
