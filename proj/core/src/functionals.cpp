#include "isqnls/functionals.hpp"

#include <cmath>

#include <fmt/format.h>

#include "isqnls/errors.hpp"
#include "isqnls/hardy_operator.hpp"

namespace isqnls {

double FunctionalReport::grad_norm() const noexcept { return std::sqrt(kinetic); }

double FunctionalReport::energy_scale(Params const& params) const noexcept {
    return 0.5 * (kinetic + std::abs(params.c) * potential) + lp_alpha2 / (params.alpha + 2.0);
}

namespace {

// |x|^{α+2} from |x|², guarded at 0.
inline double pow_from_norm(double norm2, double alpha) {
    if (norm2 <= 0.0) return 0.0;
    if (alpha == 2.0) return norm2 * norm2;
    return std::exp(0.5 * (alpha + 2.0) * std::log(norm2));
}

template <class T>
double lp_impl(RadialGrid const& grid, std::span<T const> v, double alpha) {
    auto const w = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) sum += w[i] * pow_from_norm(std::norm(v[i]), alpha);
    return sum;
}

template <class T>
FunctionalReport report_impl(RadialField<T> const& v, Params const& params) {
    auto const& grid = v.grid();
    auto const vals = v.values();
    auto const w = grid.weights();
    double mass = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) mass += w[i] * std::norm(vals[i]);
    return assemble_report(mass, dirichlet_energy(grid, params, vals),
                           inverse_square_moment(grid, params, vals),
                           lp_impl(grid, vals, params.alpha), params);
}

} // namespace

double lp_norm_power(RadialGrid const& grid, std::span<double const> v, double alpha) {
    return lp_impl(grid, v, alpha);
}
double lp_norm_power(RadialGrid const& grid, std::span<std::complex<double> const> v,
                     double alpha) {
    return lp_impl(grid, v, alpha);
}

FunctionalReport assemble_report(double mass, double kinetic, double potential, double lp,
                                 Params const& params) {
    FunctionalReport r;
    r.mass = mass;
    r.kinetic = kinetic;
    r.potential = potential;
    r.lp_alpha2 = lp;
    r.hardy_sq = kinetic - params.c * potential;
    r.energy = 0.5 * r.hardy_sq - lp / (params.alpha + 2.0);
    r.h_omega = r.hardy_sq + params.omega * mass;
    r.s_omega = r.energy + 0.5 * params.omega * mass;
    r.k_omega = r.h_omega - lp;
    r.q = r.hardy_sq - params.virial_coefficient() * lp;
    return r;
}

double hardy_sq(RealRadialField const& v, Params const& params) {
    return dirichlet_energy(v.grid(), params, v.values()) -
           params.c * inverse_square_moment(v.grid(), params, v.values());
}
double hardy_sq(ComplexRadialField const& v, Params const& params) {
    return dirichlet_energy(v.grid(), params, v.values()) -
           params.c * inverse_square_moment(v.grid(), params, v.values());
}

FunctionalReport functional_report(RealRadialField const& v, Params const& params) {
    return report_impl(v, params);
}
FunctionalReport functional_report(ComplexRadialField const& v, Params const& params) {
    return report_impl(v, params);
}

double nehari_factor(double h_omega, double lp, double alpha) {
    if (!(lp > 0.0)) throw DegenerateInputError("Nehari projection of the zero field");
    if (!(h_omega > 0.0)) {
        throw DegenerateInputError(fmt::format("Nehari projection needs H_omega > 0 (got {})",
                                               h_omega));
    }
    return std::pow(h_omega / lp, 1.0 / alpha);
}

NehariProjection nehari_project(RealRadialField const& v, Params const& params) {
    auto const report = functional_report(v, params);
    double const mu0 = nehari_factor(report.h_omega, report.lp_alpha2, params.alpha);
    std::vector<double> scaled(v.values().begin(), v.values().end());
    for (auto& x : scaled) x *= mu0;
    return {mu0, RealRadialField(v.grid_ptr(), std::move(scaled))};
}

double q_scaling_root(FunctionalReport const& report, Params const& params) {
    if (!(report.lp_alpha2 > 0.0)) {
        throw DegenerateInputError("Q scaling root undefined: ‖v‖_{L^{α+2}} = 0");
    }
    if (!(report.hardy_sq > 0.0)) {
        throw DegenerateInputError("Q scaling root needs a positive Hardy functional");
    }
    double const exponent = 2.0 / (params.d * params.alpha - 4.0);
    return std::pow(report.hardy_sq / (params.virial_coefficient() * report.lp_alpha2), exponent);
}

double q_scaling_root(RealRadialField const& v, Params const& params) {
    return q_scaling_root(functional_report(v, params), params);
}

double action_along_scaling(FunctionalReport const& report, Params const& params, double lambda) {
    if (!(lambda > 0.0)) {
        throw ParameterError(fmt::format("scaling parameter lambda = {} must be > 0", lambda));
    }
    return 0.5 * lambda * lambda * report.hardy_sq + 0.5 * params.omega * report.mass -
           std::pow(lambda, 0.5 * params.d * params.alpha) / (params.alpha + 2.0) *
               report.lp_alpha2;
}

NormEquivalence equivalent_norm_constants(Params const& params) {
    params.validate();
    double const share = std::abs(params.c) / params.hardy_constant();
    if (params.c >= 0.0) {
        return {std::min(1.0 - share, params.omega), std::max(1.0, params.omega)};
    }
    return {std::min(1.0, params.omega), std::max(1.0 + share, params.omega)};
}

} // namespace isqnls
