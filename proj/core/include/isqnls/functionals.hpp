#pragma once

#include "isqnls/params.hpp"
#include "isqnls/radial_field.hpp"

namespace isqnls {

/// Every scalar functional of a field, from one pass over its samples.
struct FunctionalReport {
    double mass = 0.0;       ///< ‖v‖²_{L²}
    double kinetic = 0.0;    ///< ‖∇v‖²_{L²}
    double potential = 0.0;  ///< ‖v/|x|‖²_{L²}
    double hardy_sq = 0.0;   ///< ‖∇v‖² − c‖v/|x|‖²
    double lp_alpha2 = 0.0;  ///< ‖v‖^{α+2}_{L^{α+2}}
    double energy = 0.0;     ///< E = ½ hardy_sq − lp/(α+2)
    double h_omega = 0.0;    ///< hardy_sq + ω mass
    double s_omega = 0.0;    ///< action E + (ω/2) mass
    double k_omega = 0.0;    ///< Nehari functional h_omega − lp
    double q = 0.0;          ///< hardy_sq − dα/(2(α+2)) lp

    double grad_norm() const noexcept;
    /// Magnitude of the terms making up E, used to normalize energy drift.
    double energy_scale(Params const& params) const noexcept;
};

/// Σ w_i |v_i|^{α+2}; zero samples contribute 0.
double lp_norm_power(RadialGrid const& grid, std::span<double const> v, double alpha);
double lp_norm_power(RadialGrid const& grid, std::span<std::complex<double> const> v, double alpha);

double hardy_sq(RealRadialField const& v, Params const& params);
double hardy_sq(ComplexRadialField const& v, Params const& params);

FunctionalReport functional_report(RealRadialField const& v, Params const& params);
FunctionalReport functional_report(ComplexRadialField const& v, Params const& params);

/// Assembles the derived scalars from the four primitive integrals.
FunctionalReport assemble_report(double mass, double kinetic, double potential, double lp,
                                 Params const& params);

struct NehariProjection {
    double mu0;
    RealRadialField projected;
};

/// Rescales v ≠ 0 onto the Nehari manifold: μ₀ = (H_ω(v)/‖v‖^{α+2})^{1/α}.
NehariProjection nehari_project(RealRadialField const& v, Params const& params);

/// μ₀ from precomputed values (throws DegenerateInputError if lp ≤ 0).
double nehari_factor(double h_omega, double lp, double alpha);

/// The unique λ₁ > 0 with Q(v^{λ₁}) = 0:
/// λ₁ = (hardy_sq / (dα/(2(α+2)) lp))^{2/(dα−4)}.
double q_scaling_root(RealRadialField const& v, Params const& params);
double q_scaling_root(FunctionalReport const& report, Params const& params);

/// Closed-form action along the dilation curve,
/// S(v^λ) = λ²/2 hardy_sq + ω/2 mass − λ^{dα/2}/(α+2) lp.
double action_along_scaling(FunctionalReport const& report, Params const& params, double lambda);

/// Constants with lower·‖v‖²_{H¹} ≤ H_ω(v) ≤ upper·‖v‖²_{H¹}, from the sharp
/// Hardy inequality: the potential term is worth at most |c|/λ(d) of the
/// gradient term.
struct NormEquivalence {
    double lower = 0.0;
    double upper = 0.0;
};

NormEquivalence equivalent_norm_constants(Params const& params);

} // namespace isqnls
