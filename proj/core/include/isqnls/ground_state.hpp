#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isqnls/functionals.hpp"
#include "isqnls/params.hpp"
#include "isqnls/radial_field.hpp"

namespace isqnls {

enum class GroundStateMethod { projected_gradient, shooting };

/// Metric in which the descent direction is taken.
enum class Preconditioner {
    identity,  ///< plain L² gradient
    diagonal,  ///< scaled by (1 + ω + |c|/r²)^{-1}
    operator_  ///< Riesz representer for the H_ω inner product (tridiagonal solve)
};

struct GroundStateOptions {
    double tol = 1e-6;
    int max_iter = 50000;
    Preconditioner preconditioner = Preconditioner::operator_;
    /// Largest step tried by the backtracking line search.
    double max_step = 1.0;
    /// Iterations without residual improvement before an identity-metric run
    /// falls back to the diagonal metric.
    int plateau_window = 500;
    /// Residual below which Newton iterations on the discrete equation take
    /// over from the descent; 0 disables them.
    double newton_switch = 1e-4;
};

struct GroundState {
    RealRadialField profile;
    Params params;
    FunctionalReport report;
    double d_rad_omega = 0.0;  ///< S_ω(profile): the minimal action on the Nehari manifold
    double residual = 0.0;     ///< ‖S'_ω(profile)‖_{L²}/‖profile‖_{H¹}
    double sigma = 0.0;        ///< origin exponent used to continue the profile below r_min
    GroundStateMethod method = GroundStateMethod::projected_gradient;
    int iterations = 0;
    std::vector<double> residual_history;
};

struct PohozaevReport {
    double res_nehari = 0.0;
    double res_pohozaev = 0.0;
    double res_ratio_mass = 0.0;
    double res_ratio_hardy = 0.0;

    double max() const noexcept;
};

struct ScalingCurve {
    std::vector<double> lambdas;
    std::vector<double> s_values;
    std::vector<double> q_values;
    std::vector<double> k_values;
};

struct KeyEstimate {
    double lhs;  ///< Q(v)
    double rhs;  ///< 2 (S_ω(v) − d(rad, ω))
    bool holds;
};

/// Pointwise −Δ_h v + ωv − c v/r² − |v|^α v at every node; zero at the
/// Dirichlet node r_max. Δ_h is the radial Laplacian induced by the discrete
/// Hardy form, so Σ w_i g_i δv_i is the first variation of the discrete action.
RealRadialField elliptic_residual(RealRadialField const& v, Params const& params);

/// ‖g‖_{L²}/‖v‖_{H¹} for g = elliptic_residual(v).
double normalized_residual(RealRadialField const& v, Params const& params);

/// Minimizes S_ω on the Nehari manifold by projected, preconditioned descent.
GroundState solve_ground_state(Params const& params, GridPtr const& grid,
                               GroundStateOptions const& options = {});

struct ShootingOptions {
    double r0 = 1e-8;       ///< start radius of the Frobenius series
    double r_end = 30.0;    ///< furthest radius integrated
    double rel_tol = 1e-12; ///< integrator tolerance
    int max_bisections = 200;
};

struct ShootingResult {
    double amplitude;       ///< coefficient A of A r^{-σ} at the origin
    double trusted_radius;  ///< beyond this the profile is an exponential continuation
};

/// Radial ODE shooting oracle. Samples the decaying solution at the nodes of
/// `grid` and reports it with functionals evaluated on that grid. The result
/// is not Nehari-projected, so its diagnostics measure the discretization.
GroundState shoot_ground_state(Params const& params, GridPtr const& grid,
                               ShootingOptions const& options = {},
                               ShootingResult* details = nullptr);

PohozaevReport pohozaev_report(FunctionalReport const& report, Params const& params);
PohozaevReport pohozaev_report(GroundState const& gs);

ScalingCurve scaling_curve(GroundState const& gs, std::span<double const> lambdas);

/// φ^λ continued with the ground state's origin exponent.
RealRadialField scaled_profile(GroundState const& gs, double lambda);

/// S_ω(v) < d(rad, ω) and Q(v) < 0, each with margin 1e-10·H_ω(φ).
bool in_blowup_set(FunctionalReport const& v, GroundState const& gs);
bool in_blowup_set(RealRadialField const& v, GroundState const& gs);

/// Q(v) ≤ 2(S_ω(v) − d(rad, ω)) for v in the blow-up set.
KeyEstimate key_estimate_check(FunctionalReport const& v, GroundState const& gs);
KeyEstimate key_estimate_check(RealRadialField const& v, GroundState const& gs);

char const* to_string(GroundStateMethod method) noexcept;

} // namespace isqnls
