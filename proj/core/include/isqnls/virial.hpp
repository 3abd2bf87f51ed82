#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "isqnls/functionals.hpp"
#include "isqnls/params.hpp"
#include "isqnls/radial_field.hpp"

namespace isqnls {

// Localized virial machinery. The cutoff is the C¹ piecewise quadratic
//   θ(r) = r² on [0,1],  4r − r² − 2 on [1,2],  2 beyond,
// so θ'' takes the values 2, −2, 0 and never exceeds 2.

double theta(double r);
double theta_prime(double r);
/// One-sided value from the right at the kinks r = 1, 2.
double theta_second(double r);

/// R²θ(r/R), the truncated stand-in for |x|².
double virial_weight(double r, double radius);

/// ∫ R²θ(|x|/R) |u|² dx. Requires R > 1.
double virial_potential(ComplexRadialField const& u, double radius);
double virial_potential(RadialGrid const& grid, std::span<std::complex<double> const> u,
                        double radius);

/// Three algebraically equal forms of the leading virial term and the
/// size of the localization error, R^{-2} + R^{-(d-1)α/2} hardy_sq^{α/4},
/// without its unknown constant.
struct VirialRhs {
    double rhs1 = 0.0;  ///< 8 hardy_sq − 4dα/(α+2) lp
    double rhs2 = 0.0;  ///< 8 Q
    double rhs3 = 0.0;  ///< 4dα E − 2(dα − 4) hardy_sq
    double err_scale = 0.0;
};

VirialRhs virial_rhs(double hardy_sq, double lp_alpha2, Params const& params, double radius);
VirialRhs virial_rhs(FunctionalReport const& report, Params const& params, double radius);
VirialRhs virial_rhs(ComplexRadialField const& u, Params const& params, double radius);

/// V_R sampled along a trajectory, with Q at the same instants.
struct VirialSeries {
    double radius = 0.0;
    std::vector<double> times;
    std::vector<double> v_values;
    std::vector<double> q_values;
    std::vector<double> vpp;  ///< centered second differences, one per interior sample
};

/// Centered second differences on a locally uniform time grid. Consecutive
/// spacings must agree within 1%, otherwise StencilError.
std::vector<double> second_derivative_series(std::span<double const> times,
                                             std::span<double const> values);
/// Fills series.vpp and returns it.
std::vector<double> const& second_derivative_series(VirialSeries& series);

/// Vanishing time of the parabola v0 + v0'·t − (b/2)t² bounding V from above.
double glassey_bound(double v0, double v0_prime, double b);

struct ConcavityEstimate {
    double b_hat = 0.0;    ///< −max V'' over samples at index ≥ transient
    bool concave = false;  ///< b_hat > 0
    std::optional<double> a;
};

/// Uniform concavity constant of a series (vpp is computed if missing).
/// `a`, when given, is passed through for reporting.
ConcavityEstimate estimate_b(VirialSeries series, std::size_t transient = 2,
                             std::optional<double> a = std::nullopt);

/// 2(d(rad,ω) − S_ω(u₀)): the uniform gap of Q along a trajectory in the blow-up set.
double q_gap(double d_rad_omega, double s_omega_initial);

/// (4dα|E(u₀)| + 2)/(dα − 4), the threshold separating the two cases of the
/// concavity argument. Reported only.
double case_threshold(Params const& params, double energy);

/// One-sided second-order estimate of V'(t₀) from the first three samples.
double initial_slope(VirialSeries const& series);

} // namespace isqnls
