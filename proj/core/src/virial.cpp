#include "isqnls/virial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "isqnls/errors.hpp"

namespace isqnls {

namespace {

void check_radius(double r) {
    if (r < 0.0 || !std::isfinite(r)) {
        throw ParameterError(fmt::format("cutoff evaluated at negative radius {}", r));
    }
}

void check_virial_radius(double radius) {
    if (!(radius > 1.0) || !std::isfinite(radius)) {
        throw ParameterError(fmt::format("virial radius must exceed 1, got {}", radius));
    }
}

} // namespace

double theta(double r) {
    check_radius(r);
    if (r <= 1.0) return r * r;
    if (r <= 2.0) return 4.0 * r - r * r - 2.0;
    return 2.0;
}

double theta_prime(double r) {
    check_radius(r);
    if (r <= 1.0) return 2.0 * r;
    if (r <= 2.0) return 2.0 * (2.0 - r);
    return 0.0;
}

double theta_second(double r) {
    check_radius(r);
    if (r < 1.0) return 2.0;
    if (r < 2.0) return -2.0;
    return 0.0;
}

double virial_weight(double r, double radius) {
    check_virial_radius(radius);
    return radius * radius * theta(r / radius);
}

double virial_potential(RadialGrid const& grid, std::span<std::complex<double> const> u,
                        double radius) {
    check_virial_radius(radius);
    auto const r = grid.r();
    auto const w = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sum += w[i] * radius * radius * theta(r[i] / radius) * std::norm(u[i]);
    }
    return sum;
}

double virial_potential(ComplexRadialField const& u, double radius) {
    return virial_potential(u.grid(), u.values(), radius);
}

VirialRhs virial_rhs(double hardy_sq, double lp, Params const& params, double radius) {
    check_virial_radius(radius);
    double const d = params.d;
    double const alpha = params.alpha;
    double const energy = 0.5 * hardy_sq - lp / (alpha + 2.0);
    double const q = hardy_sq - params.virial_coefficient() * lp;
    VirialRhs out;
    out.rhs1 = 8.0 * hardy_sq - 4.0 * d * alpha / (alpha + 2.0) * lp;
    out.rhs2 = 8.0 * q;
    out.rhs3 = 4.0 * d * alpha * energy - 2.0 * (d * alpha - 4.0) * hardy_sq;
    out.err_scale = std::pow(radius, -2.0) +
                    std::pow(radius, -0.5 * (d - 1.0) * alpha) *
                        std::pow(std::max(hardy_sq, 0.0), 0.25 * alpha);
    return out;
}

VirialRhs virial_rhs(FunctionalReport const& rep, Params const& params, double radius) {
    return virial_rhs(rep.hardy_sq, rep.lp_alpha2, params, radius);
}

VirialRhs virial_rhs(ComplexRadialField const& u, Params const& params, double radius) {
    return virial_rhs(functional_report(u, params), params, radius);
}

std::vector<double> second_derivative_series(std::span<double const> times,
                                             std::span<double const> values) {
    if (times.size() != values.size()) throw StencilError("times and values differ in length");
    if (times.size() < 3) throw StencilError("second differences need at least 3 samples");
    std::vector<double> out;
    out.reserve(times.size() - 2);
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        double const h0 = times[i] - times[i - 1];
        double const h1 = times[i + 1] - times[i];
        if (!(h0 > 0.0) || !(h1 > 0.0)) throw StencilError("sample times must increase");
        if (std::abs(h1 - h0) > 0.01 * std::max(h0, h1)) {
            throw StencilError(fmt::format(
                "sample spacing not uniform at t = {}: {} vs {}", times[i], h0, h1));
        }
        double const h = 0.5 * (h0 + h1);
        out.push_back((values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h));
    }
    return out;
}

std::vector<double> const& second_derivative_series(VirialSeries& series) {
    series.vpp = second_derivative_series(series.times, series.v_values);
    return series.vpp;
}

double glassey_bound(double v0, double v0_prime, double b) {
    if (!(b > 0.0)) throw ParameterError(fmt::format("concavity constant must be positive, got {}", b));
    if (!(v0 > 0.0)) throw ParameterError(fmt::format("virial potential must be positive, got {}", v0));
    return (v0_prime + std::sqrt(v0_prime * v0_prime + 2.0 * b * v0)) / b;
}

ConcavityEstimate estimate_b(VirialSeries series, std::size_t transient, std::optional<double> a) {
    if (series.vpp.empty()) second_derivative_series(series);
    // vpp[k] sits at sample index k + 1
    std::size_t const first = transient > 0 ? transient - 1 : 0;
    if (first >= series.vpp.size()) throw StencilError("no second differences past the transient");
    double const worst = *std::max_element(series.vpp.begin() + static_cast<long>(first),
                                           series.vpp.end());
    ConcavityEstimate out;
    out.b_hat = -worst;
    out.concave = out.b_hat > 0.0;
    out.a = a;
    return out;
}

double q_gap(double d_rad_omega, double s_omega_initial) {
    return 2.0 * (d_rad_omega - s_omega_initial);
}

double case_threshold(Params const& params, double energy) {
    double const da = params.d * params.alpha;
    return (4.0 * da * std::abs(energy) + 2.0) / (da - 4.0);
}

double initial_slope(VirialSeries const& s) {
    if (s.times.size() < 3) throw StencilError("slope estimate needs 3 samples");
    double const h = s.times[1] - s.times[0];
    return (-3.0 * s.v_values[0] + 4.0 * s.v_values[1] - s.v_values[2]) / (2.0 * h);
}

} // namespace isqnls
