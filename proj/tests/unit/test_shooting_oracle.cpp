#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "isqnls/ground_state.hpp"
#include "support.hpp"

namespace isqnls {
namespace {

// Values of the classical cubic ground state in R^3 (c = 0, ω = 1), produced
// by the independent integrator below and frozen as regression constants.
constexpr double free_central_amplitude = 4.33738;
constexpr double free_mass = 18.8972;

struct FreeShot {
    double amplitude;
    double mass;
};

// Plain RK4 in r for φ'' + (2/r)φ' − φ + φ³ = 0, bisecting on φ(0). Shares
// nothing with the library solver (different variable, stepper and start).
FreeShot free_cubic_oracle() {
    constexpr double h = 2e-4;
    constexpr double r_start = 1e-4;
    auto rhs = [](double r, std::array<double, 2> const& y) {
        return std::array<double, 2>{y[1], -2.0 / r * y[1] + y[0] - y[0] * y[0] * y[0]};
    };
    // +1: overshoot (crosses zero), -1: undershoot (turns up while positive)
    auto shoot = [&](double a, double* mass) {
        std::array<double, 2> y{a + (a - a * a * a) * r_start * r_start / 6.0,
                                (a - a * a * a) * r_start / 3.0};
        double r = r_start;
        double m = 0.0;
        while (r < 20.0) {
            double const before = y[0] * y[0] * r * r;
            auto k1 = rhs(r, y);
            std::array<double, 2> t{y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]};
            auto k2 = rhs(r + 0.5 * h, t);
            t = {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]};
            auto k3 = rhs(r + 0.5 * h, t);
            t = {y[0] + h * k3[0], y[1] + h * k3[1]};
            auto k4 = rhs(r + h, t);
            for (int j = 0; j < 2; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
            r += h;
            m += 0.5 * h * (before + y[0] * y[0] * r * r);
            if (y[0] <= 0.0) return 1;
            if (y[1] > 0.0) {
                if (mass) *mass = m;
                return -1;
            }
            if (mass) *mass = m;
        }
        return 0;
    };
    double lo = 4.0, hi = 5.0;
    for (int it = 0; it < 60; ++it) {
        double const mid = 0.5 * (lo + hi);
        (shoot(mid, nullptr) > 0 ? hi : lo) = mid;
    }
    double m = 0.0;
    shoot(lo, &m);
    return {lo, 4.0 * std::numbers::pi * m};
}

TEST(ShootingOracle, IndependentIntegratorReproducesFrozenConstants) {
    auto const shot = free_cubic_oracle();
    EXPECT_NEAR(shot.amplitude, free_central_amplitude, 2e-5);
    EXPECT_NEAR(shot.mass / free_mass, 1.0, 1e-4);
}

TEST(ShootingOracle, LibraryShootingMatchesFrozenMass) {
    Params const p{3, 0.0, 2.0, 1.0};
    auto grid = testing::ground_state_grid(3);
    ShootingOptions opts;
    opts.r0 = grid->r_min();
    ShootingResult details{};
    auto const gs = shoot_ground_state(p, grid, opts, &details);
    EXPECT_NEAR(details.amplitude, free_central_amplitude, 1e-4);
    EXPECT_NEAR(gs.report.mass / free_mass, 1.0, 1e-3);
    EXPECT_EQ(gs.method, GroundStateMethod::shooting);
}

TEST(ShootingOracle, AgreesWithProjectedGradient) {
    Params const p{3, 0.1, 2.0, 1.0};
    auto const& pg = testing::cached_ground_state(p);
    ShootingOptions opts;
    opts.r0 = pg.profile.grid().r_min();
    auto const shot = shoot_ground_state(p, pg.profile.grid_ptr(), opts);
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < pg.profile.size(); ++i) {
        peak = std::max(peak, std::abs(pg.profile[i]));
        worst = std::max(worst, std::abs(pg.profile[i] - shot.profile[i]));
    }
    EXPECT_LE(worst / peak, 1e-3);
}

TEST(ShootingOracle, FrequencyScaling) {
    // φ_ω(r) = ω^{1/α} φ_1(√ω r): the inverse-square term scales like the Laplacian
    Params const one{3, 0.1, 2.0, 1.0};
    Params const four{3, 0.1, 2.0, 4.0};
    auto grid = testing::geometric_grid(3, 1e-6, 40.0, 4096);
    ShootingOptions opts;
    opts.r0 = grid->r_min();
    auto const a = shoot_ground_state(one, grid, opts);
    auto const b = shoot_ground_state(four, grid, opts);
    double const sigma = one.indicial_exponent();
    for (double r : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0}) {
        double const expected = 2.0 * interpolate(a.profile, 2.0 * r, sigma);
        EXPECT_NEAR(interpolate(b.profile, r, sigma) / expected, 1.0, 1e-5) << r;
    }
}

} // namespace
} // namespace isqnls
