#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "isqnls/errors.hpp"
#include "isqnls/hardy_operator.hpp"
#include "isqnls/radial_field.hpp"
#include "support.hpp"

namespace isqnls {
namespace {

using testing::geometric_grid;
constexpr double pi = std::numbers::pi;

TEST(RadialGrid, ConstantIntegratesToAnnulusVolume) {
    auto grid = RadialGrid::build(3, 1e-3, 1.0, 400, 1.0);
    auto one = RealRadialField::from_function(grid, [](double) { return 1.0; });
    double const exact = 4.0 * pi / 3.0 * (1.0 - 1e-9);
    EXPECT_NEAR(integrate(one) / exact, 1.0, 1e-8);
    EXPECT_NEAR(grid->annulus_volume() / exact, 1.0, 1e-14);
}

TEST(RadialGrid, GaussianIntegral) {
    // mildly clustered: a geometric grid spends most nodes far below r = 1
    auto grid = RadialGrid::build(3, 1e-6, 12.0, 4096, 10.0);
    auto g = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r); });
    EXPECT_NEAR(integrate(g) / std::pow(pi, 1.5), 1.0, 1e-6);
}

TEST(RadialGrid, RejectsDegenerateInput) {
    EXPECT_THROW(RadialGrid::build(3, 1e-3, 1.0, 2, 1.0), ParameterError);
    EXPECT_THROW(RadialGrid::build(3, 1e-3, 1.0, 15, 1.0), ParameterError);
    EXPECT_THROW(RadialGrid::build(3, 0.0, 1.0, 100, 1.0), ParameterError);
    EXPECT_THROW(RadialGrid::build(3, 2.0, 1.0, 100, 1.0), ParameterError);
    EXPECT_THROW(RadialGrid::build(3, 1e-3, 1.0, 100, 0.5), ParameterError);
}

TEST(RadialGrid, GeometricStretchGivesConstantRatio) {
    auto grid = geometric_grid(3, 1e-6, 120.0, 512);
    auto r = grid->r();
    double const q = r[1] / r[0];
    for (std::size_t i = 1; i + 1 < r.size(); ++i) EXPECT_NEAR(r[i + 1] / r[i], q, 1e-9 * q);
    for (double w : grid->weights()) EXPECT_GT(w, 0.0);
}

TEST(Integrate, InverseSquareGaussianMoment) {
    // r^{-2} is lumped at the nodes, which needs cells small relative to r
    auto grid = geometric_grid(3, 1e-7, 12.0, 32768);
    auto g = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r); });
    EXPECT_NEAR(integrate(g, -2) / (2.0 * std::pow(pi, 1.5)), 1.0, 1e-6);
}

TEST(Integrate, ZeroFieldAndBadPower) {
    auto grid = geometric_grid(3, 1e-3, 1.0, 64);
    RealRadialField zero(grid);
    EXPECT_EQ(integrate(zero), 0.0);
    EXPECT_EQ(integrate(zero, -2), 0.0);
    EXPECT_THROW(integrate(zero, 1), ParameterError);
}

TEST(RadialField, RejectsNonFiniteAndMismatchedSamples) {
    auto grid = geometric_grid(3, 1e-3, 1.0, 64);
    std::vector<double> bad(64, 0.0);
    bad[5] = std::nan("");
    EXPECT_THROW(RealRadialField(grid, bad), ParameterError);
    EXPECT_THROW(RealRadialField(grid, std::vector<double>(10, 0.0)), ParameterError);
}

TEST(Differentiate, ExactOnAffineAndQuadratic) {
    auto grid = geometric_grid(3, 1e-3, 5.0, 200);
    auto lin = differentiate(RealRadialField::from_function(grid, [](double r) { return r; }));
    auto quad = differentiate(RealRadialField::from_function(grid, [](double r) { return r * r; }));
    auto r = grid->r();
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_NEAR(lin[i], 1.0, 1e-9);
        EXPECT_NEAR(quad[i], 2.0 * r[i], 1e-8 * std::max(1.0, r[i]));
    }
}

TEST(Differentiate, SecondOrderUnderRefinement) {
    auto error_at = [](std::size_t n) {
        auto grid = RadialGrid::build(3, 1e-2, 5.0, n, 1.0);
        auto f = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r); });
        auto df = differentiate(f);
        double worst = 0.0;
        auto r = grid->r();
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(df[i] + 2.0 * r[i] * std::exp(-r[i] * r[i])));
        }
        return worst;
    };
    double const e1 = error_at(201), e2 = error_at(401), e3 = error_at(801);
    EXPECT_NEAR(e1 / e2, 4.0, 0.4);
    EXPECT_NEAR(e2 / e3, 4.0, 0.4);
}

TEST(Interpolate, ExactOnCubicsAndContinuesBeyondRange) {
    auto grid = geometric_grid(3, 1e-3, 5.0, 300);
    auto cubic = [](double r) { return 1.0 - 2.0 * r + 0.5 * r * r * r; };
    auto f = RealRadialField::from_function(grid, cubic);
    for (double r : {0.0011, 0.3, 1.234, 4.99}) EXPECT_NEAR(interpolate(f, r), cubic(r), 1e-10);
    EXPECT_EQ(interpolate(f, 6.0), 0.0);
    double const v0 = f[0];
    EXPECT_NEAR(interpolate(f, 1e-4, 0.5), v0 * std::pow(0.1, -0.5), 1e-12);
}

TEST(ScaleField, IdentityAndInvalidFactor) {
    auto grid = geometric_grid(3, 1e-6, 12.0, 1024);
    auto g = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r / 2); });
    auto same = scale_field(g, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(same[i], g[i]);
    EXPECT_THROW(scale_field(g, 0.0), ParameterError);
    EXPECT_THROW(scale_field(g, -1.0), ParameterError);
}

TEST(ScaleField, PreservesMassAndScalesNorms) {
    Params const p{3, 0.1, 2.0, 1.0};
    auto grid = geometric_grid(3, 1e-6, 30.0, 4096);
    auto g = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r / 2); });
    double const m = integrate(RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r); }));
    auto lp = [&](RealRadialField const& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += grid->weights()[i] * std::pow(std::abs(v[i]), 4.0);
        return s;
    };
    for (double lambda : {0.5, 0.8, 1.3, 2.0}) {
        auto s = scale_field(g, lambda);
        double mass = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) mass += grid->weights()[i] * s[i] * s[i];
        EXPECT_NEAR(mass / m, 1.0, 1e-6) << lambda;
        EXPECT_NEAR(lp(s) / (std::pow(lambda, 3.0) * lp(g)), 1.0, 1e-6) << lambda;
    }
}

TEST(ScaleField, ComposesMultiplicatively) {
    auto grid = geometric_grid(3, 1e-6, 30.0, 4096);
    auto g = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r / 2); });
    auto twice = scale_field(scale_field(g, 1.25), 0.8);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(twice[i], g[i], 1e-8);
}

TEST(Resample, MatchesTheFunctionOnAnotherGrid) {
    auto coarse = geometric_grid(3, 1e-6, 20.0, 2048);
    auto fine = geometric_grid(3, 1e-9, 20.0, 3000);
    auto f = RealRadialField::from_function(coarse, [](double r) { return std::exp(-r * r); });
    auto g = resample(f, fine);
    for (std::size_t i = 0; i < fine->size(); ++i) {
        EXPECT_NEAR(g[i], std::exp(-fine->r()[i] * fine->r()[i]), 1e-7);
    }
    auto other_dim = geometric_grid(4, 1e-6, 20.0, 100);
    EXPECT_THROW(resample(f, other_dim), ParameterError);
}

TEST(HardyOperator, GaussianMomentsAndMatrixForm) {
    Params const p{3, 0.1, 2.0, 1.0};
    auto grid = geometric_grid(3, 1e-6, 12.0, 8192);
    auto g = RealRadialField::from_function(grid, [](double r) { return std::exp(-r * r / 2); });
    EXPECT_NEAR(dirichlet_energy(*grid, p, g.values()) / (1.5 * std::pow(pi, 1.5)), 1.0, 1e-5);
    EXPECT_NEAR(inverse_square_moment(*grid, p, g.values()) / (2.0 * std::pow(pi, 1.5)), 1.0, 1e-5);

    auto a = hardy_matrix(*grid, p);
    std::vector<double> av(g.size());
    apply_hardy(*grid, p, g.values(), av);
    double form = 0.0, direct = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double row = a.diag[i] * g[i];
        if (i > 0) row += a.off[i - 1] * g[i - 1];
        if (i + 1 < g.size()) row += a.off[i] * g[i + 1];
        EXPECT_NEAR(row, av[i], 1e-9 * (std::abs(row) + 1.0));
        form += g[i] * av[i];
    }
    direct = dirichlet_energy(*grid, p, g.values()) - p.c * inverse_square_moment(*grid, p, g.values());
    EXPECT_NEAR(form / direct, 1.0, 1e-10);
}

TEST(HardyOperator, ComplexApplicationActsComponentwise) {
    Params const p{4, 0.5, 1.5, 1.0};
    auto grid = geometric_grid(4, 1e-5, 30.0, 1024);
    std::mt19937_64 rng(11);
    auto u = testing::random_complex_field(grid, rng);
    std::vector<double> re(u.size()), im(u.size()), are(u.size()), aim(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        re[i] = u[i].real();
        im[i] = u[i].imag();
    }
    std::vector<std::complex<double>> au(u.size());
    apply_hardy(*grid, p, u.values(), au);
    apply_hardy(*grid, p, re, are);
    apply_hardy(*grid, p, im, aim);
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_DOUBLE_EQ(au[i].real(), are[i]);
        EXPECT_DOUBLE_EQ(au[i].imag(), aim[i]);
    }
}

TEST(HardyOperator, DiscreteHardyInequality) {
    std::mt19937_64 rng(2024);
    for (int d : {3, 4, 5}) {
        double const lambda_d = 0.25 * (d - 2) * (d - 2);
        for (double c : {0.0, 0.5 * lambda_d, -1.0}) {
            Params const p{d, c, 4.0 / d + 0.1, 1.0};
            auto grid = geometric_grid(d, 1e-6, 40.0, 2048);
            for (int trial = 0; trial < 10; ++trial) {
                auto v = testing::random_field(grid, rng, 20.0);
                double const kin = dirichlet_energy(*grid, p, v.values());
                double const mom = inverse_square_moment(*grid, p, v.values());
                double const h1 = kin + integrate(*grid, [&] {
                    std::vector<double> sq(v.size());
                    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
                    return sq;
                }());
                EXPECT_LE(lambda_d * mom, kin + 1e-6 * h1) << "d=" << d << " c=" << c;
            }
        }
    }
}

} // namespace
} // namespace isqnls
