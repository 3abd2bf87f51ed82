#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "isqnls/errors.hpp"
#include "isqnls/ground_state.hpp"
#include "isqnls/virial.hpp"
#include "support.hpp"

namespace isqnls {
namespace {

using testing::relative_difference;

TEST(Cutoff, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(theta(0.5), 0.25);
    EXPECT_DOUBLE_EQ(theta(1.5), 1.75);
    EXPECT_DOUBLE_EQ(theta(3.0), 2.0);
    EXPECT_DOUBLE_EQ(theta_prime(0.5), 1.0);
    EXPECT_DOUBLE_EQ(theta_prime(1.5), 1.0);
    EXPECT_DOUBLE_EQ(theta_prime(2.5), 0.0);
    EXPECT_THROW(theta(-0.1), ParameterError);
    EXPECT_THROW(theta_prime(-0.1), ParameterError);
    EXPECT_THROW(theta_second(-0.1), ParameterError);
}

TEST(Cutoff, ContinuousWithBoundedSecondDerivative) {
    for (double knot : {1.0, 2.0}) {
        EXPECT_NEAR(theta(knot - 1e-12), theta(knot + 1e-12), 1e-10);
        EXPECT_NEAR(theta_prime(knot - 1e-12), theta_prime(knot + 1e-12), 1e-10);
    }
    for (int i = 0; i < 10000; ++i) EXPECT_LE(theta_second(4.0 * i / 9999.0), 2.0);
}

TEST(VirialPotential, ZeroAndInactiveCutoff) {
    auto grid = testing::geometric_grid(3, 1e-6, 60.0, 2048);
    ComplexRadialField zero(grid);
    EXPECT_EQ(virial_potential(zero, 10.0), 0.0);
    EXPECT_THROW(virial_potential(zero, 1.0), ParameterError);

    // supported inside r ≤ R the weight is exactly r²
    auto u = ComplexRadialField::from_function(grid, [](double r) {
        return r < 8.0 ? std::complex<double>(std::exp(-r * r), 0.3 * r * std::exp(-r)) : 0.0;
    });
    std::vector<double> weighted(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) weighted[i] = grid->r()[i] * grid->r()[i] * std::norm(u[i]);
    EXPECT_LT(relative_difference(virial_potential(u, 10.0), integrate(*grid, weighted)), 1e-14);
}

TEST(VirialRhs, ThreeFormsAgreeOnRandomFields) {
    std::mt19937_64 rng(31);
    for (Params const& p : {Params{3, 0.1, 2.0, 1.0}, Params{4, 0.5, 1.5, 1.0}, Params{5, -0.3, 1.1, 2.0}}) {
        auto grid = testing::geometric_grid(p.d, 1e-6, 60.0, 1024);
        for (int trial = 0; trial < 20; ++trial) {
            auto const rhs = virial_rhs(testing::random_complex_field(grid, rng), p, 20.0);
            EXPECT_LT(relative_difference(rhs.rhs1, rhs.rhs2), 1e-12);
            EXPECT_LT(relative_difference(rhs.rhs1, rhs.rhs3), 1e-12);
            EXPECT_GT(rhs.err_scale, 0.0);
        }
    }
}

TEST(VirialRhs, ErrorScaleClosedForm) {
    Params const p{3, 0.1, 2.0, 1.0};
    auto const rhs = virial_rhs(16.0, 1.0, p, 10.0);
    EXPECT_NEAR(rhs.err_scale, 1e-2 + 1e-2 * 4.0, 1e-15);
}

TEST(VirialRhs, SignsAtAndAboveTheGroundState) {
    Params const p{3, 0.1, 2.0, 1.0};
    auto const& gs = testing::cached_ground_state(p);
    auto const at = virial_rhs(gs.report, p, 20.0);
    for (double x : {at.rhs1, at.rhs2, at.rhs3}) EXPECT_LE(std::abs(x), 1e-5 * gs.report.hardy_sq);
    auto const above = virial_rhs(functional_report(scaled_profile(gs, 1.2), p), p, 20.0);
    for (double x : {above.rhs1, above.rhs2, above.rhs3}) EXPECT_LT(x, 0.0);
}

TEST(SecondDifferences, ExactOnQuadratics) {
    std::vector<double> t, sq, flat;
    for (int i = 0; i < 20; ++i) {
        t.push_back(0.1 * i);
        sq.push_back(t.back() * t.back());
        flat.push_back(3.0);
    }
    for (double x : second_derivative_series(t, sq)) EXPECT_NEAR(x, 2.0, 1e-11);
    for (double x : second_derivative_series(t, flat)) EXPECT_EQ(x, 0.0);
}

TEST(SecondDifferences, RejectsIrregularOrShortSampling) {
    std::vector<double> const t{0.0, 0.1, 0.2, 0.35, 0.45};
    std::vector<double> const v(5, 1.0);
    EXPECT_THROW(second_derivative_series(t, v), StencilError);
    std::vector<double> const two{0.0, 0.1};
    EXPECT_THROW(second_derivative_series(two, std::vector<double>{1.0, 2.0}), StencilError);
}

TEST(Glassey, QuadraticRoots) {
    EXPECT_NEAR(glassey_bound(10.0, 0.0, 1.0), std::sqrt(20.0), 1e-14);
    EXPECT_NEAR(glassey_bound(10.0, -1.0, 1.0), -1.0 + std::sqrt(21.0), 1e-14);
    EXPECT_THROW(glassey_bound(10.0, 0.0, 0.0), ParameterError);
    EXPECT_THROW(glassey_bound(10.0, 0.0, -1.0), ParameterError);
}

TEST(EstimateB, RecoversParabolaCurvature) {
    VirialSeries s;
    s.radius = 10.0;
    for (int i = 0; i < 30; ++i) {
        double const t = 0.01 * i;
        s.times.push_back(t);
        s.v_values.push_back(5.0 + t - 1.5 * t * t);
        s.q_values.push_back(0.0);
    }
    auto const e = estimate_b(s, 2, 0.25);
    EXPECT_NEAR(e.b_hat, 3.0, 1e-9);
    EXPECT_TRUE(e.concave);
    EXPECT_EQ(e.a, 0.25);
    EXPECT_NEAR(initial_slope(s), 1.0, 1e-12);

    for (auto& v : s.v_values) v = -v;
    auto const convex = estimate_b(s);
    EXPECT_LT(convex.b_hat, 0.0);
    EXPECT_FALSE(convex.concave);
}

TEST(VirialConstants, GapAndCaseThreshold) {
    EXPECT_DOUBLE_EQ(q_gap(13.6, 13.4), 2.0 * (13.6 - 13.4));
    Params const p{3, 0.1, 2.0, 1.0};
    EXPECT_DOUBLE_EQ(case_threshold(p, -0.5), (4.0 * 6.0 * 0.5 + 2.0) / 2.0);
}

} // namespace
} // namespace isqnls
