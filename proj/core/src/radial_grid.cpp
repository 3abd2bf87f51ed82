#include "isqnls/radial_grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "isqnls/errors.hpp"

namespace isqnls {

namespace {

// ∫_0^1 s^k (1-s) ds and ∫_0^1 s^{k+1} ds, used to integrate the hat
// functions against (a + h s)^{d-1} without cancellation.
double binomial(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

struct CellMoments {
    double left;   // ∫ (1-s) (a+hs)^{d-1} h ds
    double right;  // ∫ s (a+hs)^{d-1} h ds
    double total;  // ∫ (a+hs)^{d-1} h ds
};

CellMoments cell_moments(int d, double a, double h) {
    CellMoments m{0.0, 0.0, 0.0};
    int const p = d - 1;
    for (int k = 0; k <= p; ++k) {
        double const coef = binomial(p, k) * std::pow(a, p - k) * std::pow(h, k);
        m.left += coef / ((k + 1.0) * (k + 2.0));
        m.right += coef / (k + 2.0);
        m.total += coef / (k + 1.0);
    }
    m.left *= h;
    m.right *= h;
    m.total *= h;
    return m;
}

} // namespace

GridPtr RadialGrid::build(int d, double r_min, double r_max, std::size_t n, double stretch) {
    if (d < 1) throw ParameterError(fmt::format("grid dimension d = {} must be positive", d));
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
        throw ParameterError(
            fmt::format("grid bounds must satisfy 0 < r_min < r_max (got {}, {})", r_min, r_max));
    }
    if (n < 16) throw ParameterError(fmt::format("grid needs n >= 16 nodes (got {})", n));
    if (!(stretch >= 1.0) || !std::isfinite(stretch)) {
        throw ParameterError(fmt::format("grid stretch must be >= 1 (got {})", stretch));
    }

    auto grid = std::shared_ptr<RadialGrid>(new RadialGrid());
    grid->d_ = d;
    grid->stretch_ = stretch;
    grid->surface_ = surface_area(d);
    auto& r = grid->r_;
    r.resize(n);

    double const length = r_max - r_min;
    if (stretch == 1.0) {
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = r_min + length * static_cast<double>(i) / static_cast<double>(n - 1);
        }
    } else {
        // spacings h_i = h_0 q^i with h_{n-2}/h_0 = stretch
        double const log_q = std::log(stretch) / static_cast<double>(n - 2);
        double const denom = std::expm1(log_q * static_cast<double>(n - 1));
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = r_min + length * std::expm1(log_q * static_cast<double>(i)) / denom;
        }
    }
    r.front() = r_min;
    r.back() = r_max;
    for (std::size_t i = 1; i < n; ++i) {
        if (!(r[i] > r[i - 1])) {
            throw ParameterError("grid nodes are not strictly increasing; reduce stretch or n");
        }
    }

    auto& w = grid->w_;
    auto& kappa = grid->kappa_;
    w.assign(n, 0.0);
    kappa.assign(n - 1, 0.0);
    double const surf = grid->surface_;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double const h = r[i + 1] - r[i];
        auto const m = cell_moments(d, r[i], h);
        w[i] += surf * m.left;
        w[i + 1] += surf * m.right;
        kappa[i] = surf * m.total / (h * h);
    }
    return grid;
}

double RadialGrid::annulus_volume() const noexcept {
    return surface_ * (std::pow(r_max(), d_) - std::pow(r_min(), d_)) / d_;
}

double geometric_stretch(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n < 16) {
        throw ParameterError("geometric_stretch needs 0 < r_min < r_max and n >= 16");
    }
    double const log_q = std::log(r_max / r_min) / static_cast<double>(n - 1);
    return std::exp(log_q * static_cast<double>(n - 2));
}

GridPtr build_grid(Params const& params, double r_min, double r_max, std::size_t n,
                   double stretch) {
    return RadialGrid::build(params.d, r_min, r_max, n, stretch);
}

} // namespace isqnls
