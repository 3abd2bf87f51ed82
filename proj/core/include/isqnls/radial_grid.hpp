#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "isqnls/params.hpp"

namespace isqnls {

/// Nodes on [r_min, r_max] and positive quadrature weights for the radial
/// measure surface(d) r^{d-1} dr. Weights are the composite trapezoid rule
/// with the measure integrated exactly on each cell, so constants integrate
/// to the annulus volume up to round-off. Immutable; share through
/// `std::shared_ptr<const RadialGrid>`.
class RadialGrid {
public:
    /// `stretch` is the ratio of the last to the first node spacing
    /// (1 = uniform, >1 = geometric clustering toward r_min).
    static std::shared_ptr<const RadialGrid> build(int d, double r_min, double r_max,
                                                   std::size_t n, double stretch);

    std::size_t size() const noexcept { return r_.size(); }
    int d() const noexcept { return d_; }
    double r_min() const noexcept { return r_.front(); }
    double r_max() const noexcept { return r_.back(); }
    double stretch() const noexcept { return stretch_; }
    double surface() const noexcept { return surface_; }

    std::span<double const> r() const noexcept { return r_; }
    std::span<double const> weights() const noexcept { return w_; }

    /// Per-cell coefficient surface·∫_{r_i}^{r_{i+1}} r^{d-1} dr / h_i²: the exact
    /// Dirichlet energy of a piecewise-linear function is Σ κ_i (v_{i+1}-v_i)².
    std::span<double const> conductance() const noexcept { return kappa_; }

    /// Exact volume of the annulus {r_min ≤ |x| ≤ r_max}.
    double annulus_volume() const noexcept;

private:
    RadialGrid() = default;

    int d_ = 3;
    double stretch_ = 1.0;
    double surface_ = 0.0;
    std::vector<double> r_;
    std::vector<double> w_;
    std::vector<double> kappa_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Stretch for which the nodes form an exact geometric progression
/// r_i = r_min q^i ending at r_max.
double geometric_stretch(double r_min, double r_max, std::size_t n);

GridPtr build_grid(Params const& params, double r_min, double r_max, std::size_t n,
                   double stretch);

} // namespace isqnls
