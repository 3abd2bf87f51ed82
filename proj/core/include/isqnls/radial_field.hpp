#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "isqnls/radial_grid.hpp"

namespace isqnls {

/// Samples of a radial function at the nodes of a grid.
template <class T>
class RadialField {
public:
    using value_type = T;

    RadialField(GridPtr grid, std::vector<T> values);
    explicit RadialField(GridPtr grid) : RadialField(grid, std::vector<T>(grid->size(), T{})) {}

    static RadialField from_function(GridPtr grid, std::function<T(double)> const& f);

    RadialGrid const& grid() const noexcept { return *grid_; }
    GridPtr const& grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<T const> values() const noexcept { return values_; }
    std::span<T> values() noexcept { return values_; }
    T operator[](std::size_t i) const noexcept { return values_[i]; }
    T& operator[](std::size_t i) noexcept { return values_[i]; }

    bool all_finite() const noexcept;

private:
    GridPtr grid_;
    std::vector<T> values_;
};

using RealRadialField = RadialField<double>;
using ComplexRadialField = RadialField<std::complex<double>>;

extern template class RadialField<double>;
extern template class RadialField<std::complex<double>>;

/// Σ w_i r_i^{power} f_i; power ∈ {-2, 0}.
double integrate(RealRadialField const& f, int power = 0);
double integrate(RadialGrid const& grid, std::span<double const> f, int power = 0);

/// Second-order finite differences on the nonuniform grid (centered in the
/// interior, one-sided at the ends). Exact on quadratics.
RealRadialField differentiate(RealRadialField const& f);
ComplexRadialField differentiate(ComplexRadialField const& f);

/// Evaluates the field at radius r by cubic interpolation through the four
/// nearest nodes. Beyond r_max the field is 0; below r_min it is continued
/// as v(r_min)·(r/r_min)^{-origin_exponent}.
double interpolate(RealRadialField const& v, double r, double origin_exponent = 0.0);

/// Mass-preserving dilation v^λ(r) = λ^{d/2} v(λ r) on the same grid.
RealRadialField scale_field(RealRadialField const& v, double lambda,
                            double origin_exponent = 0.0);

/// v evaluated at the nodes of another grid of the same dimension, by
/// `interpolate` (power law below v's r_min, zero beyond its r_max).
RealRadialField resample(RealRadialField const& v, GridPtr const& target, double origin_exponent = 0.0);

} // namespace isqnls
