#include "isqnls/radial_field.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "isqnls/errors.hpp"

namespace isqnls {

template <class T>
RadialField<T>::RadialField(GridPtr grid, std::vector<T> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ParameterError("field constructed without a grid");
    if (values_.size() != grid_->size()) {
        throw ParameterError(fmt::format("field has {} values but the grid has {} nodes",
                                         values_.size(), grid_->size()));
    }
    if (!all_finite()) throw ParameterError("field values must be finite");
}

template <class T>
RadialField<T> RadialField<T>::from_function(GridPtr grid, std::function<T(double)> const& f) {
    std::vector<T> values(grid->size());
    auto const r = grid->r();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(r[i]);
    return RadialField(std::move(grid), std::move(values));
}

template <class T>
bool RadialField<T>::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](T const& x) {
        if constexpr (std::is_same_v<T, double>) {
            return std::isfinite(x);
        } else {
            return std::isfinite(x.real()) && std::isfinite(x.imag());
        }
    });
}

template class RadialField<double>;
template class RadialField<std::complex<double>>;

double integrate(RadialGrid const& grid, std::span<double const> f, int power) {
    if (power != 0 && power != -2) {
        throw ParameterError(fmt::format("integrate supports power 0 or -2 (got {})", power));
    }
    if (f.size() != grid.size()) throw ParameterError("integrand length does not match grid");
    auto const w = grid.weights();
    auto const r = grid.r();
    double sum = 0.0;
    if (power == 0) {
        for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * f[i];
    } else {
        for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * f[i] / (r[i] * r[i]);
    }
    return sum;
}

double integrate(RealRadialField const& f, int power) {
    return integrate(f.grid(), f.values(), power);
}

namespace {

template <class T>
RadialField<T> differentiate_impl(RadialField<T> const& f) {
    auto const n = f.size();
    if (n < 3) throw ParameterError("differentiate needs at least 3 nodes");
    auto const r = f.grid().r();
    auto const v = f.values();
    std::vector<T> out(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double const hm = r[i] - r[i - 1];
        double const hp = r[i + 1] - r[i];
        out[i] = -hp / (hm * (hm + hp)) * v[i - 1] + (hp - hm) / (hm * hp) * v[i] +
                 hm / (hp * (hm + hp)) * v[i + 1];
    }
    {
        double const h1 = r[1] - r[0];
        double const h2 = r[2] - r[1];
        out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1] -
                 h1 / (h2 * (h1 + h2)) * v[2];
    }
    {
        double const h1 = r[n - 1] - r[n - 2];
        double const h2 = r[n - 2] - r[n - 3];
        out[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[n - 1] -
                     (h1 + h2) / (h1 * h2) * v[n - 2] + h1 / (h2 * (h1 + h2)) * v[n - 3];
    }
    return RadialField<T>(f.grid_ptr(), std::move(out));
}

// Index j of the left node of the 4-point stencil used around r.
std::size_t stencil_start(std::span<double const> nodes, double r) {
    auto const it = std::upper_bound(nodes.begin(), nodes.end(), r);
    auto k = static_cast<std::ptrdiff_t>(it - nodes.begin()) - 2;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(nodes.size()) - 4);
    return static_cast<std::size_t>(k);
}

double lagrange4(std::span<double const> x, std::span<double const> y, std::size_t j, double r) {
    double sum = 0.0;
    for (std::size_t a = j; a < j + 4; ++a) {
        double basis = 1.0;
        for (std::size_t b = j; b < j + 4; ++b) {
            if (b != a) basis *= (r - x[b]) / (x[a] - x[b]);
        }
        sum += basis * y[a];
    }
    return sum;
}

} // namespace

RealRadialField differentiate(RealRadialField const& f) { return differentiate_impl(f); }
ComplexRadialField differentiate(ComplexRadialField const& f) { return differentiate_impl(f); }

double interpolate(RealRadialField const& v, double r, double origin_exponent) {
    auto const nodes = v.grid().r();
    auto const values = v.values();
    if (r > nodes.back()) return 0.0;
    if (r < nodes.front()) {
        return values.front() * std::pow(r / nodes.front(), -origin_exponent);
    }
    return lagrange4(nodes, values, stencil_start(nodes, r), r);
}

RealRadialField scale_field(RealRadialField const& v, double lambda, double origin_exponent) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParameterError(fmt::format("scaling parameter lambda = {} must be > 0", lambda));
    }
    if (lambda == 1.0) return v;
    auto const& grid = v.grid();
    double const amp = std::pow(lambda, 0.5 * grid.d());
    auto const nodes = grid.r();
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = amp * interpolate(v, lambda * nodes[i], origin_exponent);
    }
    return RealRadialField(v.grid_ptr(), std::move(out));
}

RealRadialField resample(RealRadialField const& v, GridPtr const& target, double origin_exponent) {
    if (target->d() != v.grid().d()) throw ParameterError("resampling across dimensions");
    auto const nodes = target->r();
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = interpolate(v, nodes[i], origin_exponent);
    return RealRadialField(target, std::move(out));
}

} // namespace isqnls
