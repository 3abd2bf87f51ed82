#include "isqnls/params.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "isqnls/errors.hpp"

namespace isqnls {

double Params::hardy_constant() const noexcept {
    double const s = 0.5 * (d - 2);
    return s * s;
}

double Params::nu() const {
    double const gap = hardy_constant() - c;
    if (!(gap > 0.0)) {
        throw ParameterError(fmt::format(
            "supercritical potential strength: c = {} must satisfy c < lambda(d) = {}", c,
            hardy_constant()));
    }
    return std::sqrt(gap);
}

double Params::indicial_exponent() const { return 0.5 * (d - 2) - nu(); }

double Params::virial_coefficient() const noexcept { return d * alpha / (2.0 * (alpha + 2.0)); }

void Params::validate() const {
    if (d < 3) {
        throw ParameterError(fmt::format("dimension d = {} must satisfy d >= 3", d));
    }
    if (!std::isfinite(c) || !(c < hardy_constant())) {
        throw ParameterError(fmt::format(
            "supercritical potential strength: c = {} must satisfy c < lambda(d) = {}", c,
            hardy_constant()));
    }
    double const lo = 4.0 / d;
    double const hi = 4.0 / (d - 2);
    if (!std::isfinite(alpha) || !(alpha > lo) || !(alpha < hi)) {
        throw ParameterError(fmt::format(
            "exponent outside intercritical range: alpha = {} must satisfy {} < alpha < {}", alpha,
            lo, hi));
    }
    if (!std::isfinite(omega) || !(omega > 0.0)) {
        throw ParameterError(fmt::format("frequency omega = {} must satisfy omega > 0", omega));
    }
}

double surface_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

} // namespace isqnls
