#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace isqnls::testing {

GridPtr geometric_grid(int d, double r_min, double r_max, std::size_t n) {
    return RadialGrid::build(d, r_min, r_max, n, geometric_stretch(r_min, r_max, n));
}

GridPtr ground_state_grid(int d) { return geometric_grid(d, 1e-6, 120.0, 4096); }

RealRadialField random_field(GridPtr const& grid, std::mt19937_64& rng, double support) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double const reach = support > 0.0 ? support : std::min(grid->r_max(), 15.0);
    int const bumps = 1 + static_cast<int>(unit(rng) * 4.0);

    struct Bump {
        double amp, centre, width;
    };
    std::vector<Bump> parts;
    for (int k = 0; k < bumps; ++k) {
        parts.push_back({2.0 * unit(rng) - 0.5, reach * 0.6 * unit(rng), 0.2 + 2.0 * unit(rng)});
    }
    // a weak origin singularity below the Hardy-critical rate exercises the tail closure
    double const beta = 0.4 * unit(rng) * 0.5 * (grid->d() - 2);
    double const sing = unit(rng) < 0.5 ? 0.3 * unit(rng) : 0.0;

    auto const r = grid->r();
    std::vector<double> values(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        double const x = r[i];
        if (x >= reach) {
            values[i] = 0.0;
            continue;
        }
        double v = sing * std::pow(x, -beta) * std::exp(-x);
        for (auto const& b : parts) {
            double const z = (x - b.centre) / b.width;
            v += b.amp * std::exp(-z * z);
        }
        // smooth taper to zero at the edge of the support
        double const s = x / reach;
        v *= (1.0 - s * s) * (1.0 - s * s);
        values[i] = v;
    }
    values.back() = 0.0;
    return RealRadialField(grid, std::move(values));
}

ComplexRadialField random_complex_field(GridPtr const& grid, std::mt19937_64& rng) {
    auto const re = random_field(grid, rng);
    auto const im = random_field(grid, rng);
    std::vector<std::complex<double>> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = {re[i], im[i]};
    return ComplexRadialField(grid, std::move(values));
}

GroundState const& cached_ground_state(Params const& params) {
    static std::mutex lock;
    static std::map<std::tuple<int, double, double, double>, GroundState> cache;
    std::scoped_lock guard(lock);
    auto const key = std::make_tuple(params.d, params.c, params.alpha, params.omega);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, solve_ground_state(params, ground_state_grid(params.d))).first;
    }
    return it->second;
}

double relative_difference(double a, double b) {
    double const scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace isqnls::testing
