#include <array>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "isqnls/errors.hpp"
#include "isqnls/ground_state.hpp"

namespace isqnls {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // (φ, r φ') as functions of t = ln r

enum class Outcome { overshoot, undershoot, undecided };

struct RadialOde {
    Params params;
    void operator()(State const& y, State& dy, double t) const {
        double const r2 = std::exp(2.0 * t);
        double const phi = y[0];
        double const a = std::abs(phi);
        double const nonlin = a == 0.0 ? 0.0 : std::pow(a, params.alpha) * phi;
        dy[0] = y[1];
        dy[1] = -(params.d - 2.0) * y[1] + params.omega * r2 * phi - params.c * phi - r2 * nonlin;
    }
};

double indicial_poly(Params const& p, double e) { return e * e + (p.d - 2.0) * e + p.c; }

// Two-term Frobenius series A r^{-σ}(1 + k₁r² + k₂A^α r^{2-σα}).
State series_start(Params const& p, double sigma, double amp, double r0) {
    double const e1 = 2.0;
    double const e2 = 2.0 - sigma * p.alpha;
    double const k1 = p.omega / indicial_poly(p, -sigma + e1);
    double const k2 = -std::pow(amp, p.alpha) / indicial_poly(p, -sigma + e2);
    double const base = amp * std::pow(r0, -sigma);
    double const t1 = k1 * std::pow(r0, e1);
    double const t2 = k2 * std::pow(r0, e2);
    return {base * (1.0 + t1 + t2), base * (-sigma + (e1 - sigma) * t1 + (e2 - sigma) * t2)};
}

struct ShotTrace {
    Outcome outcome = Outcome::undecided;
    double event_radius = 0.0;
    std::vector<double> samples;  // φ at the requested radii (NaN past the event)
};

// Integrates outward and classifies the shot; optionally samples φ at `radii`
// (ascending, all ≥ r0).
ShotTrace shoot(Params const& p, double sigma, double amp, ShootingOptions const& o,
                std::vector<double> const& radii) {
    RadialOde const ode{p};
    auto stepper = odeint::make_dense_output(o.rel_tol * 1e-3, o.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    double const t0 = std::log(o.r0);
    double const t_end = std::log(o.r_end);
    stepper.initialize(series_start(p, sigma, amp, o.r0), t0, 1e-3);

    ShotTrace trace;
    trace.samples.assign(radii.size(), std::numeric_limits<double>::quiet_NaN());
    std::size_t next = 0;
    bool descended = false;
    while (stepper.current_time() < t_end) {
        stepper.do_step(ode);
        double const t = stepper.current_time();
        State const& y = stepper.current_state();
        while (next < radii.size() && std::log(radii[next]) <= t) {
            State ys;
            stepper.calc_state(std::log(radii[next]), ys);
            trace.samples[next++] = ys[0];
        }
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw NumericalError("shooting integration produced a non-finite state");
        }
        if (y[0] <= 0.0) {
            trace.outcome = Outcome::overshoot;
            trace.event_radius = std::exp(t);
            return trace;
        }
        if (y[1] < 0.0) descended = true;
        if (descended && y[1] > 0.0) {
            trace.outcome = Outcome::undershoot;
            trace.event_radius = std::exp(t);
            return trace;
        }
    }
    trace.event_radius = o.r_end;
    return trace;
}

} // namespace

GroundState shoot_ground_state(Params const& params, GridPtr const& grid,
                               ShootingOptions const& options, ShootingResult* details) {
    params.validate();
    if (grid->d() != params.d) throw ParameterError("grid dimension does not match params");
    if (!(options.r0 > 0.0) || !(options.r_end > options.r0)) {
        throw ParameterError("shooting needs 0 < r0 < r_end");
    }
    double const sigma = params.indicial_exponent();
    std::vector<double> const none;

    auto classify = [&](double amp) { return shoot(params, sigma, amp, options, none).outcome; };

    // Start away from the constant equilibrium φ ≡ ω^{1/α}, which never decides.
    double start = 1.0;
    Outcome first = classify(start);
    for (int k = 0; first == Outcome::undecided && k < 8; ++k) {
        start *= 1.37;
        first = classify(start);
    }
    if (first == Outcome::undecided) throw BracketError("shooting never classified", start, start);
    double a_lo = start;
    double a_hi = start;
    if (first == Outcome::overshoot) {
        int k = 0;
        do {
            a_hi = a_lo;
            a_lo *= 0.5;
            if (++k > 80) throw BracketError("no undershooting amplitude found", a_lo, a_hi);
        } while (classify(a_lo) == Outcome::overshoot);
    } else {
        int k = 0;
        do {
            a_lo = a_hi;
            a_hi *= 2.0;
            if (++k > 80) throw BracketError("no overshooting amplitude found", a_lo, a_hi);
        } while (classify(a_hi) == Outcome::undershoot);
    }

    for (int k = 0; k < options.max_bisections && a_hi - a_lo > 4e-16 * a_hi; ++k) {
        double const mid = 0.5 * (a_lo + a_hi);
        if (mid <= a_lo || mid >= a_hi) break;
        auto const out = classify(mid);
        if (out == Outcome::overshoot) {
            a_hi = mid;
        } else if (out == Outcome::undershoot) {
            a_lo = mid;
        } else {
            a_lo = a_hi = mid;
        }
    }

    // Sample both bracketing shots; they agree until the unstable mode has grown.
    auto const nodes = grid->r();
    std::vector<double> radii;
    for (double x : nodes) {
        if (x >= options.r0 && x <= options.r_end) radii.push_back(x);
    }
    auto const lo = shoot(params, sigma, a_lo, options, radii);
    auto const hi = shoot(params, sigma, a_hi, options, radii);
    double peak = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (std::isfinite(lo.samples[i])) peak = std::max(peak, std::abs(lo.samples[i]));
    }

    std::vector<double> values(nodes.size(), 0.0);
    double const amp = 0.5 * (a_lo + a_hi);
    std::size_t k = 0;
    double r_trust = options.r0;
    double phi_trust = 0.0;
    bool trusted = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double const x = nodes[i];
        if (x < options.r0) {
            values[i] = series_start(params, sigma, amp, x)[0];
            continue;
        }
        if (trusted && k < radii.size() && radii[k] == x) {
            double const a = lo.samples[k];
            double const b = hi.samples[k];
            ++k;
            if (std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0 &&
                std::abs(a - b) <= 1e-9 * peak) {
                values[i] = 0.5 * (a + b);
                r_trust = x;
                phi_trust = values[i];
                continue;
            }
            trusted = false;
        }
        // exponentially decaying continuation of the linearized equation
        double const decay = std::sqrt(params.omega);
        values[i] = phi_trust * std::pow(r_trust / x, 0.5 * (params.d - 1)) *
                    std::exp(-decay * (x - r_trust));
    }
    values.back() = 0.0;

    RealRadialField profile(grid, std::move(values));
    auto const report = functional_report(profile, params);
    if (details) *details = ShootingResult{amp, r_trust};
    return GroundState{profile,
                       params,
                       report,
                       report.s_omega,
                       normalized_residual(profile, params),
                       sigma,
                       GroundStateMethod::shooting,
                       0,
                       {}};
}

} // namespace isqnls
