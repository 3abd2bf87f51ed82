#include "isqnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "isqnls/errors.hpp"
#include "isqnls/hardy_operator.hpp"

namespace isqnls {

namespace {

inline double focusing_term(double v, double alpha) {
    double const a = std::abs(v);
    if (a == 0.0) return 0.0;
    if (alpha == 2.0) return a * a * v;
    return std::pow(a, alpha) * v;
}

void check_grid(Params const& params, RadialGrid const& grid) {
    if (grid.d() != params.d) {
        throw ParameterError(fmt::format("grid dimension {} does not match d = {}", grid.d(),
                                         params.d));
    }
}

// H¹ norm squared: ‖∇v‖² + ‖v‖².
double h1_sq(FunctionalReport const& r) { return r.kinetic + r.mass; }

double residual_norm(RealRadialField const& g) {
    auto const w = g.grid().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += w[i] * g[i] * g[i];
    return std::sqrt(sum);
}

} // namespace

double PohozaevReport::max() const noexcept {
    return std::max({res_nehari, res_pohozaev, res_ratio_mass, res_ratio_hardy});
}

char const* to_string(GroundStateMethod method) noexcept {
    switch (method) {
    case GroundStateMethod::projected_gradient: return "projected_gradient";
    case GroundStateMethod::shooting: return "shooting";
    }
    return "unknown";
}

RealRadialField elliptic_residual(RealRadialField const& v, Params const& params) {
    auto const& grid = v.grid();
    auto const w = grid.weights();
    auto const n = v.size();
    std::vector<double> av(n);
    apply_hardy(grid, params, v.values(), av);
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        g[i] = av[i] / w[i] + params.omega * v[i] - focusing_term(v[i], params.alpha);
    }
    return RealRadialField(v.grid_ptr(), std::move(g));
}

double normalized_residual(RealRadialField const& v, Params const& params) {
    auto const report = functional_report(v, params);
    double const norm = std::sqrt(h1_sq(report));
    if (norm == 0.0) return 0.0;
    return residual_norm(elliptic_residual(v, params)) / norm;
}

GroundState solve_ground_state(Params const& params, GridPtr const& grid,
                               GroundStateOptions const& options) {
    params.validate();
    check_grid(params, *grid);
    if (!(options.tol > 0.0) || options.max_iter < 1 || !(options.max_step > 0.0)) {
        throw ParameterError("ground-state options need tol > 0, max_iter >= 1, max_step > 0");
    }

    auto const n = grid->size();
    auto const m = n - 1;  // node r_max is Dirichlet
    auto const r = grid->r();
    auto const w = grid->weights();
    double const sigma = params.indicial_exponent();

    // Linear part of S'_ω as a matrix: M = A + ωW on the free nodes.
    SymTridiagonal<double> metric = hardy_matrix(*grid, params);
    metric.diag.resize(m);
    metric.off.resize(m - 1);
    for (std::size_t i = 0; i < m; ++i) metric.diag[i] += params.omega * w[i];

    std::vector<double> diag_scale(m);
    for (std::size_t i = 0; i < m; ++i) {
        diag_scale[i] = 1.0 + params.omega + std::abs(params.c) / (r[i] * r[i]);
    }

    double const sigma_hat = std::max(sigma, 0.0);
    double const r_clip = grid->r_min();
    auto guess = RealRadialField::from_function(grid, [&](double x) {
        return std::exp(-0.5 * x * x) * std::pow(x * x + r_clip * r_clip, -0.5 * sigma_hat);
    });
    guess[n - 1] = 0.0;
    RealRadialField v = nehari_project(guess, params).projected;
    FunctionalReport rep = functional_report(v, params);

    Preconditioner precond = options.preconditioner;
    std::vector<double> history;
    std::vector<double> direction(m), work(m), rhs(m);
    double step = options.max_step;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;

    auto make_result = [&](double residual, int iterations) {
        GroundState gs{v, params, rep, rep.s_omega, residual, sigma,
                       GroundStateMethod::projected_gradient, iterations, history};
        return gs;
    };

    // Newton on the discrete equation A v + ωWv − W|v|^α v = 0, started close
    // to the solution. The descent drives the energy-norm error down but is
    // blind to the part of the residual concentrated at small r, which
    // carries almost no action yet dominates the L² residual norm.
    bool newton_armed = options.newton_switch > 0.0;
    auto newton_polish = [&](int iter, double res) -> std::optional<GroundState> {
        SymTridiagonal<double> jac = metric;
        std::vector<double> gw(m), delta(m);
        RealRadialField x = v;
        double x_res = res;
        for (int k = 0; k < 12; ++k) {
            auto const g = elliptic_residual(x, params);
            for (std::size_t i = 0; i < m; ++i) {
                double const a = std::abs(x[i]);
                jac.diag[i] = metric.diag[i] -
                              (params.alpha + 1.0) * w[i] * (params.alpha == 2.0 ? a * a : std::pow(a, params.alpha));
                gw[i] = w[i] * g[i];
            }
            try {
                solve_tridiagonal<double, double>(jac, gw, delta);
            } catch (NumericalError const&) {
                return std::nullopt;
            }
            std::vector<double> next(n, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                next[i] = x[i] - delta[i];
                if (!(next[i] > 0.0)) return std::nullopt;
            }
            RealRadialField candidate = nehari_project(RealRadialField(grid, std::move(next)), params).projected;
            double const c_res = normalized_residual(candidate, params);
            history.push_back(c_res);
            if (!(c_res < x_res)) break;
            x = std::move(candidate);
            x_res = c_res;
            if (x_res <= options.tol) {
                v = x;
                rep = functional_report(v, params);
                return make_result(x_res, iter + k + 1);
            }
        }
        return std::nullopt;
    };

    for (int iter = 0; iter < options.max_iter; ++iter) {
        auto const g = elliptic_residual(v, params);
        double const res = residual_norm(g) / std::sqrt(h1_sq(rep));
        history.push_back(res);
        if (!std::isfinite(res)) {
            throw ConvergenceError("ground-state residual is not finite",
                                   {v.values().begin(), v.values().end()}, history);
        }
        if (res <= options.tol) return make_result(res, iter);
        if (newton_armed && res <= options.newton_switch) {
            newton_armed = false;
            if (auto polished = newton_polish(iter, res)) return *polished;
        }

        if (res < 0.999 * best) {
            best = res;
            since_best = 0;
        } else if (++since_best > options.plateau_window) {
            if (precond != Preconditioner::identity) {
                if (auto polished = newton_polish(iter, res)) return *polished;
                throw ConvergenceError(
                    fmt::format("ground-state residual stagnated at {:.3e} (tol {:.1e}); the "
                                "round-off floor of the grid is above the tolerance",
                                best, options.tol),
                    {v.values().begin(), v.values().end()}, history);
            }
            precond = Preconditioner::diagonal;
            since_best = 0;
            step = options.max_step;
        }

        switch (precond) {
        case Preconditioner::operator_:
            // M^{-1} W g = v − M^{-1} W |v|^α v
            for (std::size_t i = 0; i < m; ++i) rhs[i] = w[i] * focusing_term(v[i], params.alpha);
            solve_tridiagonal<double, double>(metric, rhs, work);
            for (std::size_t i = 0; i < m; ++i) direction[i] = v[i] - work[i];
            break;
        case Preconditioner::diagonal:
            for (std::size_t i = 0; i < m; ++i) direction[i] = g[i] / diag_scale[i];
            break;
        case Preconditioner::identity:
            for (std::size_t i = 0; i < m; ++i) direction[i] = g[i];
            break;
        }

        // Backtracking on S_ω after re-projection; round-off slack lets the
        // iteration finish once the decrease drops below machine precision.
        double const s_old = rep.s_omega;
        double const slack = 1e-13 * std::abs(s_old);
        bool accepted = false;
        step = std::min(2.0 * step, options.max_step);
        while (step > 1e-300) {
            std::vector<double> trial(n, 0.0);
            for (std::size_t i = 0; i < m; ++i) trial[i] = std::max(v[i] - step * direction[i], 0.0);
            RealRadialField candidate(grid, std::move(trial));
            auto const t_rep = functional_report(candidate, params);
            if (t_rep.lp_alpha2 > 0.0 && t_rep.h_omega > 0.0) {
                double const mu = nehari_factor(t_rep.h_omega, t_rep.lp_alpha2, params.alpha);
                for (auto& x : candidate.values()) x *= mu;
                auto const p_rep = functional_report(candidate, params);
                if (p_rep.s_omega <= s_old + slack) {
                    v = std::move(candidate);
                    rep = p_rep;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            throw ConvergenceError(
                fmt::format("line search stalled at residual {:.3e} after {} iterations", res, iter),
                {v.values().begin(), v.values().end()}, history);
        }
        if (!(rep.lp_alpha2 > 0.0) || rep.mass <= 0.0) {
            throw DegenerateMinimizerError("ground-state iteration collapsed to the zero field");
        }
    }
    throw ConvergenceError(fmt::format("ground state not converged after {} iterations "
                                       "(residual {:.3e})",
                                       options.max_iter, history.empty() ? 0.0 : history.back()),
                           {v.values().begin(), v.values().end()}, history);
}

PohozaevReport pohozaev_report(FunctionalReport const& rep, Params const& params) {
    double const d = params.d;
    double const alpha = params.alpha;
    double const om = params.omega;
    PohozaevReport p;
    p.res_nehari = std::abs(rep.k_omega) / std::abs(rep.h_omega);
    double const t1 = (1.0 - 0.5 * d) * rep.hardy_sq;
    double const t2 = -0.5 * d * om * rep.mass;
    double const t3 = d / (alpha + 2.0) * rep.lp_alpha2;
    p.res_pohozaev = std::abs(t1 + t2 + t3) / (std::abs(t1) + std::abs(t2) + std::abs(t3));
    double const lhs = om * rep.mass;
    double const coef_lp = (4.0 - (d - 2.0) * alpha) / (2.0 * (alpha + 2.0));
    double const coef_h = (4.0 - (d - 2.0) * alpha) / (d * alpha);
    p.res_ratio_mass = std::abs(lhs - coef_lp * rep.lp_alpha2) / std::abs(lhs);
    p.res_ratio_hardy = std::abs(lhs - coef_h * rep.hardy_sq) / std::abs(lhs);
    return p;
}

PohozaevReport pohozaev_report(GroundState const& gs) { return pohozaev_report(gs.report, gs.params); }

RealRadialField scaled_profile(GroundState const& gs, double lambda) {
    return scale_field(gs.profile, lambda, gs.sigma);
}

ScalingCurve scaling_curve(GroundState const& gs, std::span<double const> lambdas) {
    ScalingCurve curve;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double const lam = lambdas[i];
        if (!(lam > 0.0)) {
            throw ParameterError(fmt::format("scaling curve needs lambda > 0 (got {})", lam));
        }
        if (i > 0 && !(lam > lambdas[i - 1])) {
            throw ParameterError("scaling curve lambdas must be strictly increasing");
        }
        auto const rep =
            lam == 1.0 ? gs.report : functional_report(scaled_profile(gs, lam), gs.params);
        curve.lambdas.push_back(lam);
        curve.s_values.push_back(rep.s_omega);
        curve.q_values.push_back(rep.q);
        curve.k_values.push_back(rep.k_omega);
    }
    return curve;
}

bool in_blowup_set(FunctionalReport const& v, GroundState const& gs) {
    double const margin = 1e-10 * std::abs(gs.report.h_omega);
    return v.s_omega < gs.d_rad_omega - margin && v.q < -margin;
}

bool in_blowup_set(RealRadialField const& v, GroundState const& gs) {
    return in_blowup_set(functional_report(v, gs.params), gs);
}

KeyEstimate key_estimate_check(FunctionalReport const& v, GroundState const& gs) {
    if (!in_blowup_set(v, gs)) {
        throw PreconditionError("key estimate requires a field in the blow-up set");
    }
    double const lhs = v.q;
    double const rhs = 2.0 * (v.s_omega - gs.d_rad_omega);
    return {lhs, rhs, lhs <= rhs + 1e-8 * std::abs(rhs)};
}

KeyEstimate key_estimate_check(RealRadialField const& v, GroundState const& gs) {
    return key_estimate_check(functional_report(v, gs.params), gs);
}

} // namespace isqnls
