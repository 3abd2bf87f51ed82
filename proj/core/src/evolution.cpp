#include "isqnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "isqnls/hardy_operator.hpp"

namespace isqnls {

void EvolutionState::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
    if (!u.all_finite()) throw NumericalError("evolution state is not finite");
}

void EvolutionControls::validate() const {
    if (!(t_max > 0.0) || !(dt0 > 0.0) || !(sample_every > 0.0) || !(dt_min > 0.0)) {
        throw ParameterError("evolution controls need t_max, dt0, sample_every, dt_min > 0");
    }
    if (dt_min > dt0) throw ParameterError("dt_min exceeds dt0");
    if (!(gradient_factor > 1.0)) throw ParameterError("gradient_factor must exceed 1");
    if (!(energy_tol > 0.0) || !(growth_tol > 0.0)) {
        throw ParameterError("adaptivity tolerances must be positive");
    }
    if (grow_after < 1 || monotone_window < 2) {
        throw ParameterError("grow_after must be >= 1 and monotone_window >= 2");
    }
    for (double r : virial_radii) {
        if (!(r > 1.0)) throw ParameterError(fmt::format("virial radius must exceed 1, got {}", r));
    }
}

ComplexRadialField make_initial_data(GroundState const& gs, double lambda0) {
    return make_initial_data(gs, lambda0, gs.profile.grid_ptr());
}

ComplexRadialField make_initial_data(GroundState const& gs, double lambda0, GridPtr const& target) {
    if (!(lambda0 > 0.0)) {
        throw ParameterError(fmt::format("lambda0 must be positive, got {}", lambda0));
    }
    auto scaled = scale_field(gs.profile, lambda0, gs.sigma);
    if (target != gs.profile.grid_ptr()) scaled = resample(scaled, target, gs.sigma);
    std::vector<std::complex<double>> values(scaled.values().begin(), scaled.values().end());
    values.back() = 0.0;
    return ComplexRadialField(target, std::move(values));
}

StrangStepper::StrangStepper(Params const& params, GridPtr grid)
    : params_(params), grid_(std::move(grid)), hardy_(hardy_matrix(*grid_, params_)) {
    params_.validate();
    auto const m = grid_->size() - 1;
    hardy_.diag.resize(m);
    hardy_.off.resize(m - 1);
    lhs_.diag.resize(m);
    lhs_.off.resize(m - 1);
    rhs_.resize(m);
}

void StrangStepper::phase(std::span<std::complex<double>> u, double dt) const {
    double const half = 0.5 * params_.alpha;
    for (auto& z : u) {
        double const a2 = std::norm(z);
        if (a2 == 0.0) continue;
        double const angle = dt * (params_.alpha == 2.0 ? a2 : std::pow(a2, half));
        z *= std::polar(1.0, angle);
    }
}

bool StrangStepper::advance(std::span<std::complex<double>> u, double dt) {
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
    auto const m = rhs_.size();
    if (u.size() != m + 1) throw NumericalError("field does not match the stepper grid");
    auto const w = grid_->weights();
    std::complex<double> const half_step(0.0, 0.5 * dt);

    phase(u, 0.5 * dt);

    if (dt != lhs_dt_) {
        for (std::size_t i = 0; i < m; ++i) lhs_.diag[i] = w[i] + half_step * hardy_.diag[i];
        for (std::size_t i = 0; i + 1 < m; ++i) lhs_.off[i] = half_step * hardy_.off[i];
        lhs_dt_ = dt;
    }
    apply_hardy(*grid_, params_, std::span<std::complex<double> const>(u.first(m)), rhs_);
    for (std::size_t i = 0; i < m; ++i) rhs_[i] = w[i] * u[i] - half_step * rhs_[i];
    solve_tridiagonal<std::complex<double>, std::complex<double>>(lhs_, rhs_, u.first(m));
    u[m] = 0.0;

    phase(u, 0.5 * dt);
    return true;
}

double averaged_nonlinearity(double a, double b, double alpha) {
    double const half = 0.5 * alpha;
    double const mean = 0.5 * (a + b);
    if (mean == 0.0) return 0.0;
    double const gap = 0.5 * (a - b);
    double const ratio = gap / mean;
    if (std::abs(ratio) < 1e-3) {
        // divided difference expanded about the mean; the next term is O(ratio⁴)
        return std::pow(mean, half) * (1.0 + half * (half - 1.0) * ratio * ratio / 6.0);
    }
    double const p = half + 1.0;
    return (std::pow(a, p) - std::pow(b, p)) / (p * (a - b));
}

ConservativeStepper::ConservativeStepper(Params const& params, GridPtr grid, int max_iter)
    : params_(params), grid_(std::move(grid)), hardy_(hardy_matrix(*grid_, params_)),
      max_iter_(max_iter) {
    params_.validate();
    auto const m = grid_->size() - 1;
    hardy_.diag.resize(m);
    hardy_.off.resize(m - 1);
    lhs_.diag.resize(m);
    lhs_.off.resize(m - 1);
    rhs_.resize(m);
    mid_.resize(m);
    next_.resize(m);
    coupling_.resize(m);
}

bool ConservativeStepper::advance(std::span<std::complex<double>> u, double dt) {
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
    auto const m = rhs_.size();
    if (u.size() != m + 1) throw NumericalError("field does not match the stepper grid");
    auto const w = grid_->weights();
    std::complex<double> const half_step(0.0, 0.5 * dt);

    for (std::size_t i = 0; i < m; ++i) {
        rhs_[i] = w[i] * u[i];
        next_[i] = u[i];
    }
    for (std::size_t i = 0; i + 1 < m; ++i) lhs_.off[i] = half_step * hardy_.off[i];

    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) mass += w[i] * std::norm(u[i]);
    if (mass == 0.0) return true;

    for (int it = 1; it <= max_iter_; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            double const g = averaged_nonlinearity(std::norm(next_[i]), std::norm(u[i]), params_.alpha);
            lhs_.diag[i] = w[i] + half_step * (hardy_.diag[i] - w[i] * g);
        }
        solve_tridiagonal<std::complex<double>, std::complex<double>>(lhs_, rhs_, mid_);
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            auto const fresh = 2.0 * mid_[i] - u[i];
            change += w[i] * std::norm(fresh - next_[i]);
            next_[i] = fresh;
        }
        if (!std::isfinite(change)) break;
        if (change <= 1e-28 * mass) {
            last_iterations_ = it;
            std::copy(next_.begin(), next_.end(), u.begin());
            u[m] = 0.0;
            return true;
        }
    }
    last_iterations_ = max_iter_;
    return false;
}

std::unique_ptr<Stepper> make_stepper(Scheme scheme, Params const& params, GridPtr grid) {
    if (scheme == Scheme::strang) return std::make_unique<StrangStepper>(params, std::move(grid));
    return std::make_unique<ConservativeStepper>(params, std::move(grid));
}

EvolutionState step_strang(EvolutionState const& state, Params const& params) {
    state.validate();
    StrangStepper stepper(params, state.u.grid_ptr());
    EvolutionState next = state;
    stepper.advance(next.u.values(), state.dt);
    next.t = state.t + state.dt;
    return next;
}

namespace {

TrajectorySample make_sample(EvolutionState const& s, FunctionalReport const& rep,
                             std::vector<double> const& radii, bool on_grid) {
    TrajectorySample out;
    out.t = s.t;
    out.mass = rep.mass;
    out.energy = rep.energy;
    out.hardy_sq = rep.hardy_sq;
    out.lp_alpha2 = rep.lp_alpha2;
    out.q = rep.q;
    out.grad_norm = rep.grad_norm();
    out.dt = s.dt;
    out.on_grid = on_grid;
    out.virial.reserve(radii.size());
    for (double r : radii) out.virial.push_back(virial_potential(s.u, r));
    return out;
}

} // namespace

Trajectory simulate(ComplexRadialField const& u0, Params const& params,
                    EvolutionControls const& controls, SampleObserver const& observer) {
    controls.validate();
    params.validate();
    if (!u0.all_finite()) throw ParameterError("initial data is not finite");

    auto stepper = make_stepper(controls.scheme, params, u0.grid_ptr());
    EvolutionState state{u0, 0.0, controls.dt0};
    state.u[state.u.size() - 1] = 0.0;

    Trajectory traj;
    traj.virial_radii = controls.virial_radii;

    FunctionalReport rep = functional_report(state.u, params);
    double const grad0 = rep.grad_norm();
    auto record = [&](bool on_grid) {
        traj.samples.push_back(make_sample(state, rep, controls.virial_radii, on_grid));
        if (observer) observer(state, traj.samples.back());
    };
    record(true);

    auto const n_samples = static_cast<long>(std::ceil(controls.t_max / controls.sample_every - 1e-9));
    long next_index = 1;
    auto sample_time = [&](long k) {
        return std::min(controls.t_max, static_cast<double>(k) * controls.sample_every);
    };

    std::vector<std::complex<double>> trial(state.u.size());
    int streak = 0;
    while (next_index <= n_samples) {
        double const target = sample_time(next_index);
        if (target - state.t <= 1e-12 * std::max(1.0, target)) {
            state.t = target;  // absorb round-off in the accumulated time
            record(true);
            ++next_index;
            continue;
        }
        double const h = std::min(state.dt, target - state.t);
        bool const lands = h >= target - state.t;

        std::copy(state.u.values().begin(), state.u.values().end(), trial.begin());
        bool const solved = stepper->advance(trial, h);
        bool accept = false;
        FunctionalReport next_rep;
        if (solved) {
            bool const finite = std::all_of(trial.begin(), trial.end(), [](auto z) {
                return std::isfinite(z.real()) && std::isfinite(z.imag());
            });
            if (!finite) {
                throw EvolutionAborted(
                    fmt::format("non-finite field at t = {:.17g} with dt = {:.3e}, last |grad u| = {:.6e}",
                                state.t, h, rep.grad_norm()),
                    std::move(traj));
            }
            next_rep = functional_report(ComplexRadialField(state.u.grid_ptr(), trial), params);
            double const drift = std::abs(next_rep.energy - rep.energy);
            double const scale = std::max(rep.energy_scale(params), next_rep.energy_scale(params));
            bool const too_rough = drift > controls.energy_tol * scale;
            bool const too_fast = next_rep.grad_norm() > (1.0 + controls.growth_tol) * rep.grad_norm();
            accept = !too_rough && !too_fast;
        }
        if (!accept) {
            ++traj.rejected_steps;
            streak = 0;
            state.dt = 0.5 * std::min(state.dt, h);
            if (state.dt < controls.dt_min) {
                traj.stop = StopReason::dt_underflow;
                if (traj.samples.back().t < state.t) record(false);
                break;
            }
            continue;
        }

        ++traj.accepted_steps;
        std::copy(trial.begin(), trial.end(), state.u.values().begin());
        state.t = lands ? target : state.t + h;
        rep = next_rep;
        if (++streak >= controls.grow_after) {
            state.dt = std::min(2.0 * state.dt, controls.dt0);
            streak = 0;
        }

        if (lands) {
            record(true);
            ++next_index;
        }
        if (rep.grad_norm() > controls.gradient_factor * grad0) {
            traj.stop = StopReason::gradient_threshold;
            if (!lands) record(false);
            break;
        }
    }

    traj.verdict = detect_blowup(traj, controls);
    return traj;
}

BlowupVerdict detect_blowup(Trajectory const& traj, EvolutionControls const& controls) {
    BlowupVerdict v;
    if (traj.samples.empty()) return v;
    double const grad0 = traj.samples.front().grad_norm;
    double const threshold = controls.gradient_factor * grad0;
    for (auto const& s : traj.samples) {
        if (s.grad_norm > threshold) {
            v.blew_up = true;
            v.t_detect = s.t;
            v.reason = BlowupReason::gradient_threshold;
            return v;
        }
    }
    if (traj.stop == StopReason::dt_underflow) {
        auto const window = static_cast<std::size_t>(controls.monotone_window);
        auto const& s = traj.samples;
        if (s.size() >= window) {
            bool rising = true;
            for (std::size_t i = s.size() - window + 1; i < s.size(); ++i) {
                rising = rising && s[i].grad_norm > s[i - 1].grad_norm;
            }
            if (rising) {
                v.blew_up = true;
                v.t_detect = s.back().t;
                v.reason = BlowupReason::dt_underflow;
            }
        }
    }
    return v;
}

VirialSeries virial_series(Trajectory const& traj, std::size_t radius_index) {
    if (radius_index >= traj.virial_radii.size()) {
        throw ParameterError("virial radius index out of range");
    }
    VirialSeries out;
    out.radius = traj.virial_radii[radius_index];
    for (auto const& s : traj.samples) {
        if (!s.on_grid) continue;
        out.times.push_back(s.t);
        out.v_values.push_back(s.virial[radius_index]);
        out.q_values.push_back(s.q);
    }
    // the final grid point may be clipped to t_max
    if (out.times.size() >= 3) {
        auto const k = out.times.size();
        double const h0 = out.times[k - 2] - out.times[k - 3];
        double const h1 = out.times[k - 1] - out.times[k - 2];
        if (std::abs(h1 - h0) > 0.01 * h0) {
            out.times.pop_back();
            out.v_values.pop_back();
            out.q_values.pop_back();
        }
    }
    return out;
}

LocalizationCheck localization_check(Trajectory const& traj, Params const& params,
                                     std::vector<double> const& fractions) {
    if (traj.virial_radii.empty()) throw ParameterError("trajectory carries no virial radii");
    std::vector<std::size_t> order(traj.virial_radii.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return traj.virial_radii[a] < traj.virial_radii[b]; });
    std::vector<VirialSeries> series;
    for (auto k : order) {
        series.push_back(virial_series(traj, k));
        second_derivative_series(series.back());
    }
    std::vector<TrajectorySample const*> grid_samples;
    for (auto const& s : traj.samples) {
        if (s.on_grid) grid_samples.push_back(&s);
    }
    auto const interior = series.front().vpp.size();  // vpp[j] belongs to sample j + 1
    LocalizationCheck out;
    out.monotone = true;
    for (double f : fractions) {
        if (!(f > 0.0 && f < 1.0)) throw ParameterError("instant fractions must lie in (0, 1)");
        auto const j = std::min(interior - 1, static_cast<std::size_t>(f * static_cast<double>(interior)));
        auto const& sample = *grid_samples[j + 1];
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < series.size(); ++k) {
            LocalizationPoint p;
            p.t = sample.t;
            p.radius = series[k].radius;
            p.deviation = std::abs(series[k].vpp[j] - 8.0 * sample.q);
            p.err_scale = virial_rhs(sample.hardy_sq, sample.lp_alpha2, params, p.radius).err_scale;
            out.fitted_constant = std::max(out.fitted_constant, p.deviation / p.err_scale);
            out.monotone = out.monotone && p.deviation < previous;
            previous = p.deviation;
            out.points.push_back(p);
        }
    }
    return out;
}

char const* to_string(BlowupReason reason) noexcept {
    switch (reason) {
    case BlowupReason::gradient_threshold: return "gradient_threshold";
    case BlowupReason::dt_underflow: return "dt_underflow";
    case BlowupReason::horizon_reached: return "horizon_reached";
    }
    return "unknown";
}

char const* to_string(Scheme scheme) noexcept {
    switch (scheme) {
    case Scheme::conservative: return "conservative";
    case Scheme::strang: return "strang";
    }
    return "unknown";
}

char const* to_string(StopReason reason) noexcept {
    switch (reason) {
    case StopReason::horizon: return "horizon";
    case StopReason::gradient_threshold: return "gradient_threshold";
    case StopReason::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

} // namespace isqnls
