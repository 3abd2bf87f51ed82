#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "isqnls/errors.hpp"
#include "isqnls/functionals.hpp"
#include "isqnls/ground_state.hpp"
#include "isqnls/tridiagonal.hpp"
#include "isqnls/virial.hpp"

namespace isqnls {

struct EvolutionState {
    ComplexRadialField u;
    double t = 0.0;
    double dt = 1e-3;

    void validate() const;
};

enum class BlowupReason { gradient_threshold, dt_underflow, horizon_reached };

struct BlowupVerdict {
    bool blew_up = false;
    std::optional<double> t_detect;
    BlowupReason reason = BlowupReason::horizon_reached;
    std::optional<double> glassey_bound;
};

/// Why the step loop ended; the verdict interprets it.
enum class StopReason { horizon, gradient_threshold, dt_underflow };

struct TrajectorySample {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double hardy_sq = 0.0;
    double lp_alpha2 = 0.0;
    double q = 0.0;
    double grad_norm = 0.0;
    double dt = 0.0;           ///< step size in force when the sample was taken
    bool on_grid = true;       ///< false only for the terminal sample at an early stop
    std::vector<double> virial;  ///< V_R for each configured radius
};

struct Trajectory {
    std::vector<double> virial_radii;
    std::vector<TrajectorySample> samples;
    StopReason stop = StopReason::horizon;
    BlowupVerdict verdict;
    long accepted_steps = 0;
    long rejected_steps = 0;
};

/// Time integrator used by simulate.
enum class Scheme {
    /// Crank–Nicolson with the averaged nonlinearity (F(|u⁺|²) − F(|u|²))/(|u⁺|² − |u|²);
    /// conserves discrete mass and energy, solved by fixed-point iteration.
    conservative,
    /// Strang splitting of phase rotation and linear Crank–Nicolson.
    strang
};

struct EvolutionControls {
    Scheme scheme = Scheme::conservative;
    double t_max = 1.0;
    double dt0 = 1e-3;
    double sample_every = 1e-2;
    /// Stop once ‖∇u‖ exceeds this multiple of its initial value.
    double gradient_factor = 1e3;
    double dt_min = 1e-10;
    /// Per-step |ΔE| allowed, relative to the energy scale of the state.
    double energy_tol = 1e-7;
    /// Largest relative growth of ‖∇u‖ in one step.
    double growth_tol = 0.2;
    int grow_after = 50;
    /// Samples over which ‖∇u‖ must rise for a dt underflow to count as blow-up.
    int monotone_window = 10;
    std::vector<double> virial_radii;

    void validate() const;
};

/// Thrown when the state stops being finite; carries everything recorded so far.
class EvolutionAborted : public NumericalError {
public:
    EvolutionAborted(std::string const& what, Trajectory partial)
        : NumericalError(what), partial_(std::move(partial)) {}
    Trajectory const& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

/// φ^{λ₀} as a complex field with a zero Dirichlet node at r_max. With a
/// target grid the dilated profile is resampled onto it, continuing φ below
/// its r_min by the origin power law.
ComplexRadialField make_initial_data(GroundState const& gs, double lambda0);
ComplexRadialField make_initial_data(GroundState const& gs, double lambda0, GridPtr const& target);

/// One step of a time integrator, in place. Returns false when the step
/// could not be completed at this dt (u is then unspecified).
class Stepper {
public:
    virtual ~Stepper() = default;
    virtual bool advance(std::span<std::complex<double>> u, double dt) = 0;
};

std::unique_ptr<Stepper> make_stepper(Scheme scheme, Params const& params, GridPtr grid);

/// Strang splitting: half nonlinear phase, Crank–Nicolson for the Hardy
/// operator, half nonlinear phase. The linear stage is the Cayley transform
/// of the discrete operator, so the discrete mass is conserved exactly up to
/// round-off and |u| is untouched by the phase stages.
class StrangStepper final : public Stepper {
public:
    StrangStepper(Params const& params, GridPtr grid);

    bool advance(std::span<std::complex<double>> u, double dt) override;

    Params const& params() const noexcept { return params_; }
    GridPtr const& grid() const noexcept { return grid_; }

private:
    void phase(std::span<std::complex<double>> u, double dt) const;

    Params params_;
    GridPtr grid_;
    SymTridiagonal<double> hardy_;  // free nodes only
    SymTridiagonal<std::complex<double>> lhs_;
    double lhs_dt_ = 0.0;
    std::vector<std::complex<double>> rhs_;
};

/// Energy-conserving Crank–Nicolson. With z the midpoint (u⁺ + u)/2 each
/// step solves (W + i dt/2 (A − W N)) z = W u, N the averaged nonlinearity
/// at (u, u⁺), iterating on N until z settles to round-off.
class ConservativeStepper final : public Stepper {
public:
    ConservativeStepper(Params const& params, GridPtr grid, int max_iter = 60);

    bool advance(std::span<std::complex<double>> u, double dt) override;
    int last_iterations() const noexcept { return last_iterations_; }

private:
    Params params_;
    GridPtr grid_;
    SymTridiagonal<double> hardy_;
    SymTridiagonal<std::complex<double>> lhs_;
    std::vector<std::complex<double>> rhs_, mid_, next_;
    std::vector<double> coupling_;
    int max_iter_;
    int last_iterations_ = 0;
};

/// Averaged focusing coefficient (F(a) − F(b))/(a − b) for F(s) = 2 s^{(α+2)/2}/(α+2).
double averaged_nonlinearity(double a, double b, double alpha);

/// One Strang step of size state.dt.
EvolutionState step_strang(EvolutionState const& state, Params const& params);

using SampleObserver = std::function<void(EvolutionState const&, TrajectorySample const&)>;

/// Adaptive integration from t = 0 with the configured scheme. Samples land exactly on multiples
/// of sample_every; an early stop appends one off-grid terminal sample.
Trajectory simulate(ComplexRadialField const& u0, Params const& params,
                    EvolutionControls const& controls, SampleObserver const& observer = {});

BlowupVerdict detect_blowup(Trajectory const& traj, EvolutionControls const& controls);

/// V_R series over the on-grid samples; `radius_index` selects the radius.
VirialSeries virial_series(Trajectory const& traj, std::size_t radius_index);

struct LocalizationPoint {
    double t = 0.0;
    double radius = 0.0;
    double deviation = 0.0;  ///< |FD V''_R(t) − 8Q(u(t))|
    double err_scale = 0.0;
};

/// Compares the finite-difference V'' with 8Q at fixed instants for every
/// configured radius.
struct LocalizationCheck {
    std::vector<LocalizationPoint> points;  ///< time-major, radii ascending
    double fitted_constant = 0.0;           ///< max deviation/err_scale over all points
    bool monotone = false;                  ///< deviation strictly decreasing in R at every instant
};

/// Instants are taken at the given fractions of the sampled interval (on-grid
/// samples only, interior so the centered stencil exists).
LocalizationCheck localization_check(Trajectory const& traj, Params const& params,
                                     std::vector<double> const& fractions = {0.25, 0.5, 0.75});

char const* to_string(BlowupReason reason) noexcept;
char const* to_string(StopReason reason) noexcept;
char const* to_string(Scheme scheme) noexcept;

} // namespace isqnls
