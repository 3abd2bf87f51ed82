#include "isqnls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "isqnls/errors.hpp"

namespace isqnls {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
    if (name == "groundstate") return ExperimentKind::groundstate;
    if (name == "scaling") return ExperimentKind::scaling;
    if (name == "evolve") return ExperimentKind::evolve;
    if (name == "instability") return ExperimentKind::instability;
    return std::nullopt;
}

char const* to_string(ExperimentKind kind) noexcept {
    switch (kind) {
    case ExperimentKind::groundstate: return "groundstate";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::evolve: return "evolve";
    case ExperimentKind::instability: return "instability";
    }
    return "unknown";
}

std::vector<double> default_scaling_lambdas() { return {0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 2.0}; }

GroundState compute_ground_state(Config const& config) {
    auto const grid = config.grid.build(config.params.d);
    if (config.ground_state.method == GroundStateMethod::shooting) {
        ShootingOptions opt;
        opt.r0 = config.grid.r_min;
        opt.r_end = std::min(opt.r_end, config.grid.r_max);
        return shoot_ground_state(config.params, grid, opt);
    }
    return solve_ground_state(config.params, grid, config.solver_options());
}

json to_json(Params const& p) {
    return json{{"d", p.d}, {"c", p.c}, {"alpha", p.alpha}, {"omega", p.omega}};
}

namespace {

json report_json(FunctionalReport const& r) {
    return json{{"mass", r.mass},         {"kinetic", r.kinetic},   {"potential", r.potential},
                {"hardy_sq", r.hardy_sq}, {"lp_alpha2", r.lp_alpha2}, {"energy", r.energy},
                {"h_omega", r.h_omega},   {"s_omega", r.s_omega},   {"k_omega", r.k_omega},
                {"q", r.q}};
}

} // namespace

json to_json(GroundState const& gs) {
    return json{{"params", to_json(gs.params)},
                {"method", to_string(gs.method)},
                {"d_rad_omega", gs.d_rad_omega},
                {"residual", gs.residual},
                {"sigma", gs.sigma},
                {"iterations", gs.iterations},
                {"profile_at_r_min", gs.profile[0]},
                {"report", report_json(gs.report)}};
}

json to_json(PohozaevReport const& r) {
    return json{{"res_nehari", r.res_nehari},
                {"res_pohozaev", r.res_pohozaev},
                {"res_ratio_mass", r.res_ratio_mass},
                {"res_ratio_hardy", r.res_ratio_hardy}};
}

json to_json(BlowupVerdict const& v) {
    json out{{"blew_up", v.blew_up}, {"reason", to_string(v.reason)}};
    out["t_detect"] = v.t_detect ? json(*v.t_detect) : json(nullptr);
    out["glassey_bound"] = v.glassey_bound ? json(*v.glassey_bound) : json(nullptr);
    return out;
}

void write_json(fs::path const& path, json const& value) {
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << value.dump(2) << '\n';
}

void write_profile_csv(fs::path const& path, RealRadialField const& profile) {
    auto out = fmt::output_file(path.string());
    out.print("r,phi\n");
    auto const r = profile.grid().r();
    for (std::size_t i = 0; i < profile.size(); ++i) out.print("{:.17g},{:.17g}\n", r[i], profile[i]);
}

void write_scaling_csv(fs::path const& path, ScalingCurve const& curve) {
    auto out = fmt::output_file(path.string());
    out.print("lambda,s_omega,q,k_omega\n");
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        out.print("{:.17g},{:.17g},{:.17g},{:.17g}\n", curve.lambdas[i], curve.s_values[i],
                  curve.q_values[i], curve.k_values[i]);
    }
}

void write_trajectory_csv(fs::path const& path, Trajectory const& traj) {
    auto out = fmt::output_file(path.string());
    out.print("t,mass,energy,hardy_sq,lp_alpha2,q,grad_norm");
    for (double r : traj.virial_radii) out.print(",V_{:g}", r);
    out.print("\n");
    for (auto const& s : traj.samples) {
        out.print("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", s.t, s.mass, s.energy,
                  s.hardy_sq, s.lp_alpha2, s.q, s.grad_norm);
        for (double v : s.virial) out.print(",{:.17g}", v);
        out.print("\n");
    }
}

namespace {

json conservation_json(Trajectory const& traj) {
    auto const& first = traj.samples.front();
    double mass_drift = 0.0;
    double energy_drift = 0.0;
    for (auto const& s : traj.samples) {
        mass_drift = std::max(mass_drift, std::abs(s.mass - first.mass) / first.mass);
        energy_drift = std::max(energy_drift, std::abs(s.energy - first.energy) /
                                                  std::max(std::abs(first.energy), 1e-300));
    }
    return json{{"max_mass_drift", mass_drift},
                {"max_energy_drift", energy_drift},
                {"accepted_steps", traj.accepted_steps},
                {"rejected_steps", traj.rejected_steps},
                {"stop", to_string(traj.stop)},
                {"t_end", traj.samples.back().t},
                {"samples", traj.samples.size()}};
}

void run_groundstate(Config const& config, fs::path const& dir, ExperimentResult& res,
                     std::string& stage) {
    stage = "ground_state";
    auto const gs = compute_ground_state(config);
    stage = "pohozaev";
    auto const pz = pohozaev_report(gs);
    res.summary["ground_state"] = to_json(gs);
    res.summary["pohozaev"] = to_json(pz);
    stage = "write";
    write_profile_csv(dir / "profile.csv", gs.profile);
    res.artifacts.push_back(dir / "profile.csv");
}

void run_scaling(Config const& config, fs::path const& dir, ExperimentResult& res,
                 std::string& stage) {
    stage = "ground_state";
    auto const gs = compute_ground_state(config);
    res.summary["ground_state"] = to_json(gs);
    stage = "scaling_curve";
    auto const lambdas = default_scaling_lambdas();
    auto const curve = scaling_curve(gs, lambdas);
    auto const peak = std::max_element(curve.s_values.begin(), curve.s_values.end());
    double const argmax = curve.lambdas[static_cast<std::size_t>(peak - curve.s_values.begin())];
    bool signs = true;
    json key = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double const l = lambdas[i];
        if (l < 1.0) signs = signs && curve.q_values[i] > 0.0;
        if (l > 1.0) {
            signs = signs && curve.q_values[i] < 0.0;
            auto const rep = functional_report(scaled_profile(gs, l), gs.params);
            auto const ke = key_estimate_check(rep, gs);
            key.push_back(json{{"lambda", l}, {"lhs", ke.lhs}, {"rhs", ke.rhs}, {"holds", ke.holds}});
        }
    }
    res.summary["argmax_lambda"] = argmax;
    res.summary["q_sign_pattern"] = signs;
    res.summary["key_estimate"] = key;
    stage = "write";
    write_scaling_csv(dir / "scaling.csv", curve);
    res.artifacts.push_back(dir / "scaling.csv");
}

void run_evolve(Config const& config, fs::path const& dir, ExperimentResult& res,
                std::string& stage) {
    stage = "ground_state";
    auto const gs = compute_ground_state(config);
    res.summary["ground_state"] = to_json(gs);
    stage = "initial_data";
    auto const u0 = make_initial_data(gs, config.evolve.lambda0, config.evolution_grid());
    auto const rep0 = functional_report(u0, config.params);
    res.summary["initial"] = json{{"lambda0", config.evolve.lambda0},
                                  {"s_omega", rep0.s_omega},
                                  {"q", rep0.q},
                                  {"in_blowup_set", in_blowup_set(rep0, gs)}};
    stage = "simulate";
    Trajectory traj;
    try {
        traj = simulate(u0, config.params, config.evolve.controls());
    } catch (EvolutionAborted const& e) {
        write_trajectory_csv(dir / "trajectory.csv", e.partial());
        res.artifacts.push_back(dir / "trajectory.csv");
        throw;
    }
    res.summary["verdict"] = to_json(traj.verdict);
    res.summary["conservation"] = conservation_json(traj);
    stage = "write";
    write_trajectory_csv(dir / "trajectory.csv", traj);
    res.artifacts.push_back(dir / "trajectory.csv");
}

void run_instability(Config const& config, fs::path const& dir, ExperimentResult& res,
                     std::string& stage) {
    stage = "ground_state";
    auto const gs = compute_ground_state(config);
    res.summary["ground_state"] = to_json(gs);

    stage = "blowup_set";
    auto const u0 = make_initial_data(gs, config.evolve.lambda0, config.evolution_grid());
    auto const rep0 = functional_report(u0, config.params);
    bool const inside = in_blowup_set(rep0, gs);
    double const a = q_gap(gs.d_rad_omega, rep0.s_omega);
    res.summary["initial"] = json{{"lambda0", config.evolve.lambda0}, {"s_omega", rep0.s_omega},
                                  {"q", rep0.q},  {"energy", rep0.energy},
                                  {"in_blowup_set", inside}, {"a", a},
                                  {"case_threshold", case_threshold(config.params, rep0.energy)}};
    if (!inside) throw PreconditionError("initial data is not in the blow-up set");

    stage = "simulate";
    auto controls = config.evolve.controls();
    if (controls.virial_radii.empty()) throw ParameterError("instability needs virial radii");
    Trajectory traj;
    try {
        traj = simulate(u0, config.params, controls);
    } catch (EvolutionAborted const& e) {
        write_trajectory_csv(dir / "trajectory.csv", e.partial());
        res.artifacts.push_back(dir / "trajectory.csv");
        throw;
    }
    write_trajectory_csv(dir / "trajectory.csv", traj);
    res.artifacts.push_back(dir / "trajectory.csv");
    res.summary["conservation"] = conservation_json(traj);

    double worst_q = -std::numeric_limits<double>::infinity();
    double worst_s = -std::numeric_limits<double>::infinity();
    for (auto const& s : traj.samples) {
        worst_q = std::max(worst_q, s.q + a);
        worst_s = std::max(worst_s, s.energy + 0.5 * config.params.omega * s.mass - gs.d_rad_omega);
    }
    res.summary["flow"] = json{{"max_q_plus_a", worst_q}, {"max_s_minus_d", worst_s}};

    stage = "virial";
    json radii = json::array();
    std::size_t const middle = controls.virial_radii.size() / 2;
    for (std::size_t k = 0; k < controls.virial_radii.size(); ++k) {
        auto series = virial_series(traj, k);
        second_derivative_series(series);
        auto const est = estimate_b(series, 2, a);
        json entry{{"radius", series.radius}, {"b_hat", est.b_hat}, {"concave", est.concave}};
        std::optional<double> bound;
        if (est.concave) bound = glassey_bound(series.v_values.front(), initial_slope(series), est.b_hat);
        entry["glassey_bound"] = bound ? json(*bound) : json(nullptr);
        if (k == middle) traj.verdict.glassey_bound = bound;
        radii.push_back(entry);
    }
    res.summary["virial"] = radii;
    res.summary["verdict"] = to_json(traj.verdict);

    auto const loc = localization_check(traj, config.params);
    json points = json::array();
    for (auto const& p : loc.points) {
        points.push_back(json{{"t", p.t}, {"radius", p.radius}, {"deviation", p.deviation},
                              {"err_scale", p.err_scale}});
    }
    res.summary["localization"] = json{{"points", points},
                                       {"fitted_constant", loc.fitted_constant},
                                       {"monotone", loc.monotone}};
}

} // namespace

ExperimentResult run_experiment(Config const& config, ExperimentKind kind) {
    config.validate();
    ExperimentResult res;
    res.kind = kind;
    auto const dir = config.output_dir / to_string(kind);
    fs::create_directories(dir);
    res.summary["kind"] = to_string(kind);
    res.summary["params"] = to_json(config.params);

    std::string stage = "setup";
    try {
        {
            std::ofstream cfg(dir / "config.ini");
            cfg << serialize_config(config);
        }
        res.artifacts.push_back(dir / "config.ini");
        switch (kind) {
        case ExperimentKind::groundstate: run_groundstate(config, dir, res, stage); break;
        case ExperimentKind::scaling: run_scaling(config, dir, res, stage); break;
        case ExperimentKind::evolve: run_evolve(config, dir, res, stage); break;
        case ExperimentKind::instability: run_instability(config, dir, res, stage); break;
        }
    } catch (Error const& e) {
        res.ok = false;
        res.failed_stage = stage;
        res.error = e.what();
    }
    res.summary["ok"] = res.ok;
    if (!res.ok) res.summary["failure"] = json{{"stage", res.failed_stage}, {"error", res.error}};
    write_json(dir / "summary.json", res.summary);
    res.artifacts.push_back(dir / "summary.json");
    return res;
}

} // namespace isqnls
