#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "isqnls/config.hpp"

namespace isqnls {

enum class ExperimentKind { groundstate, scaling, evolve, instability };

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
char const* to_string(ExperimentKind kind) noexcept;

/// Scaling parameters used by the scaling experiment.
std::vector<double> default_scaling_lambdas();

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::groundstate;
    bool ok = true;
    std::string failed_stage;  ///< empty on success
    std::string error;
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::filesystem::path> artifacts;
};

/// Runs one experiment and writes its files under
/// config.output_dir / to_string(kind). Numerical failures are reported in
/// the result together with whatever was written before the failing stage;
/// an invalid config throws.
ExperimentResult run_experiment(Config const& config, ExperimentKind kind);

/// Ground state by the configured method.
GroundState compute_ground_state(Config const& config);

nlohmann::json to_json(Params const& params);
nlohmann::json to_json(GroundState const& gs);
nlohmann::json to_json(PohozaevReport const& report);
nlohmann::json to_json(BlowupVerdict const& verdict);

void write_json(std::filesystem::path const& path, nlohmann::json const& value);
void write_profile_csv(std::filesystem::path const& path, RealRadialField const& profile);
void write_scaling_csv(std::filesystem::path const& path, ScalingCurve const& curve);
void write_trajectory_csv(std::filesystem::path const& path, Trajectory const& traj);

} // namespace isqnls
