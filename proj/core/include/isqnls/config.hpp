#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isqnls/evolution.hpp"
#include "isqnls/ground_state.hpp"
#include "isqnls/params.hpp"
#include "isqnls/radial_grid.hpp"

namespace isqnls {

struct GridSpec {
    double r_min = 1e-6;
    double r_max = 120.0;
    std::size_t n = 4096;
    /// Last/first spacing ratio; empty means geometric ("auto").
    std::optional<double> stretch;

    GridPtr build(int d) const;
    friend bool operator==(GridSpec const&, GridSpec const&) = default;
};

struct GroundStateSpec {
    double tol = 1e-6;
    int max_iter = 50000;
    GroundStateMethod method = GroundStateMethod::projected_gradient;

    friend bool operator==(GroundStateSpec const&, GroundStateSpec const&) = default;
};

/// Time-stepping controls plus the grid the evolution runs on. That grid
/// shares r_max with the ground-state grid but reaches much closer to the
/// origin, where a collapsing solution concentrates.
struct EvolveSpec {
    double dt0 = 1e-3;
    double t_max = 1.0;
    double lambda0 = 1.1;
    double sample_every = 1e-3;
    std::vector<double> virial_radii{10.0, 20.0, 40.0};
    double gradient_factor = 1e3;
    double dt_min = 1e-10;
    double energy_tol = 1e-7;
    double growth_tol = 0.2;
    Scheme scheme = Scheme::conservative;
    double r_min = 1e-10;
    std::size_t n = 8192;

    EvolutionControls controls() const;
    friend bool operator==(EvolveSpec const&, EvolveSpec const&) = default;
};

struct Config {
    Params params;
    GridSpec grid;
    GroundStateSpec ground_state;
    EvolveSpec evolve;
    std::filesystem::path output_dir = "out";

    /// Grid for the time evolution: geometric from evolve.r_min to grid.r_max.
    GridPtr evolution_grid() const;
    GroundStateOptions solver_options() const;

    /// Admissibility of the parameters and consistency of every section.
    void validate() const;

    friend bool operator==(Config const&, Config const&) = default;
};

/// INI document with sections [params] [grid] [ground_state] [evolve]
/// [output]. Missing keys keep their defaults; unknown keys are rejected.
/// Syntax errors raise ParseError with the offending line.
Config parse_config(std::string_view text);
Config load_config(std::filesystem::path const& path);

/// Applies "section.key=value".
void apply_override(Config& config, std::string_view assignment);

/// Every key, floats with 17 significant digits, so parse(serialize(c)) == c.
std::string serialize_config(Config const& config);

std::vector<std::string> config_keys();

} // namespace isqnls
