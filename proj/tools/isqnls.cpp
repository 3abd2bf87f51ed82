// Command-line front end: one subcommand per experiment kind.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "isqnls/config.hpp"
#include "isqnls/errors.hpp"
#include "isqnls/experiments.hpp"

namespace {

constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

struct Invocation {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
};

void print_result(isqnls::ExperimentResult const& res) {
    for (auto const& path : res.artifacts) fmt::print("wrote {}\n", path.string());
    auto const& s = res.summary;
    if (s.contains("ground_state")) {
        auto const& gs = s["ground_state"];
        fmt::print("d(rad,omega) = {:.12g}   residual = {:.3e}\n", gs["d_rad_omega"].get<double>(),
                   gs["residual"].get<double>());
    }
    if (s.contains("verdict")) {
        auto const& v = s["verdict"];
        fmt::print("verdict: blew_up = {}, reason = {}\n", v["blew_up"].get<bool>(),
                   v["reason"].get<std::string>());
    }
    if (!res.ok) fmt::print(stderr, "failed at stage '{}': {}\n", res.failed_stage, res.error);
}

int run(isqnls::ExperimentKind kind, Invocation const& inv) {
    isqnls::Config config;
    try {
        if (!inv.config_path.empty()) config = isqnls::load_config(inv.config_path);
        for (auto const& o : inv.overrides) isqnls::apply_override(config, o);
        if (!inv.out_dir.empty()) config.output_dir = inv.out_dir;
        config.validate();
    } catch (isqnls::ParseError const& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return exit_validation;
    } catch (isqnls::ParameterError const& e) {
        fmt::print(stderr, "invalid configuration: {}\n", e.what());
        return exit_validation;
    }

    auto const res = isqnls::run_experiment(config, kind);
    print_result(res);
    return res.ok ? 0 : exit_numerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground states, scaling and blow-up for the radial NLS with an inverse-square potential"};
    app.require_subcommand(1);

    Invocation inv;
    int status = 0;
    for (auto kind : {isqnls::ExperimentKind::groundstate, isqnls::ExperimentKind::scaling,
                      isqnls::ExperimentKind::evolve, isqnls::ExperimentKind::instability}) {
        auto* sub = app.add_subcommand(isqnls::to_string(kind));
        sub->add_option("--config", inv.config_path, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", inv.out_dir, "output directory (overrides output.dir)");
        sub->add_option("--override", inv.overrides, "section.key=value, repeatable");
        sub->callback([&, kind] { status = run(kind, inv); });
    }
    app.add_subcommand("defaults", "print the default configuration")->callback([] {
        std::cout << isqnls::serialize_config(isqnls::Config{});
    });

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    } catch (isqnls::Error const& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_numerical;
    }
    return status;
}
