#include "isqnls/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "isqnls/errors.hpp"

namespace isqnls {

GridPtr GridSpec::build(int d) const {
    double const s = stretch.value_or(geometric_stretch(r_min, r_max, n));
    return RadialGrid::build(d, r_min, r_max, n, s);
}

EvolutionControls EvolveSpec::controls() const {
    EvolutionControls c;
    c.scheme = scheme;
    c.t_max = t_max;
    c.dt0 = dt0;
    c.sample_every = sample_every;
    c.gradient_factor = gradient_factor;
    c.dt_min = dt_min;
    c.energy_tol = energy_tol;
    c.growth_tol = growth_tol;
    c.virial_radii = virial_radii;
    return c;
}

GridPtr Config::evolution_grid() const {
    return RadialGrid::build(params.d, evolve.r_min, grid.r_max, evolve.n,
                             geometric_stretch(evolve.r_min, grid.r_max, evolve.n));
}

GroundStateOptions Config::solver_options() const {
    GroundStateOptions o;
    o.tol = ground_state.tol;
    o.max_iter = ground_state.max_iter;
    return o;
}

void Config::validate() const {
    params.validate();
    if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min)) {
        throw ParameterError("grid needs 0 < r_min < r_max");
    }
    if (grid.n < 16 || evolve.n < 16) throw ParameterError("grids need at least 16 nodes");
    if (grid.stretch && !(*grid.stretch >= 1.0)) throw ParameterError("grid stretch must be >= 1");
    if (!(evolve.r_min > 0.0) || !(evolve.r_min < grid.r_max)) {
        throw ParameterError("evolve.r_min must lie in (0, grid.r_max)");
    }
    if (!(ground_state.tol > 0.0) || ground_state.max_iter < 1) {
        throw ParameterError("ground_state needs tol > 0 and max_iter >= 1");
    }
    if (!(evolve.lambda0 > 0.0)) throw ParameterError("evolve.lambda0 must be positive");
    for (double r : evolve.virial_radii) {
        if (!(r > 1.0) || r > grid.r_max / 3.0) {
            throw ParameterError(fmt::format(
                "virial radius {} outside (1, r_max/3] with r_max = {}", r, grid.r_max));
        }
    }
    evolve.controls().validate();
}

namespace {

std::string fmt_real(double x) { return fmt::format("{:.17g}", x); }

double to_real(std::string const& key, std::string_view text) {
    double x = 0.0;
    auto const* first = text.data();
    auto const* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(fmt::format("{}: expected a number, got '{}'", key, text), -1);
    }
    return x;
}

template <class Int>
Int to_int(std::string const& key, std::string_view text) {
    Int x{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(fmt::format("{}: expected an integer, got '{}'", key, text), -1);
    }
    return x;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<double> to_list(std::string const& key, std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        auto const comma = text.find(',');
        out.push_back(to_real(key, trim(text.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

struct Key {
    std::string name;
    std::function<void(Config&, std::string const&, std::string_view)> set;
    std::function<std::string(Config const&)> get;
};

#define ISQNLS_REAL(path, member)                                                              \
    Key{path, [](Config& c, std::string const& k, std::string_view v) { c.member = to_real(k, v); }, \
        [](Config const& c) { return fmt_real(c.member); }}

std::vector<Key> const& key_table() {
    static std::vector<Key> const table = {
        Key{"params.d",
            [](Config& c, std::string const& k, std::string_view v) { c.params.d = to_int<int>(k, v); },
            [](Config const& c) { return std::to_string(c.params.d); }},
        ISQNLS_REAL("params.c", params.c),
        ISQNLS_REAL("params.alpha", params.alpha),
        ISQNLS_REAL("params.omega", params.omega),
        ISQNLS_REAL("grid.r_min", grid.r_min),
        ISQNLS_REAL("grid.r_max", grid.r_max),
        Key{"grid.n",
            [](Config& c, std::string const& k, std::string_view v) { c.grid.n = to_int<std::size_t>(k, v); },
            [](Config const& c) { return std::to_string(c.grid.n); }},
        Key{"grid.stretch",
            [](Config& c, std::string const& k, std::string_view v) {
                if (v == "auto") {
                    c.grid.stretch.reset();
                } else {
                    c.grid.stretch = to_real(k, v);
                }
            },
            [](Config const& c) { return c.grid.stretch ? fmt_real(*c.grid.stretch) : std::string("auto"); }},
        ISQNLS_REAL("ground_state.tol", ground_state.tol),
        Key{"ground_state.max_iter",
            [](Config& c, std::string const& k, std::string_view v) { c.ground_state.max_iter = to_int<int>(k, v); },
            [](Config const& c) { return std::to_string(c.ground_state.max_iter); }},
        Key{"ground_state.method",
            [](Config& c, std::string const& k, std::string_view v) {
                if (v == "projected_gradient") {
                    c.ground_state.method = GroundStateMethod::projected_gradient;
                } else if (v == "shooting") {
                    c.ground_state.method = GroundStateMethod::shooting;
                } else {
                    throw ParseError(fmt::format("{}: unknown method '{}'", k, v), -1);
                }
            },
            [](Config const& c) { return std::string(to_string(c.ground_state.method)); }},
        ISQNLS_REAL("evolve.dt0", evolve.dt0),
        ISQNLS_REAL("evolve.t_max", evolve.t_max),
        ISQNLS_REAL("evolve.lambda0", evolve.lambda0),
        ISQNLS_REAL("evolve.sample_every", evolve.sample_every),
        Key{"evolve.virial_radii",
            [](Config& c, std::string const& k, std::string_view v) { c.evolve.virial_radii = to_list(k, v); },
            [](Config const& c) {
                std::string out;
                for (double r : c.evolve.virial_radii) out += (out.empty() ? "" : ", ") + fmt_real(r);
                return out;
            }},
        ISQNLS_REAL("evolve.gradient_factor", evolve.gradient_factor),
        ISQNLS_REAL("evolve.dt_min", evolve.dt_min),
        ISQNLS_REAL("evolve.energy_tol", evolve.energy_tol),
        ISQNLS_REAL("evolve.growth_tol", evolve.growth_tol),
        Key{"evolve.scheme",
            [](Config& c, std::string const& k, std::string_view v) {
                if (v == "conservative") {
                    c.evolve.scheme = Scheme::conservative;
                } else if (v == "strang") {
                    c.evolve.scheme = Scheme::strang;
                } else {
                    throw ParseError(fmt::format("{}: unknown scheme '{}'", k, v), -1);
                }
            },
            [](Config const& c) { return std::string(to_string(c.evolve.scheme)); }},
        ISQNLS_REAL("evolve.r_min", evolve.r_min),
        Key{"evolve.n",
            [](Config& c, std::string const& k, std::string_view v) { c.evolve.n = to_int<std::size_t>(k, v); },
            [](Config const& c) { return std::to_string(c.evolve.n); }},
        Key{"output.dir",
            [](Config& c, std::string const&, std::string_view v) { c.output_dir = std::string(v); },
            [](Config const& c) { return c.output_dir.string(); }},
    };
    return table;
}

#undef ISQNLS_REAL

void set_key(Config& config, std::string const& key, std::string_view value) {
    for (auto const& entry : key_table()) {
        if (entry.name == key) {
            entry.set(config, key, trim(value));
            return;
        }
    }
    throw ParseError(fmt::format("unknown configuration key '{}'", key), -1);
}

// 1-based line of `key` inside `[section]`, or -1. The INI reader keeps no
// positions for well-formed entries, so value errors are located here.
long line_of(std::string_view text, std::string_view section, std::string_view key) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string current;
    long number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto const body = trim(line);
        if (body.empty() || body.front() == ';' || body.front() == '#') continue;
        if (body.front() == '[' && body.back() == ']') {
            current = std::string(trim(body.substr(1, body.size() - 2)));
            continue;
        }
        auto const eq = body.find('=');
        if (current == section && eq != std::string_view::npos && trim(body.substr(0, eq)) == key) {
            return number;
        }
    }
    return -1;
}

} // namespace

Config parse_config(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (pt::ini_parser_error const& e) {
        throw ParseError(fmt::format("malformed configuration at line {}: {}", e.line(), e.message()),
                         static_cast<long>(e.line()));
    }
    Config config;
    for (auto const& [section, body] : tree) {
        if (body.empty()) {
            throw ParseError(fmt::format("key '{}' outside any section", section), -1);
        }
        for (auto const& [key, value] : body) {
            try {
                set_key(config, section + "." + key, value.data());
            } catch (ParseError const& e) {
                long const line = line_of(text, section, key);
                if (line < 0) throw;
                throw ParseError(fmt::format("line {}: {}", line, e.what()), line);
            }
        }
    }
    config.validate();
    return config;
}

Config load_config(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot read configuration '{}'", path.string()), -1);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_override(Config& config, std::string_view assignment) {
    auto const eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError(fmt::format("override '{}' is not of the form key=value", assignment), -1);
    }
    set_key(config, std::string(trim(assignment.substr(0, eq))), assignment.substr(eq + 1));
}

std::string serialize_config(Config const& config) {
    std::string out;
    std::string current;
    for (auto const& entry : key_table()) {
        auto const dot = entry.name.find('.');
        auto const section = entry.name.substr(0, dot);
        if (section != current) {
            out += fmt::format("{}[{}]\n", out.empty() ? "" : "\n", section);
            current = section;
        }
        out += fmt::format("{} = {}\n", entry.name.substr(dot + 1), entry.get(config));
    }
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (auto const& entry : key_table()) out.push_back(entry.name);
    return out;
}

} // namespace isqnls
