#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "snls/error.hpp"
#include "snls/evolve.hpp"
#include "snls/grid.hpp"
#include "snls/nonlinearity.hpp"

namespace snls {

enum class InitKind { Gaussian, Ring, Moser, File };

inline const char* to_string(InitKind k) {
    switch (k) {
    case InitKind::Gaussian: return "gaussian";
    case InitKind::Ring: return "ring";
    case InitKind::Moser: return "moser";
    case InitKind::File: return "file";
    }
    return "?";
}

struct RunConfig {
    struct Grid {
        int n = 128;
        double half_width = 10.0;
    } grid;

    struct Phys {
        double b = 0.5;
    } phys;

    struct Init {
        InitKind kind = InitKind::Gaussian;
        double amplitude = 0.5;
        /// When set, the amplitude is bisected so that H(u0) equals this value.
        std::optional<double> target_hamiltonian;
        double center_x = 0.0;
        double center_y = 0.0;
        double width = 1.0;
        double radius = 2.0;
        int n_param = 8;
        std::string path;
    } init;

    EvolveConfig time;

    struct Diagnostics {
        std::vector<std::string> monitors;
        double S = 2.0;
        double S_prime = 4.0;
        bool holder = true;
        int strichartz_samples = 32;
        int strichartz_time_samples = 64;
        double strichartz_t = 1.0;
    } diagnostics;
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"grid", {"n", "half_width"}},
        {"phys", {"b"}},
        {"init",
         {"kind", "amplitude", "target_hamiltonian", "center_x", "center_y", "width", "radius", "n_param", "path"}},
        {"time", {"dt", "t_final", "snapshot_stride"}},
        {"integrator", {"kind", "picard_iters"}},
        {"diagnostics",
         {"monitors", "S", "S_prime", "holder", "strichartz_samples", "strichartz_time_samples", "strichartz_t"}},
    };
    return schema;
}

inline const std::set<std::string>& known_monitors() {
    static const std::set<std::string> names{"localized_mass", "concentration", "scattering"};
    return names;
}

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

class ConfigReader {
public:
    explicit ConfigReader(const boost::property_tree::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& key) const {
        auto node = tree_.get_optional<std::string>(boost::property_tree::ptree::path_type(key, '.'));
        if (!node) return std::nullopt;
        return trim(*node);
    }

    void read(const std::string& key, double& out) const {
        if (auto v = raw(key)) out = parse_double(key, *v);
    }

    void read(const std::string& key, int& out) const {
        if (auto v = raw(key)) {
            int value = 0;
            const auto* end = v->data() + v->size();
            auto [ptr, ec] = std::from_chars(v->data(), end, value);
            if (ec != std::errc() || ptr != end || v->empty()) {
                throw ConfigError(key, "type mismatch: expected integer, got '" + *v + "'");
            }
            out = value;
        }
    }

    void read(const std::string& key, bool& out) const {
        if (auto v = raw(key)) {
            if (*v == "true") out = true;
            else if (*v == "false") out = false;
            else throw ConfigError(key, "type mismatch: expected true or false, got '" + *v + "'");
        }
    }

    void read(const std::string& key, std::string& out) const {
        if (auto v = raw(key)) out = *v;
    }

    static double parse_double(const std::string& key, const std::string& v) {
        double value = 0.0;
        const auto* end = v.data() + v.size();
        auto [ptr, ec] = std::from_chars(v.data(), end, value);
        if (ec != std::errc() || ptr != end || v.empty() || !std::isfinite(value)) {
            throw ConfigError(key, "type mismatch: expected number, got '" + v + "'");
        }
        return value;
    }

private:
    const boost::property_tree::ptree& tree_;
};

} // namespace detail

/// Parses and validates INI-style configuration text:
///
///     [grid]
///     n = 128
///     half_width = 10
///     [phys]
///     b = 0.5
///     ...
///
/// Every error is a ConfigError naming the offending key path.
inline RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", std::string("syntax error: ") + e.message() + " at line " +
                                        std::to_string(e.line()));
    }

    const auto& schema = detail::config_schema();
    for (const auto& [section, body] : tree) {
        auto it = schema.find(section);
        if (it == schema.end() || !body.data().empty()) {
            throw ConfigError(section, "unknown key");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
        }
    }

    detail::ConfigReader r(tree);
    RunConfig cfg;
    r.read("grid.n", cfg.grid.n);
    r.read("grid.half_width", cfg.grid.half_width);
    r.read("phys.b", cfg.phys.b);

    std::string kind = to_string(cfg.init.kind);
    r.read("init.kind", kind);
    if (kind == "gaussian") cfg.init.kind = InitKind::Gaussian;
    else if (kind == "ring") cfg.init.kind = InitKind::Ring;
    else if (kind == "moser") cfg.init.kind = InitKind::Moser;
    else if (kind == "file") cfg.init.kind = InitKind::File;
    else throw ConfigError("init.kind", "must be one of gaussian|ring|moser|file, got '" + kind + "'");
    r.read("init.amplitude", cfg.init.amplitude);
    if (auto v = r.raw("init.target_hamiltonian")) {
        cfg.init.target_hamiltonian = detail::ConfigReader::parse_double("init.target_hamiltonian", *v);
    }
    r.read("init.center_x", cfg.init.center_x);
    r.read("init.center_y", cfg.init.center_y);
    r.read("init.width", cfg.init.width);
    r.read("init.radius", cfg.init.radius);
    r.read("init.n_param", cfg.init.n_param);
    r.read("init.path", cfg.init.path);

    r.read("time.dt", cfg.time.dt);
    r.read("time.t_final", cfg.time.t_final);
    r.read("time.snapshot_stride", cfg.time.snapshot_stride);

    std::string integrator = to_string(cfg.time.integrator);
    r.read("integrator.kind", integrator);
    if (integrator == "strang") cfg.time.integrator = Integrator::Strang;
    else if (integrator == "picard") cfg.time.integrator = Integrator::Picard;
    else throw ConfigError("integrator.kind", "must be strang or picard, got '" + integrator + "'");
    r.read("integrator.picard_iters", cfg.time.picard_iters);

    if (auto v = r.raw("diagnostics.monitors")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty()) continue;
            if (!detail::known_monitors().contains(item)) {
                throw ConfigError("diagnostics.monitors", "unknown monitor '" + item + "'");
            }
            cfg.diagnostics.monitors.push_back(item);
        }
    }
    r.read("diagnostics.S", cfg.diagnostics.S);
    r.read("diagnostics.S_prime", cfg.diagnostics.S_prime);
    r.read("diagnostics.holder", cfg.diagnostics.holder);
    r.read("diagnostics.strichartz_samples", cfg.diagnostics.strichartz_samples);
    r.read("diagnostics.strichartz_time_samples", cfg.diagnostics.strichartz_time_samples);
    r.read("diagnostics.strichartz_t", cfg.diagnostics.strichartz_t);

    // Constraints
    try {
        make_grid(cfg.grid.n, 1.0);
    } catch (const DomainError&) {
        throw ConfigError("grid.n", "must be a power of two >= 8, got " + std::to_string(cfg.grid.n));
    }
    if (!(cfg.grid.half_width > 0.0)) throw ConfigError("grid.half_width", "must be positive");
    if (!(cfg.phys.b > 0.0 && cfg.phys.b < 1.0)) throw ConfigError("phys.b", "out of PDE range (0,1)");
    if (cfg.init.kind != InitKind::File && !cfg.init.target_hamiltonian && !(cfg.init.amplitude >= 0.0)) {
        throw ConfigError("init.amplitude", "must be nonnegative");
    }
    if (cfg.init.target_hamiltonian && !(*cfg.init.target_hamiltonian > 0.0)) {
        throw ConfigError("init.target_hamiltonian", "must be positive");
    }
    if (!(cfg.init.width > 0.0)) throw ConfigError("init.width", "must be positive");
    if (!(cfg.init.radius > 0.0)) throw ConfigError("init.radius", "must be positive");
    if (cfg.init.n_param < 2) throw ConfigError("init.n_param", "must be >= 2");
    if (cfg.init.kind == InitKind::File && cfg.init.path.empty()) {
        throw ConfigError("init.path", "required when init.kind = file");
    }
    if (!(cfg.time.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
    if (!(cfg.time.t_final >= cfg.time.dt)) throw ConfigError("time.t_final", "must be >= time.dt");
    try {
        cfg.time.steps();
    } catch (const DomainError&) {
        throw ConfigError("time.t_final", "must be an integer multiple of time.dt");
    }
    if (cfg.time.snapshot_stride < 1) throw ConfigError("time.snapshot_stride", "must be >= 1");
    if (cfg.time.picard_iters < 2) throw ConfigError("integrator.picard_iters", "must be >= 2");
    if (!(cfg.diagnostics.S > 0.0)) throw ConfigError("diagnostics.S", "must be positive");
    if (!(cfg.diagnostics.S_prime > 0.0)) throw ConfigError("diagnostics.S_prime", "must be positive");
    if (cfg.diagnostics.strichartz_samples < 1) throw ConfigError("diagnostics.strichartz_samples", "must be >= 1");
    if (cfg.diagnostics.strichartz_time_samples < 1) {
        throw ConfigError("diagnostics.strichartz_time_samples", "must be >= 1");
    }
    if (!(cfg.diagnostics.strichartz_t > 0.0)) throw ConfigError("diagnostics.strichartz_t", "must be positive");
    return cfg;
}

} // namespace snls
