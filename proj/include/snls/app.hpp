#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "snls/config.hpp"
#include "snls/diagnostics.hpp"
#include "snls/evolve.hpp"
#include "snls/functionals.hpp"
#include "snls/profiles.hpp"
#include "snls/rearrangement.hpp"
#include "snls/snapshot.hpp"

// Run orchestration behind the `snls` command-line tool.
namespace snls::app {

struct Options {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = default_holder_seed;
    bool quiet = false;
};

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("--config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    return os;
}

/// Unit-amplitude shape for the configured initial data (nullopt for files).
inline Field initial_shape(const RunConfig& cfg, const GridSpec& grid) {
    switch (cfg.init.kind) {
    case InitKind::Gaussian: return gaussian(grid, 1.0, cfg.init.center_x, cfg.init.center_y, cfg.init.width);
    case InitKind::Ring: return ring(grid, 1.0, cfg.init.radius, cfg.init.width);
    case InitKind::Moser: return moser_sequence(cfg.init.n_param, grid);
    case InitKind::File: break;
    }
    throw ConfigError("init.kind", "file data has no analytic shape");
}

/// Initial field: the configured shape scaled to init.amplitude, or to the
/// amplitude that hits init.target_hamiltonian; or a snapshot for kind=file.
inline Field initial_field(const RunConfig& cfg, const GridSpec& grid, const SingularWeight& w, const PhysParams& p) {
    if (cfg.init.kind == InitKind::File) {
        auto snap = load_snapshot(cfg.init.path);
        if (!(snap.u.grid() == grid)) {
            throw ConfigError("init.path", "snapshot grid does not match grid.n/grid.half_width");
        }
        return std::move(snap.u);
    }
    const Field shape = initial_shape(cfg, grid);
    const double amplitude =
        cfg.init.target_hamiltonian ? amplitude_for_hamiltonian(shape, w, p, *cfg.init.target_hamiltonian)
                                    : cfg.init.amplitude;
    return shape.scaled(amplitude);
}

inline std::string energy_summary(const EnergyReport& e) {
    std::ostringstream os;
    os << "mass=" << format_double(e.mass) << "\n"
       << "kinetic=" << format_double(e.kinetic) << "\n"
       << "potential=" << format_double(e.potential) << "\n"
       << "hamiltonian=" << format_double(e.hamiltonian) << "\n"
       << "class=" << to_string(e.criticality) << "\n";
    return os.str();
}

/// `simulate`: init -> classify -> evolve -> monitors -> outputs.
/// Writes energy.txt, observables.csv, monitors.txt and snapshot_NNNNNN.snls
/// (one per recorded time) into opts.out_dir.
inline int run_simulate(const RunConfig& cfg, const Options& opts, std::ostream& log) {
    const auto grid = make_grid(cfg.grid.n, cfg.grid.half_width);
    const auto params = PhysParams::pde(cfg.phys.b);
    const auto weight = make_singular_weight(grid, cfg.phys.b);
    const Field u0 = initial_field(cfg, grid, weight, params);
    const auto energy = hamiltonian(u0, weight, params);
    {
        auto os = open_output(opts.out_dir / "energy.txt");
        os << energy_summary(energy);
    }
    if (!opts.quiet) {
        log << to_string(energy.criticality) << " H=" << format_double(energy.hamiltonian) << "\n";
        if (energy.criticality == Criticality::Supercritical) {
            log << "warning: supercritical data, global existence is not guaranteed\n";
        }
    }

    const double radius = cfg.diagnostics.S + cfg.diagnostics.S_prime;
    SeriesRecorder recorder(weight, params, radius, cfg.diagnostics.holder);
    auto observe = [&](const TrajectoryState& s) {
        recorder.record(s.u, s.t);
        save_snapshot((opts.out_dir / ("snapshot_" + std::to_string(1000000 + s.step_index).substr(1) + ".snls"))
                          .string(),
                      s.u, {cfg.phys.b, s.t});
    };

    std::ostringstream monitors;
    if (cfg.time.integrator == Integrator::Strang) {
        evolve(u0, cfg.time, weight, params, observe);
    } else {
        observe({0.0, u0, 0});
        const auto result = picard_solve(u0, cfg.time.t_final, cfg.time, weight, params);
        observe({cfg.time.t_final, result.u_final, cfg.time.steps()});
        monitors << "picard_contraction_ratios=";
        for (std::size_t k = 0; k < result.contraction_ratios.size(); ++k) {
            monitors << (k ? ";" : "") << format_double(result.contraction_ratios[k]);
        }
        monitors << "\n";
    }
    const auto& series = recorder.series();
    {
        auto os = open_output(opts.out_dir / "observables.csv");
        series.write_csv(os);
    }

    for (const auto& name : cfg.diagnostics.monitors) {
        if (name == "localized_mass") {
            const auto violations = localized_mass_monitor(series, u0, cfg.diagnostics.S, cfg.diagnostics.S_prime,
                                                           energy.hamiltonian + energy.mass);
            monitors << "localized_mass_violations=" << violations.size() << "\n";
        } else if (name == "concentration") {
            const auto c = concentration_monitor(series);
            monitors << "sup_grad=" << format_double(c.sup_grad) << "\n"
                     << "min_quartic=" << format_double(c.min_quartic) << "\n"
                     << "coupled_bound_ok=" << (c.coupled_bound_ok ? "true" : "false") << "\n";
        } else if (name == "scattering") {
            monitors << "scattering_cauchy=";
            const auto& records = series.records();
            for (std::size_t k = 1; k < records.size(); ++k) {
                monitors << (k > 1 ? ";" : "") << format_double(records[k].scattering_cauchy);
            }
            monitors << "\n";
        }
    }
    {
        auto os = open_output(opts.out_dir / "monitors.txt");
        os << monitors.str();
    }
    if (!opts.quiet) log << monitors.str();
    return 0;
}

/// `classify`: one line "<Class> H=<value>".
inline std::string classify_line(const Field& u, double b) {
    const auto params = PhysParams::pde(b);
    const auto weight = make_singular_weight(u.grid(), b);
    const auto e = hamiltonian(u, weight, params);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s H=%.12g", to_string(e.criticality), e.hamiltonian);
    return buf;
}

} // namespace snls::app
