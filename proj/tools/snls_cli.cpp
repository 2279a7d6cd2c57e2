// snls: batch front-end for the weighted exponential NLS toolkit.
//
// Exit status: 0 success, 1 configuration error, 2 numeric/runtime error.
// Failures print a single line "error: <reason>" to stderr.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snls/app.hpp"

namespace {

using namespace snls;

struct FieldSource {
    std::string snapshot;
    std::string config;
};

// Field + exponent b from --snapshot or --config (default: unit Gaussian).
std::pair<Field, double> load_field(const FieldSource& src, std::optional<double> b_override, int n, double L) {
    if (!src.snapshot.empty()) {
        auto snap = load_snapshot(src.snapshot);
        return {std::move(snap.u), b_override.value_or(snap.meta.b)};
    }
    if (!src.config.empty()) {
        const auto cfg = parse_config(app::read_text_file(src.config));
        const auto grid = make_grid(cfg.grid.n, cfg.grid.half_width);
        const double b = b_override.value_or(cfg.phys.b);
        const auto params = PhysParams::pde(cfg.phys.b);
        const auto weight = make_singular_weight(grid, cfg.phys.b);
        return {app::initial_field(cfg, grid, weight, params), b};
    }
    return {gaussian(make_grid(n, L), 1.0), b_override.value_or(0.5)};
}

void write_rows(const std::filesystem::path& path, const std::string& header,
                const std::vector<std::vector<std::string>>& rows) {
    auto os = app::open_output(path);
    os << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
        os << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Simulator and analysis toolkit for 2D NLS with weighted exponential nonlinearity"};
    cli.require_subcommand(1);

    app::Options opts;
    std::string out_dir = ".";
    cli.add_option("--out", out_dir, "Output directory")->capture_default_str();
    cli.add_option("--seed", opts.seed, "Seed for randomized probes and estimators");
    cli.add_flag("--quiet", opts.quiet, "Suppress progress output");

    // simulate
    auto* simulate = cli.add_subcommand("simulate", "Evolve configured initial data and record diagnostics");
    std::string sim_config;
    simulate->add_option("--config", sim_config, "Run configuration (INI)")->required();

    // classify
    auto* classify = cli.add_subcommand("classify", "Report H(u) and the criticality class");
    FieldSource classify_src;
    std::optional<double> classify_b;
    classify->add_option("--snapshot", classify_src.snapshot, "Snapshot file");
    classify->add_option("--config", classify_src.config, "Run configuration (INI)");
    classify->add_option("--b", classify_b, "Override the exponent b");

    // mt-sweep
    auto* sweep = cli.add_subcommand("mt-sweep", "Moser-Trudinger threshold sweep over alpha");
    double sweep_b = 0.5;
    int sweep_n = 2048;
    double sweep_L = 1.25;
    std::vector<double> sweep_factors{0.6, 0.8, 0.9, 1.0, 1.1, 1.2, 1.4};
    std::vector<int> sweep_nparams{2, 4, 8, 16, 32, 64, 128, 256};
    std::string sweep_norm = "gradient";
    sweep->add_option("--b", sweep_b, "Singularity exponent in (0,2)")->required();
    sweep->add_option("--n", sweep_n, "Grid points per axis")->capture_default_str();
    sweep->add_option("--L", sweep_L, "Grid half-width")->capture_default_str();
    sweep->add_option("--factors", sweep_factors, "alpha values as multiples of 2 pi (2 - b)");
    sweep->add_option("--n-params", sweep_nparams, "Moser sequence indices");
    sweep->add_option("--normalization", sweep_norm, "gradient | h1")
        ->check(CLI::IsMember({"gradient", "h1"}))
        ->capture_default_str();

    // rearrange
    auto* rearrange = cli.add_subcommand("rearrange", "Schwarz symmetrization of |u| with checks");
    FieldSource rearrange_src;
    rearrange->add_option("--snapshot", rearrange_src.snapshot, "Snapshot file");
    rearrange->add_option("--config", rearrange_src.config, "Run configuration (INI)");

    // probe
    auto* probe = cli.add_subcommand("probe", "Functional-inequality probes");
    std::string probe_kind;
    FieldSource probe_src;
    int probe_n = 128, probe_samples = 32, probe_time_samples = 64;
    double probe_L = 10.0, probe_T = 1.0, probe_gamma = 4.0, probe_p = 2.0;
    double probe_lambda = 2.0 / std::numbers::pi, probe_mu = 1.0, probe_beta = 0.5;
    std::optional<double> probe_b;
    probe->add_option("kind", probe_kind, "strichartz | log-estimate | strauss | hardy")
        ->required()
        ->check(CLI::IsMember({"strichartz", "log-estimate", "strauss", "hardy"}));
    probe->add_option("--snapshot", probe_src.snapshot, "Snapshot file (log-estimate, strauss, hardy)");
    probe->add_option("--config", probe_src.config, "Run configuration (log-estimate, strauss, hardy)");
    probe->add_option("--n", probe_n, "Grid points per axis")->capture_default_str();
    probe->add_option("--L", probe_L, "Grid half-width")->capture_default_str();
    probe->add_option("--samples", probe_samples, "Strichartz ensemble size")->capture_default_str();
    probe->add_option("--time-samples", probe_time_samples, "Strichartz time nodes")->capture_default_str();
    probe->add_option("--T", probe_T, "Strichartz horizon")->capture_default_str();
    probe->add_option("--b", probe_b, "Hardy exponent b");
    probe->add_option("--gamma", probe_gamma, "Hardy power gamma")->capture_default_str();
    probe->add_option("--p", probe_p, "Strauss exponent p")->capture_default_str();
    probe->add_option("--lambda", probe_lambda, "Log-estimate lambda")->capture_default_str();
    probe->add_option("--mu", probe_mu, "Log-estimate mu")->capture_default_str();
    probe->add_option("--beta", probe_beta, "Log-estimate beta")->capture_default_str();

    for (auto* sub : {simulate, classify, sweep, rearrange, probe}) sub->fallthrough();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    }
    opts.out_dir = out_dir;

    try {
        if (*simulate) {
            return app::run_simulate(parse_config(app::read_text_file(sim_config)), opts, std::cout);
        }
        if (*classify) {
            auto [u, b] = load_field(classify_src, classify_b, 128, 10.0);
            std::cout << app::classify_line(u, b) << "\n";
            return 0;
        }
        if (*sweep) {
            std::vector<double> alphas;
            for (double f : sweep_factors) alphas.push_back(f * PhysParams::critical_alpha(sweep_b));
            const auto result =
                moser_trudinger_sweep(sweep_b, alphas, sweep_nparams, make_grid(sweep_n, sweep_L),
                                      sweep_norm == "h1" ? MoserNormalization::FullH1 : MoserNormalization::Gradient);
            auto os = app::open_output(opts.out_dir / "mt_sweep.csv");
            result.write_csv(os);
            if (!opts.quiet) {
                for (std::size_t a = 0; a < result.alphas.size(); ++a) {
                    std::cout << "alpha/alpha*=" << result.alphas[a] / PhysParams::critical_alpha(sweep_b) << " " << to_string(result.verdicts[a]) << "\n";
                }
            }
            return 0;
        }
        if (*rearrange) {
            auto [u, b] = load_field(rearrange_src, std::nullopt, 128, 10.0);
            const RealField m = modulus(u);
            const RealField sym = schwarz_symmetrization(m);
            save_snapshot((opts.out_dir / "symmetrized.snls").string(), to_complex(sym), {b, 0.0});
            const auto ps = polya_szego_check(m);
            std::vector<std::vector<std::string>> rows;
            for (double p : {1.0, 2.0, 4.0}) {
                rows.push_back({"l" + std::to_string(int(p)), app::format_double(lp_norm(u, p)),
                                app::format_double(lp_norm(to_complex(sym), p))});
            }
            rows.push_back({"grad_sq_fd", app::format_double(ps.grad_before), app::format_double(ps.grad_after)});
            write_rows(opts.out_dir / "rearrange.csv", "quantity,before,after", rows);
            if (!opts.quiet) std::cout << "polya_szego " << (ps.holds ? "holds" : "violated") << "\n";
            return 0;
        }
        if (*probe) {
            std::vector<std::vector<std::string>> rows;
            std::string header;
            if (probe_kind == "strichartz") {
                const auto r = strichartz_probe(probe_samples, make_grid(probe_n, probe_L), probe_T, opts.seed, 6,
                                                probe_time_samples);
                header = "sample,ratio";
                for (std::size_t k = 0; k < r.ratios.size(); ++k) {
                    rows.push_back({std::to_string(k), app::format_double(r.ratios[k])});
                }
                if (!opts.quiet) std::cout << "max_ratio=" << app::format_double(r.max_ratio) << "\n";
            } else {
                auto [u, b] = load_field(probe_src, probe_b, probe_n, probe_L);
                if (probe_kind == "log-estimate") {
                    const auto r = log_estimate_probe(u, probe_lambda, probe_mu, probe_beta);
                    header = "lhs,needed_c";
                    if (r) rows.push_back({app::format_double(r->lhs), app::format_double(r->needed_c)});
                } else if (probe_kind == "strauss") {
                    header = "p,ratio";
                    rows.push_back({app::format_double(probe_p), app::format_double(strauss_probe(u, probe_p))});
                } else {
                    header = "b,gamma,integral,ratio";
                    rows.push_back({app::format_double(b), app::format_double(probe_gamma),
                                    app::format_double(hardy_integral(u, b, probe_gamma)),
                                    app::format_double(hardy_check(u, b, probe_gamma))});
                }
                if (!opts.quiet) {
                    for (const auto& row : rows) {
                        for (std::size_t k = 0; k < row.size(); ++k) std::cout << (k ? "," : "") << row[k];
                        std::cout << "\n";
                    }
                }
            }
            write_rows(opts.out_dir / ("probe_" + probe_kind + ".csv"), header, rows);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
