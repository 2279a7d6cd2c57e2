#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "snls/grid.hpp"
#include "snls/nonlinearity.hpp"

namespace snls {

// ---------------------------------------------------------------------------
// Conserved quantities and the criticality classifier

enum class Criticality { Subcritical, Critical, Supercritical };

inline const char* to_string(Criticality c) {
    switch (c) {
    case Criticality::Subcritical: return "Subcritical";
    case Criticality::Critical: return "Critical";
    case Criticality::Supercritical: return "Supercritical";
    }
    return "?";
}

/// Half-width of the band around H = 1 that counts as critical.
inline constexpr double criticality_band = 1e-9;

inline Criticality classify(double hamiltonian) {
    if (hamiltonian < 1.0 - criticality_band) return Criticality::Subcritical;
    if (hamiltonian > 1.0 + criticality_band) return Criticality::Supercritical;
    return Criticality::Critical;
}

struct EnergyReport {
    double mass = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double hamiltonian = 0.0;
    Criticality criticality = Criticality::Subcritical;
};

/// M(u) = ||u||_{L^2}^2.
inline double mass(const Field& u) {
    double sum = 0.0;
    for (const auto& v : u.values()) sum += std::norm(v);
    return sum * u.grid().cell_area();
}

inline double kinetic_energy(const Field& u) {
    const double g = grad_l2_norm(u);
    return g * g;
}

/// (1/alpha) * integral of w (e^{alpha|u|^2} - 1 - alpha|u|^2).
inline double potential_energy(const Field& u, const SingularWeight& w, const PhysParams& p) {
    require_same_grid(u.grid(), w.grid(), "potential_energy");
    const double alpha = p.alpha();
    auto uv = u.values();
    auto wv = w.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < uv.size(); ++k) sum += wv[k] * hamiltonian_density(uv[k], alpha);
    return sum * u.grid().cell_area();
}

inline void require_same_exponent(const SingularWeight& w, const PhysParams& p) {
    if (w.exponent() != p.b()) {
        throw MismatchError("weight exponent b=" + std::to_string(w.exponent()) + " differs from phys.b=" +
                            std::to_string(p.b()));
    }
}

inline EnergyReport hamiltonian(const Field& u, const SingularWeight& w, const PhysParams& p) {
    require_same_grid(u.grid(), w.grid(), "hamiltonian");
    require_same_exponent(w, p);
    EnergyReport r;
    r.mass = mass(u);
    r.kinetic = kinetic_energy(u);
    r.potential = potential_energy(u, w, p);
    r.hamiltonian = r.kinetic + r.potential;
    r.criticality = classify(r.hamiltonian);
    return r;
}

/// Amplitude A with H(A * shape) = target, by bisection (H increases with A).
inline double amplitude_for_hamiltonian(const Field& shape, const SingularWeight& w, const PhysParams& p,
                                        double target) {
    if (!(target > 0.0)) throw DomainError("amplitude_for_hamiltonian requires a positive target");
    auto energy = [&](double a) {
        try {
            return hamiltonian(shape.scaled(a), w, p).hamiltonian;
        } catch (const NumericError&) {
            return std::numeric_limits<double>::infinity(); // past the overflow guard
        }
    };
    double lo = 0.0, hi = 1.0;
    while (energy(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > amplitude_guard * 1e3) throw NumericError("amplitude_for_hamiltonian: no bracket found");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (energy(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Integral of w |u|^4.
inline double weighted_quartic(const Field& u, const SingularWeight& w) {
    require_same_grid(u.grid(), w.grid(), "weighted_quartic");
    auto uv = u.values();
    auto wv = w.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < uv.size(); ++k) {
        const double m2 = std::norm(uv[k]);
        sum += wv[k] * m2 * m2;
    }
    return sum * u.grid().cell_area();
}

// ---------------------------------------------------------------------------
// Hardy-type inequality  int |u|^gamma / |x|^b <= C ||u||_{H^1}^gamma

/// Integral of |u|^gamma |x|^-b. For b >= 2 the origin cell uses the
/// truncated weight, so the value grows without bound as h -> 0.
inline double hardy_integral(const Field& u, double b, double gamma) {
    if (!(gamma >= 2.0)) {
        throw DomainError("hardy_integral requires gamma >= 2, got " + std::to_string(gamma));
    }
    const auto w = b < 2.0 ? make_singular_weight(u.grid(), b) : make_truncated_weight(u.grid(), b);
    auto uv = u.values();
    auto wv = w.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < uv.size(); ++k) sum += wv[k] * std::pow(std::abs(uv[k]), gamma);
    return sum * u.grid().cell_area();
}

/// hardy_integral / ||u||_{H^1}^gamma (0 for the zero field).
inline double hardy_check(const Field& u, double b, double gamma) {
    const double integral = hardy_integral(u, b, gamma);
    const double norm = h1_norm(u);
    return norm > 0.0 ? integral / std::pow(norm, gamma) : 0.0;
}

// ---------------------------------------------------------------------------
// Moser-Trudinger probes

/// Continuum truncated-logarithm profile at radius r.
inline double moser_profile(int n_param, double r) {
    const double log_n = std::log(static_cast<double>(n_param));
    if (r <= 1.0 / n_param) return std::sqrt(log_n / (2.0 * std::numbers::pi));
    if (r <= 1.0) return std::log(1.0 / r) / std::sqrt(2.0 * std::numbers::pi * log_n);
    return 0.0;
}

/// Moser concentrating profile sampled as 5 x 5 cell averages (a one-cell box
/// mollifier at the kinks r = 1/n_param and r = 1). ||grad m||_{L^2} = 1 + O(h).
inline Field moser_sequence(int n_param, const GridSpec& grid) {
    if (n_param < 2) {
        throw DomainError("moser_sequence requires n_param >= 2, got " + std::to_string(n_param));
    }
    constexpr int sub = 5;
    const double h = grid.spacing();
    const double core = 1.0 / n_param;
    const double half_diag = h * std::numbers::sqrt2 / 2.0;
    Field out(grid);
    for (int i = 0; i < grid.n(); ++i) {
        const double x = grid.coordinate(i);
        for (int j = 0; j < grid.n(); ++j) {
            const double y = grid.coordinate(j);
            const double r = std::hypot(x, y);
            if (r - half_diag > 1.0) continue;
            if (r + half_diag <= core) {
                out(i, j) = moser_profile(n_param, 0.0);
                continue;
            }
            double sum = 0.0;
            for (int a = 0; a < sub; ++a) {
                const double sx = x + h * (double(a - sub / 2) / sub);
                for (int c = 0; c < sub; ++c) {
                    const double sy = y + h * (double(c - sub / 2) / sub);
                    sum += moser_profile(n_param, std::hypot(sx, sy));
                }
            }
            out(i, j) = sum / (sub * sub);
        }
    }
    return out;
}

enum class MoserNormalization {
    Gradient, ///< ||grad u||_{L^2} = 1
    FullH1,   ///< ||u||_{H^1} = 1
};

inline const char* to_string(MoserNormalization n) {
    return n == MoserNormalization::Gradient ? "gradient" : "h1";
}

enum class Verdict { Bounded, Diverging };

inline const char* to_string(Verdict v) { return v == Verdict::Bounded ? "Bounded" : "Diverging"; }

struct MoserSweepResult {
    double b = 0.0;
    MoserNormalization normalization = MoserNormalization::Gradient;
    std::vector<double> alphas;
    std::vector<int> n_params;
    /// ratios[a][k] belongs to alphas[a] and n_params[k].
    std::vector<std::vector<double>> ratios;
    std::vector<Verdict> verdicts;

    /// Smallest tested alpha with a Diverging verdict, if any.
    std::optional<double> first_diverging_alpha() const {
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            if (verdicts[a] == Verdict::Diverging) return alphas[a];
        }
        return std::nullopt;
    }

    /// No Bounded verdict above a Diverging one (alphas ascending).
    bool verdicts_monotone() const {
        bool seen_diverging = false;
        for (auto v : verdicts) {
            if (v == Verdict::Diverging) seen_diverging = true;
            else if (seen_diverging) return false;
        }
        return true;
    }

    /// CSV with columns b,alpha,n_param,ratio,verdict.
    void write_csv(std::ostream& os) const;
};

/// Diverging iff the sequence increases strictly and its last value is at
/// least growth_factor times its first.
inline Verdict sweep_verdict(const std::vector<double>& ratios, double growth_factor = 10.0) {
    if (ratios.empty()) return Verdict::Bounded;
    const bool increasing = std::is_sorted(ratios.begin(), ratios.end(), std::less_equal<>()) &&
                            std::adjacent_find(ratios.begin(), ratios.end()) == ratios.end();
    return increasing && ratios.back() >= growth_factor * ratios.front() ? Verdict::Diverging : Verdict::Bounded;
}

/// For each alpha and each Moser profile m_n (normalized per `normalization`):
///   ratio = int w (e^{alpha|u|^2} - 1) / (alpha int w |u|^2),
/// which tends to 1 as alpha -> 0.
inline MoserSweepResult moser_trudinger_sweep(double b, std::vector<double> alphas, const std::vector<int>& n_params,
                                              const GridSpec& grid,
                                              MoserNormalization normalization = MoserNormalization::Gradient,
                                              double growth_factor = 10.0) {
    if (alphas.empty() || n_params.empty()) {
        throw DomainError("moser_trudinger_sweep requires non-empty alpha and n_param lists");
    }
    for (double a : alphas) {
        if (!(a > 0.0)) throw DomainError("moser_trudinger_sweep: alpha must be positive");
    }
    std::sort(alphas.begin(), alphas.end());
    const auto weight = make_singular_weight(grid, b);
    auto wv = weight.values();

    MoserSweepResult out;
    out.b = b;
    out.normalization = normalization;
    out.alphas = alphas;
    out.n_params = n_params;
    out.ratios.assign(alphas.size(), std::vector<double>(n_params.size()));

    for (std::size_t k = 0; k < n_params.size(); ++k) {
        const Field profile = moser_sequence(n_params[k], grid);
        const double norm =
            normalization == MoserNormalization::Gradient ? grad_l2_norm(profile) : h1_norm(profile);
        const double scale2 = 1.0 / (norm * norm);

        // Only the support carries weight; gather |u|^2 once.
        std::vector<double> m2;
        std::vector<double> wsel;
        auto uv = profile.values();
        for (std::size_t c = 0; c < uv.size(); ++c) {
            const double v = std::norm(uv[c]) * scale2;
            if (v > 0.0) {
                m2.push_back(v);
                wsel.push_back(wv[c]);
            }
        }
        double denominator = 0.0;
        for (std::size_t c = 0; c < m2.size(); ++c) denominator += wsel[c] * m2[c];

        for (std::size_t a = 0; a < alphas.size(); ++a) {
            const double alpha = alphas[a];
            double numerator = 0.0;
            for (std::size_t c = 0; c < m2.size(); ++c) numerator += wsel[c] * std::expm1(alpha * m2[c]);
            out.ratios[a][k] = numerator / (alpha * denominator);
        }
    }
    for (const auto& row : out.ratios) out.verdicts.push_back(sweep_verdict(row, growth_factor));
    return out;
}

inline void MoserSweepResult::write_csv(std::ostream& os) const {
    char buf[160];
    os << "b,alpha,n_param,ratio,verdict\n";
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (std::size_t k = 0; k < n_params.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%s\n", b, alphas[a], n_params[k], ratios[a][k],
                          to_string(verdicts[a]));
            os << buf;
        }
    }
}

// ---------------------------------------------------------------------------
// Logarithmic L-infinity estimate

struct LogEstimate {
    double lhs = 0.0;      ///< ||u||_inf^2
    double needed_c = 0.0; ///< smallest C >= 0 making the estimate hold
};

/// ||u||_inf^2 <= lambda ||u||_{H_mu}^2 log(C + 8^beta mu^-beta ||u||_{C^beta} / ||u||_{H_mu}).
/// Returns nullopt for the zero field, where the estimate is degenerate.
inline std::optional<LogEstimate> log_estimate_probe(const Field& u, double lambda, double mu, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("log_estimate_probe: beta must lie in (0,1)");
    if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("log_estimate_probe: mu must lie in (0,1]");
    if (!(lambda > 1.0 / (2.0 * std::numbers::pi * beta))) {
        throw DomainError("log_estimate_probe: lambda must exceed 1/(2 pi beta)");
    }
    const double linf = linf_norm(u);
    if (linf == 0.0) return std::nullopt;
    const double hmu = h_mu_norm(u, mu);
    const double holder = holder_norm(u, beta);
    LogEstimate out;
    out.lhs = linf * linf;
    const double inner = std::pow(8.0, beta) * std::pow(mu, -beta) * holder / hmu;
    out.needed_c = std::max(0.0, std::exp(out.lhs / (lambda * hmu * hmu)) - inner);
    return out;
}

// ---------------------------------------------------------------------------
// Radial decay bound |u(x)| <= C_p |x|^{-2/(2+p)} ||u||_{H^1}

namespace detail {

/// Largest deviation of |u| under the grid's reflection and diagonal
/// symmetries about the origin, relative to max |u|.
inline double radial_asymmetry(const Field& u) {
    const auto& g = u.grid();
    const int n = g.n();
    const int c = g.origin_index();
    const double scale = linf_norm(u);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (int i = 1; i < n; ++i) {
        const int mi = 2 * c - i;
        for (int j = 1; j < n; ++j) {
            const double a = std::abs(u(i, j));
            worst = std::max(worst, std::abs(a - std::abs(u(j, i))));
            worst = std::max(worst, std::abs(a - std::abs(u(mi, j))));
        }
    }
    return worst / scale;
}

} // namespace detail

/// max over r > h of |u(x)| r^{2/(2+p)} / ||u||_{H^1} for a radial field.
inline double strauss_probe(const Field& u, double p, double radial_tolerance = 1e-8) {
    if (!(p >= 2.0)) throw DomainError("strauss_probe requires p >= 2");
    if (detail::radial_asymmetry(u) > radial_tolerance) {
        throw DomainError("strauss_probe: field is not radial within tolerance");
    }
    const double norm = h1_norm(u);
    if (norm == 0.0) return 0.0;
    const auto& g = u.grid();
    const double exponent = 2.0 / (2.0 + p);
    double best = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            if (g.radius_squared_cells(i, j) <= 1) continue;
            best = std::max(best, std::abs(u(i, j)) * std::pow(g.radius(i, j), exponent));
        }
    }
    return best / norm;
}

} // namespace snls
