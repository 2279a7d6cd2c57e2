#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "snls/evolve.hpp"
#include "snls/functionals.hpp"
#include "snls/grid.hpp"
#include "snls/profiles.hpp"

namespace snls {

/// Integral of |u|^2 over the cells whose centers lie in the closed ball B(R).
inline double ball_mass(const Field& u, double radius) {
    const auto& g = u.grid();
    const double r2 = radius * radius;
    double sum = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            const double d = g.radius(i, j);
            if (d * d <= r2) sum += std::norm(u(i, j));
        }
    }
    return sum * g.cell_area();
}

struct ObservableRecord {
    double t = 0.0;
    double mass = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double hamiltonian = 0.0;
    double linf = 0.0;
    double grad_l2 = 0.0;
    double quartic_weighted = 0.0; ///< int w |u|^4
    double holder_half = 0.0;      ///< discrete C^{1/2} seminorm
    double localized_mass = 0.0;   ///< int_{B(R)} |u|^2, R = series radius
    double scattering_cauchy = 0.0; ///< ||e^{-it Delta}u(t) - previous pullback||_{H^1}; 0 on the first record
};

/// Time-indexed diagnostics of one trajectory.
class ObservableSeries {
public:
    explicit ObservableSeries(double localized_radius = 0.0) : localized_radius_(localized_radius) {}

    double localized_radius() const noexcept { return localized_radius_; }
    const std::vector<ObservableRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }

    void append(const ObservableRecord& r) {
        if (!records_.empty() && !(r.t > records_.back().t)) {
            throw DomainError("ObservableSeries: times must be strictly increasing");
        }
        records_.push_back(r);
    }

    std::vector<double> times() const {
        std::vector<double> out;
        for (const auto& r : records_) out.push_back(r.t);
        return out;
    }

    static constexpr const char* csv_header =
        "t,mass,kinetic,potential,hamiltonian,linf,grad_l2,quartic_weighted,holder_half,localized_mass,"
        "scattering_cauchy";

    void write_csv(std::ostream& os) const {
        os << csv_header << '\n';
        char buf[512];
        for (const auto& r : records_) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                          r.mass, r.kinetic, r.potential, r.hamiltonian, r.linf, r.grad_l2, r.quartic_weighted,
                          r.holder_half, r.localized_mass, r.scattering_cauchy);
            os << buf;
        }
    }

private:
    double localized_radius_;
    std::vector<ObservableRecord> records_;
};

/// Builds an ObservableSeries from trajectory snapshots, keeping the previous
/// pullback e^{-it Delta} u(t) for the scattering column.
class SeriesRecorder {
public:
    SeriesRecorder(SingularWeight w, PhysParams p, double localized_radius, bool with_holder = true)
        : weight_(std::move(w)), params_(p), series_(localized_radius), with_holder_(with_holder) {}

    // Move-only: a copy handed to evolve() would record into the copy. Pass std::ref.
    SeriesRecorder(const SeriesRecorder&) = delete;
    SeriesRecorder& operator=(const SeriesRecorder&) = delete;
    SeriesRecorder(SeriesRecorder&&) = default;
    SeriesRecorder& operator=(SeriesRecorder&&) = default;

    void operator()(const TrajectoryState& s) { record(s.u, s.t); }

    void record(const Field& u, double t) {
        const auto energy = hamiltonian(u, weight_, params_);
        ObservableRecord r;
        r.t = t;
        r.mass = energy.mass;
        r.kinetic = energy.kinetic;
        r.potential = energy.potential;
        r.hamiltonian = energy.hamiltonian;
        r.linf = linf_norm(u);
        r.grad_l2 = std::sqrt(energy.kinetic);
        r.quartic_weighted = weighted_quartic(u, weight_);
        r.holder_half = with_holder_ ? holder_seminorm(u, 0.5) : 0.0;
        r.localized_mass = ball_mass(u, series_.localized_radius());
        Field pullback = linear_propagator(u, -t);
        r.scattering_cauchy = previous_pullback_ ? h1_norm(pullback - *previous_pullback_) : 0.0;
        previous_pullback_ = std::move(pullback);
        series_.append(r);
    }

    const ObservableSeries& series() const noexcept { return series_; }

private:
    SingularWeight weight_;
    PhysParams params_;
    ObservableSeries series_;
    bool with_holder_;
    std::optional<Field> previous_pullback_;
};

// ---------------------------------------------------------------------------
// Monitors

struct LocalizedMassViolation {
    double t;
    double lhs; ///< int_{B(S+S')} |u(t)|^2
    double rhs; ///< int_{B(S)} |u0|^2 - C(E) t / S'
};

/// Localized mass lower bound with C(E) = 2E:
///   int_{B(S+S')} |u(t)|^2 >= int_{B(S)} |u0|^2 - 2E t / S'.
/// The series must have been recorded with localized radius S + S'.
inline std::vector<LocalizedMassViolation> localized_mass_monitor(const ObservableSeries& series, const Field& u0,
                                                                  double S, double Sp, double E,
                                                                  double slack = 1e-8) {
    if (!(S > 0.0 && Sp > 0.0)) throw DomainError("localized_mass_monitor requires S, S' > 0");
    if (std::abs(series.localized_radius() - (S + Sp)) > 1e-12 * (S + Sp)) {
        throw MismatchError("series localized radius " + std::to_string(series.localized_radius()) +
                            " differs from S + S' = " + std::to_string(S + Sp));
    }
    const double initial = ball_mass(u0, S);
    const double c_e = 2.0 * E;
    std::vector<LocalizedMassViolation> out;
    for (const auto& r : series.records()) {
        const double bound = initial - c_e * r.t / Sp;
        if (r.localized_mass < bound - slack) out.push_back({r.t, r.localized_mass, bound});
    }
    return out;
}

struct ConcentrationReport {
    double sup_grad = 0.0;
    double min_quartic = 0.0;
    double max_coupled = 0.0; ///< max_t int w|u|^4 + ||grad u||^2
    bool coupled_bound_ok = true;
};

/// sup_t ||grad u||, min_t int w|u|^4 and the bound int w|u|^4 + ||grad u||^2 <= 1 + tol.
inline ConcentrationReport concentration_monitor(const ObservableSeries& series, double tolerance = 1e-6) {
    ConcentrationReport out;
    if (series.empty()) return out;
    out.min_quartic = std::numeric_limits<double>::infinity();
    for (const auto& r : series.records()) {
        out.sup_grad = std::max(out.sup_grad, r.grad_l2);
        out.min_quartic = std::min(out.min_quartic, r.quartic_weighted);
        out.max_coupled = std::max(out.max_coupled, r.quartic_weighted + r.grad_l2 * r.grad_l2);
    }
    out.coupled_bound_ok = out.max_coupled <= 1.0 + tolerance;
    return out;
}

/// Consecutive H^1 distances between pullbacks e^{-i t_k Delta} u(t_k).
/// A shrinking sequence is consistent with scattering; it is not a proof.
inline std::vector<double> scattering_diagnostic(const std::vector<TrajectoryState>& snapshots) {
    std::vector<double> out;
    std::optional<Field> previous;
    for (const auto& s : snapshots) {
        Field pullback = linear_propagator(s.u, -s.t);
        if (previous) out.push_back(h1_norm(pullback - *previous));
        previous = std::move(pullback);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Strichartz probe, admissible pair (q, r) = (4, 4)

namespace detail {

// ||u||_{L^4} + ||grad u||_{L^4} from the raw (unnormalized) spectrum.
inline double w14_norm_from_spectrum(std::span<const cplx> raw, const GridSpec& g, std::vector<cplx>& scratch_u,
                                     std::vector<cplx>& scratch_dx, std::vector<cplx>& scratch_dy) {
    const auto& plan = plan_for(g.n());
    const std::size_t size = g.size();
    const double inv = 1.0 / static_cast<double>(size);
    std::vector<cplx> dx(size), dy(size);
    for (int a = 0; a < g.n(); ++a) {
        const double kx = g.wavenumber(a);
        for (int c = 0; c < g.n(); ++c) {
            const double ky = g.wavenumber(c);
            const auto idx = g.index(a, c);
            dx[idx] = cplx(0.0, kx) * raw[idx];
            dy[idx] = cplx(0.0, ky) * raw[idx];
        }
    }
    plan.backward(raw, scratch_u);
    plan.backward(dx, scratch_dx);
    plan.backward(dy, scratch_dy);
    double su = 0.0, sg = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
        const double mu = std::norm(scratch_u[k]) * inv * inv;
        const double mg = (std::norm(scratch_dx[k]) + std::norm(scratch_dy[k])) * inv * inv;
        su += mu * mu;
        sg += mg * mg;
    }
    const double cell = g.cell_area();
    return std::pow(su * cell, 0.25) + std::pow(sg * cell, 0.25);
}

} // namespace detail

/// ||e^{it Delta} u0||_{L^4([0,T], W^{1,4})} by the trapezoid rule on
/// `time_samples` + 1 equally spaced times.
inline double strichartz_norm(const Field& u0, double t_final, int time_samples = 64) {
    if (!(t_final > 0.0) || time_samples < 1) throw DomainError("strichartz_norm requires T > 0 and samples >= 1");
    const auto& g = u0.grid();
    const std::size_t size = g.size();
    std::vector<cplx> raw(size), evolved(size), su(size), sx(size), sy(size);
    detail::plan_for(g.n()).forward(u0.values(), raw);
    std::vector<double> k2(size);
    for (int a = 0; a < g.n(); ++a) {
        for (int c = 0; c < g.n(); ++c) {
            const double kx = g.wavenumber(a), ky = g.wavenumber(c);
            k2[g.index(a, c)] = kx * kx + ky * ky;
        }
    }
    const double dt = t_final / time_samples;
    double integral = 0.0;
    for (int s = 0; s <= time_samples; ++s) {
        const double t = s * dt;
        for (std::size_t k = 0; k < size; ++k) evolved[k] = raw[k] * std::polar(1.0, -k2[k] * t);
        const double norm = detail::w14_norm_from_spectrum(evolved, g, su, sx, sy);
        const double weight = (s == 0 || s == time_samples) ? 0.5 : 1.0;
        integral += weight * std::pow(norm, 4.0);
    }
    return std::pow(integral * dt, 0.25);
}

struct StrichartzProbe {
    std::vector<double> ratios;
    double max_ratio = 0.0;
};

/// Ratio strichartz_norm / ||u0||_{H^1} over `ensemble_size` seeded random
/// band-limited fields of unit H^1 norm.
inline StrichartzProbe strichartz_probe(int ensemble_size, const GridSpec& grid, double t_final, std::uint64_t seed,
                                        int max_mode = 6, int time_samples = 64) {
    if (ensemble_size < 1) throw DomainError("strichartz_probe requires ensemble_size >= 1");
    StrichartzProbe out;
    std::mt19937_64 seeds(seed);
    for (int e = 0; e < ensemble_size; ++e) {
        const Field u0 = normalized_h1(random_band_limited(grid, max_mode, seeds()));
        const double norm = h1_norm(u0);
        if (norm == 0.0) continue;
        const double ratio = strichartz_norm(u0, t_final, time_samples) / norm;
        out.ratios.push_back(ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    return out;
}

} // namespace snls
