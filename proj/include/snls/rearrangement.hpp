#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

// Every operation here acts on nonnegative real grid data. For a complex
// field pass modulus(u).

namespace detail {

inline void require_nonnegative(const RealField& u, const char* what) {
    for (double v : u.values()) {
        if (v < 0.0 || std::isnan(v)) {
            throw DomainError(std::string(what) + ": negative or NaN value " + std::to_string(v));
        }
    }
}

inline std::vector<double> sorted_descending(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// Cell indices ordered by distance from the origin, ties by row-major index.
inline std::vector<std::size_t> cells_by_radius(const GridSpec& g) {
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const int n = g.n();
    std::vector<std::int64_t> key(g.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) key[g.index(i, j)] = g.radius_squared_cells(i, j);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    return order;
}

} // namespace detail

/// mu_u(t) = |{u > t}|, as h^2 times the number of cells above t.
inline double distribution_function(const RealField& u, double t) {
    const auto count = std::count_if(u.values().begin(), u.values().end(), [t](double v) { return v > t; });
    return static_cast<double>(count) * u.grid().cell_area();
}

/// Decreasing rearrangement u^# as a right-continuous step function on
/// [0, total_measure): value levels strictly decreasing, each with the measure
/// of the cells carrying it.
class RearrangedProfile {
public:
    struct Level {
        double value;
        double measure;
    };

    explicit RearrangedProfile(std::vector<Level> levels) : levels_(std::move(levels)) {
        for (const auto& l : levels_) total_ += l.measure;
    }

    const std::vector<Level>& levels() const noexcept { return levels_; }
    double total_measure() const noexcept { return total_; }

    /// u^#(s) = inf{t : mu_u(t) < s}; zero beyond the total measure.
    double operator()(double s) const {
        double acc = 0.0;
        for (const auto& l : levels_) {
            acc += l.measure;
            if (s < acc) return l.value;
        }
        return 0.0;
    }

    /// Measure of {u^# > t}; equals the source's distribution function.
    double distribution(double t) const {
        double acc = 0.0;
        for (const auto& l : levels_) {
            if (l.value > t) acc += l.measure;
        }
        return acc;
    }

private:
    std::vector<Level> levels_;
    double total_ = 0.0;
};

inline RearrangedProfile decreasing_rearrangement(const RealField& u) {
    detail::require_nonnegative(u, "decreasing_rearrangement");
    const auto sorted = detail::sorted_descending(u.values());
    const double cell = u.grid().cell_area();
    std::vector<RearrangedProfile::Level> levels;
    for (double v : sorted) {
        if (!levels.empty() && levels.back().value == v) {
            levels.back().measure += cell;
        } else {
            levels.push_back({v, cell});
        }
    }
    return RearrangedProfile(std::move(levels));
}

/// Discrete Schwarz symmetrization u*(x) = u^#(pi |x|^2): the sorted cell
/// values are laid out on cells ordered by distance from the origin.
inline RealField schwarz_symmetrization(const RealField& u) {
    detail::require_nonnegative(u, "schwarz_symmetrization");
    const auto sorted = detail::sorted_descending(u.values());
    const auto order = detail::cells_by_radius(u.grid());
    RealField out(u.grid());
    auto dst = out.values();
    for (std::size_t k = 0; k < order.size(); ++k) dst[order[k]] = sorted[k];
    return out;
}

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// int f g <= int f* g*, evaluated with the sorted-descending pairing of
/// cell values on the right.
inline InequalityCheck hardy_littlewood_check(const RealField& f, const RealField& g) {
    require_same_grid(f.grid(), g.grid(), "hardy_littlewood_check");
    detail::require_nonnegative(f, "hardy_littlewood_check");
    detail::require_nonnegative(g, "hardy_littlewood_check");
    const double cell = f.grid().cell_area();
    InequalityCheck out;
    auto fv = f.values();
    auto gv = g.values();
    for (std::size_t k = 0; k < fv.size(); ++k) out.lhs += fv[k] * gv[k];
    out.lhs *= cell;
    const auto fs = detail::sorted_descending(fv);
    const auto gs = detail::sorted_descending(gv);
    for (std::size_t k = 0; k < fs.size(); ++k) out.rhs += fs[k] * gs[k];
    out.rhs *= cell;
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

/// ||grad u||_{L^2}^2 with centered differences on the periodic grid.
inline double centered_gradient_energy(const RealField& u) {
    const auto& g = u.grid();
    const int n = g.n();
    const double inv2h = 1.0 / (2.0 * g.spacing());
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n;
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1) % n, jm = (j + n - 1) % n;
            const double dx = (u(ip, j) - u(im, j)) * inv2h;
            const double dy = (u(i, jp) - u(i, jm)) * inv2h;
            sum += dx * dx + dy * dy;
        }
    }
    return sum * g.cell_area();
}

inline constexpr double polya_szego_tolerance = 0.05;

struct PolyaSzegoCheck {
    double grad_before = 0.0; ///< ||grad u||^2
    double grad_after = 0.0;  ///< ||grad u*||^2
    bool holds = false;

    /// Relative excess of grad_after over grad_before (<= 0 when it decreased).
    double excess() const noexcept { return grad_before > 0.0 ? grad_after / grad_before - 1.0 : 0.0; }
};

/// ||grad u*||^2 <= (1 + tol) ||grad u||^2 with finite-difference gradients.
inline PolyaSzegoCheck polya_szego_check(const RealField& u, double tolerance = polya_szego_tolerance) {
    PolyaSzegoCheck out;
    out.grad_before = centered_gradient_energy(u);
    out.grad_after = centered_gradient_energy(schwarz_symmetrization(u));
    out.holds = out.grad_after <= out.grad_before * (1.0 + tolerance);
    return out;
}

/// Decreasing rearrangement of |x|^-b on a disk of area s_max: pi^{b/2} s^{-b/2}.
inline double weight_rearrangement_exact(double b, double s) {
    return std::pow(std::numbers::pi, b / 2.0) * std::pow(s, -b / 2.0);
}

struct WeightRearrangement {
    std::vector<double> s;
    std::vector<double> discrete;
    std::vector<double> exact;
    double max_relative_error = 0.0;
};

/// Compares the rearranged SingularWeight with pi^{b/2} s^{-b/2} on
/// `samples` log-spaced points of [s_min, pi R^2].
inline WeightRearrangement weight_rearrangement(const GridSpec& grid, double b, double domain_radius,
                                                double s_min = 0.1, int samples = 200) {
    if (domain_radius > grid.half_width()) {
        throw DomainError("weight_rearrangement: disk radius exceeds the grid half-width");
    }
    const auto w = make_singular_weight(grid, b);
    const auto sorted = detail::sorted_descending(w.values());
    const double cell = grid.cell_area();
    const double s_max = std::numbers::pi * domain_radius * domain_radius;

    WeightRearrangement out;
    for (int k = 0; k < samples; ++k) {
        const double s = s_min * std::pow(s_max / s_min, double(k) / (samples - 1));
        const auto idx = std::min(static_cast<std::size_t>(s / cell), sorted.size() - 1);
        const double exact = weight_rearrangement_exact(b, s);
        out.s.push_back(s);
        out.discrete.push_back(sorted[idx]);
        out.exact.push_back(exact);
        out.max_relative_error = std::max(out.max_relative_error, std::abs(sorted[idx] - exact) / exact);
    }
    return out;
}

} // namespace snls
