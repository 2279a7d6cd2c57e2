#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "snls/error.hpp"
#include "snls/fft.hpp"

namespace snls {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L, L)^2 with n points per axis.
///
/// Sample (i, j) sits at (x_i, y_j) = (-L + i h, -L + j h), so the origin is
/// the grid point (n/2, n/2). Wavenumbers use FFT ordering: storage index q
/// maps to k = (pi / L) m with m = q for q < n/2 and m = q - n otherwise.
class GridSpec {
public:
    int n() const noexcept { return n_; }
    double half_width() const noexcept { return half_width_; }
    double spacing() const noexcept { return 2.0 * half_width_ / n_; }
    double cell_area() const noexcept { return spacing() * spacing(); }
    double area() const noexcept { return 4.0 * half_width_ * half_width_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
    int origin_index() const noexcept { return n_ / 2; }

    double coordinate(int i) const noexcept { return -half_width_ + i * spacing(); }

    /// Signed integer mode number of FFT storage index q.
    int mode(int q) const noexcept { return q < n_ / 2 ? q : q - n_; }
    double wavenumber(int q) const noexcept { return std::numbers::pi / half_width_ * mode(q); }
    double wavenumber_spacing() const noexcept { return std::numbers::pi / half_width_; }

    /// Squared distance from the origin of cell (i, j) in units of h^2. Exact.
    std::int64_t radius_squared_cells(int i, int j) const noexcept {
        const std::int64_t di = i - origin_index();
        const std::int64_t dj = j - origin_index();
        return di * di + dj * dj;
    }

    double radius(int i, int j) const noexcept {
        return spacing() * std::sqrt(static_cast<double>(radius_squared_cells(i, j)));
    }

    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    GridSpec(int n, double half_width) : n_(n), half_width_(half_width) {}
    friend GridSpec make_grid(int n, double half_width);

    int n_;
    double half_width_;
};

/// Validated grid factory: n must be a power of two >= 8 and L > 0.
inline GridSpec make_grid(int n, double half_width) {
    if (n < 8 || !std::has_single_bit(static_cast<unsigned>(n))) {
        throw DomainError("grid size n=" + std::to_string(n) + " must be a power of two >= 8");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw DomainError("grid half-width L=" + std::to_string(half_width) + " must be positive");
    }
    return GridSpec(n, half_width);
}

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) {
        throw MismatchError(std::string("grid mismatch in ") + what + ": n=" + std::to_string(a.n()) + ", L=" +
                            std::to_string(a.half_width()) + " vs n=" + std::to_string(b.n()) +
                            ", L=" + std::to_string(b.half_width()));
    }
}

namespace detail {

template <class T>
class GridData {
public:
    explicit GridData(GridSpec grid) : grid_(grid), values_(grid.size()) {}

    GridData(GridSpec grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw MismatchError("sample count " + std::to_string(values_.size()) + " does not match grid n^2=" +
                                std::to_string(grid_.size()));
        }
    }

    const GridSpec& grid() const noexcept { return grid_; }
    int n() const noexcept { return grid_.n(); }
    std::size_t size() const noexcept { return values_.size(); }

    T operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    T& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }

    std::span<const T> values() const noexcept { return values_; }
    std::span<T> values() noexcept { return values_; }

    bool all_finite() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](const T& v) {
            if constexpr (std::is_same_v<T, cplx>) {
                return std::isfinite(v.real()) && std::isfinite(v.imag());
            } else {
                return std::isfinite(v);
            }
        });
    }

    /// Fill from a function of position f(x, y).
    template <class F>
    static GridData from_function(GridSpec grid, F&& f) {
        GridData out(grid);
        for (int i = 0; i < grid.n(); ++i) {
            const double x = grid.coordinate(i);
            for (int j = 0; j < grid.n(); ++j) {
                out(i, j) = static_cast<T>(f(x, grid.coordinate(j)));
            }
        }
        return out;
    }

    GridData scaled(T factor) const {
        GridData out(*this);
        for (auto& v : out.values_) v *= factor;
        return out;
    }

    /// Periodic shift by whole cells: out(i + di, j + dj) = in(i, j).
    GridData rolled(int di, int dj) const {
        GridData out(grid_);
        const int n = grid_.n();
        for (int i = 0; i < n; ++i) {
            const int ti = ((i + di) % n + n) % n;
            for (int j = 0; j < n; ++j) {
                out(ti, ((j + dj) % n + n) % n) = (*this)(i, j);
            }
        }
        return out;
    }

    friend GridData operator+(const GridData& a, const GridData& b) {
        require_same_grid(a.grid_, b.grid_, "field addition");
        GridData out(a);
        for (std::size_t k = 0; k < out.values_.size(); ++k) out.values_[k] += b.values_[k];
        return out;
    }

    friend GridData operator-(const GridData& a, const GridData& b) {
        require_same_grid(a.grid_, b.grid_, "field subtraction");
        GridData out(a);
        for (std::size_t k = 0; k < out.values_.size(); ++k) out.values_[k] -= b.values_[k];
        return out;
    }

private:
    GridSpec grid_;
    std::vector<T> values_;
};

} // namespace detail

/// Complex samples of u on a grid, row-major: value(i, j) = u(x_i, y_j).
using Field = detail::GridData<cplx>;

/// Real samples on a grid (moduli, weights, rearrangement inputs).
using RealField = detail::GridData<double>;

inline RealField modulus(const Field& u) {
    RealField out(u.grid());
    auto src = u.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::abs(src[k]);
    return out;
}

inline Field to_complex(const RealField& f) {
    Field out(f.grid());
    auto src = f.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k];
    return out;
}

// ---------------------------------------------------------------------------
// Spectral transforms

/// Continuum-normalized Fourier coefficients
///   c(k) = h^2 / (2 pi) sum_{i,j} u(x_i, y_j) e^{-i k.(x_i - x_0, y_j - x_0)},
/// phases measured from the corner x_0 = -L. With this scaling
/// sum_k |c(k)|^2 dk^2 equals the grid L^2 norm squared.
class SpectralField {
public:
    SpectralField(GridSpec grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != grid_.size()) {
            throw MismatchError("coefficient count does not match grid");
        }
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const cplx> coefficients() const noexcept { return coeffs_; }
    std::span<cplx> coefficients() noexcept { return coeffs_; }

    /// Coefficient at FFT storage index (p, q).
    cplx operator()(int p, int q) const noexcept { return coeffs_[grid_.index(p, q)]; }

    double l2() const noexcept {
        double sum = 0.0;
        for (const auto& c : coeffs_) sum += std::norm(c);
        const double dk = grid_.wavenumber_spacing();
        return std::sqrt(sum * dk * dk);
    }

    static double normalization(const GridSpec& g) noexcept {
        return g.cell_area() / (2.0 * std::numbers::pi);
    }

private:
    GridSpec grid_;
    std::vector<cplx> coeffs_;
};

inline SpectralField forward_transform(const Field& f) {
    std::vector<cplx> out(f.size());
    detail::plan_for(f.n()).forward(f.values(), out);
    const double scale = SpectralField::normalization(f.grid());
    for (auto& c : out) c *= scale;
    return SpectralField(f.grid(), std::move(out));
}

inline Field inverse_transform(const SpectralField& s) {
    const auto& g = s.grid();
    std::vector<cplx> out(g.size());
    detail::plan_for(g.n()).backward(s.coefficients(), out);
    // inverse of h^2/(2 pi) * FFT is (2 pi / h^2) * IFFT / n^2
    const double scale = 1.0 / (SpectralField::normalization(g) * static_cast<double>(g.size()));
    for (auto& v : out) v *= scale;
    return Field(g, std::move(out));
}

/// Inverse transform onto a caller-specified grid; throws on mismatch.
inline Field inverse_transform(const SpectralField& s, const GridSpec& target) {
    require_same_grid(s.grid(), target, "inverse_transform");
    return inverse_transform(s);
}

namespace detail {

/// Raw unnormalized FFT of the samples.
inline std::vector<cplx> raw_spectrum(const Field& f) {
    std::vector<cplx> out(f.size());
    plan_for(f.n()).forward(f.values(), out);
    return out;
}

/// Apply a Fourier multiplier m(kx, ky) to f: IFFT(m * FFT(f)).
template <class Multiplier>
Field apply_multiplier(const Field& f, Multiplier&& m) {
    const auto& g = f.grid();
    const int n = g.n();
    auto spec = raw_spectrum(f);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (int p = 0; p < n; ++p) {
        const double kx = g.wavenumber(p);
        for (int q = 0; q < n; ++q) {
            spec[g.index(p, q)] *= m(kx, g.wavenumber(q)) * inv;
        }
    }
    Field out(g);
    plan_for(n).backward(spec, out.values());
    return out;
}

} // namespace detail

/// Spectral partial derivatives (d/dx, d/dy).
inline std::pair<Field, Field> gradient(const Field& f) {
    const cplx i{0.0, 1.0};
    return {detail::apply_multiplier(f, [&](double kx, double) { return i * kx; }),
            detail::apply_multiplier(f, [&](double, double ky) { return i * ky; })};
}

// ---------------------------------------------------------------------------
// Quadrature

/// Periodic rectangle rule h^2 * sum of samples.
inline double quadrature(const RealField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum * f.grid().cell_area();
}

inline cplx quadrature(const Field& f) {
    cplx sum{0.0, 0.0};
    for (const auto& v : f.values()) sum += v;
    return sum * f.grid().cell_area();
}

// ---------------------------------------------------------------------------
// Norms

inline double l2_norm(const Field& f) {
    double sum = 0.0;
    for (const auto& v : f.values()) sum += std::norm(v);
    return std::sqrt(sum * f.grid().cell_area());
}

/// ||grad f||_{L^2}, computed spectrally: sum |k|^2 |c(k)|^2 dk^2.
inline double grad_l2_norm(const Field& f) {
    const auto& g = f.grid();
    const auto spec = detail::raw_spectrum(f);
    double sum = 0.0;
    for (int p = 0; p < g.n(); ++p) {
        const double kx = g.wavenumber(p);
        for (int q = 0; q < g.n(); ++q) {
            const double ky = g.wavenumber(q);
            sum += (kx * kx + ky * ky) * std::norm(spec[g.index(p, q)]);
        }
    }
    // Parseval for the unnormalized FFT: h^2 sum |u|^2 = h^2 / n^2 sum |U|^2
    return std::sqrt(sum * g.cell_area() / static_cast<double>(g.size()));
}

/// ||f||_{H_mu} = sqrt(||grad f||^2 + mu^2 ||f||^2); mu = 1 gives the H^1 norm.
inline double h_mu_norm(const Field& f, double mu) {
    const double grad = grad_l2_norm(f);
    const double l2 = l2_norm(f);
    return std::sqrt(grad * grad + mu * mu * l2 * l2);
}

inline double h1_norm(const Field& f) { return h_mu_norm(f, 1.0); }

inline double linf_norm(const Field& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) {
        throw DomainError("lp_norm requires p >= 1, got " + std::to_string(p));
    }
    double sum = 0.0;
    for (const auto& v : f.values()) sum += std::pow(std::abs(v), p);
    return std::pow(sum * f.grid().cell_area(), 1.0 / p);
}

inline constexpr std::uint64_t default_holder_seed = 0x5eed'4a1d'2b0cULL;

/// Estimate of sup |u(x) - u(y)| / |x - y|^beta.
///
/// Exact over all pairs whose index offsets are within 8 cells per axis, plus
/// 10 n uniformly drawn far pairs from a seeded generator. Pairs are not
/// wrapped periodically.
inline double holder_seminorm(const Field& f, double beta, std::uint64_t seed = default_holder_seed) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw DomainError("holder_seminorm requires beta in (0, 1], got " + std::to_string(beta));
    }
    constexpr int window = 8;
    const auto& g = f.grid();
    const int n = g.n();
    const double h = g.spacing();

    // |x - y|^-beta for every in-window offset, (di, dj) with di in [0, w]
    std::vector<double> inv_dist((window + 1) * (2 * window + 1));
    for (int di = 0; di <= window; ++di) {
        for (int dj = -window; dj <= window; ++dj) {
            const double d = h * std::sqrt(double(di * di + dj * dj));
            inv_dist[di * (2 * window + 1) + (dj + window)] = d > 0.0 ? std::pow(d, -beta) : 0.0;
        }
    }

    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const cplx a = f(i, j);
            for (int di = 0; di <= window && i + di < n; ++di) {
                const int dj_lo = di == 0 ? 1 : std::max(-window, -j);
                const int dj_hi = std::min(window, n - 1 - j);
                for (int dj = dj_lo; dj <= dj_hi; ++dj) {
                    const double ratio = std::abs(a - f(i + di, j + dj)) * inv_dist[di * (2 * window + 1) + (dj + window)];
                    best = std::max(best, ratio);
                }
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int s = 0; s < 10 * n; ++s) {
        const int i1 = pick(rng), j1 = pick(rng), i2 = pick(rng), j2 = pick(rng);
        const int di = i1 - i2, dj = j1 - j2;
        if (di == 0 && dj == 0) continue;
        const double d = h * std::sqrt(double(di * di + dj * dj));
        best = std::max(best, std::abs(f(i1, j1) - f(i2, j2)) / std::pow(d, beta));
    }
    return best;
}

/// ||u||_{C^beta} = ||u||_inf + holder seminorm.
inline double holder_norm(const Field& f, double beta, std::uint64_t seed = default_holder_seed) {
    return linf_norm(f) + holder_seminorm(f, beta, seed);
}

struct Norms {
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
};

inline Norms norms(const Field& f) {
    Norms out;
    out.l2 = l2_norm(f);
    out.grad_l2 = grad_l2_norm(f);
    out.h1 = std::sqrt(out.l2 * out.l2 + out.grad_l2 * out.grad_l2);
    out.linf = linf_norm(f);
    return out;
}

// ---------------------------------------------------------------------------
// Singular weight |x|^-b

namespace detail {

/// (1/h^2) * integral of |x|^-b over the origin cell [-h/2, h/2]^2 minus the
/// disk of radius r_min * h. Radial integral in closed form, polar angle by
/// Gauss-Kronrod over one of the eight symmetric triangles.
inline double origin_cell_average(double h, double b, double r_min = 0.0) {
    auto radial = [&](double theta) {
        const double outer = 0.5 / std::cos(theta);
        if (std::abs(2.0 - b) < 1e-14) {
            return std::log(outer / r_min);
        }
        const double e = 2.0 - b;
        const double inner = r_min > 0.0 ? std::pow(r_min, e) : 0.0;
        return (std::pow(outer, e) - inner) / e;
    };
    using boost::math::quadrature::gauss_kronrod;
    const double unit = 8.0 * gauss_kronrod<double, 31>::integrate(radial, 0.0, std::numbers::pi / 4.0, 15, 1e-14);
    return unit * std::pow(h, -b);
}

inline std::vector<double> weight_values(const GridSpec& g, double b, double origin_value) {
    std::vector<double> values(g.size());
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            const std::int64_t r2 = g.radius_squared_cells(i, j);
            values[g.index(i, j)] =
                r2 == 0 ? origin_value : std::pow(g.spacing() * std::sqrt(static_cast<double>(r2)), -b);
        }
    }
    return values;
}

} // namespace detail

/// Grid samples of |x|^-b: pointwise except the origin cell, which holds the
/// exact cell average.
class SingularWeight {
public:
    const GridSpec& grid() const noexcept { return field_.grid(); }
    double exponent() const noexcept { return b_; }
    std::span<const double> values() const noexcept { return field_.values(); }
    double operator()(int i, int j) const noexcept { return field_(i, j); }
    const RealField& field() const noexcept { return field_; }

    /// Weight multiplied by a constant (c = 0 switches the nonlinearity off).
    SingularWeight scaled(double c) const { return SingularWeight(b_, field_.scaled(c)); }

    /// Weight re-centered by whole cells, matching a field rolled by (di, dj).
    SingularWeight rolled(int di, int dj) const { return SingularWeight(b_, field_.rolled(di, dj)); }

private:
    SingularWeight(double b, RealField field) : b_(b), field_(std::move(field)) {}
    friend SingularWeight make_singular_weight(const GridSpec&, double);
    friend SingularWeight make_truncated_weight(const GridSpec&, double);

    double b_;
    RealField field_;
};

inline SingularWeight make_singular_weight(const GridSpec& grid, double b) {
    if (!(b > 0.0 && b < 2.0)) {
        throw DomainError("weight exponent b=" + std::to_string(b) + " outside (0, 2)");
    }
    const double origin = detail::origin_cell_average(grid.spacing(), b);
    return SingularWeight(b, RealField(grid, detail::weight_values(grid, b, origin)));
}

/// Weight for any b > 0, including the non-integrable range b >= 2: the
/// origin cell averages |x|^-b only over the part of the cell outside the
/// inscribed disk of radius h/2. For b < 2 prefer make_singular_weight.
inline SingularWeight make_truncated_weight(const GridSpec& grid, double b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw DomainError("weight exponent b=" + std::to_string(b) + " must be positive");
    }
    const double origin = detail::origin_cell_average(grid.spacing(), b, 0.5);
    return SingularWeight(b, RealField(grid, detail::weight_values(grid, b, origin)));
}

/// Fraction of each cell covered by the disk |x| <= radius, by s x s
/// supersampling of cells that straddle the boundary.
inline RealField disk_indicator(const GridSpec& grid, double radius, int supersample = 16) {
    RealField out(grid);
    const double h = grid.spacing();
    const double half_diag = h * std::numbers::sqrt2 / 2.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double x = grid.coordinate(i);
        for (int j = 0; j < grid.n(); ++j) {
            const double y = grid.coordinate(j);
            const double r = std::hypot(x, y);
            if (r + half_diag <= radius) {
                out(i, j) = 1.0;
            } else if (r - half_diag >= radius) {
                out(i, j) = 0.0;
            } else {
                int inside = 0;
                for (int a = 0; a < supersample; ++a) {
                    const double sx = x + h * ((a + 0.5) / supersample - 0.5);
                    for (int c = 0; c < supersample; ++c) {
                        const double sy = y + h * ((c + 0.5) / supersample - 0.5);
                        inside += (sx * sx + sy * sy <= radius * radius) ? 1 : 0;
                    }
                }
                out(i, j) = double(inside) / double(supersample * supersample);
            }
        }
    }
    return out;
}

/// Grid integral of w * f.
inline double weighted_quadrature(const SingularWeight& w, const RealField& f) {
    require_same_grid(w.grid(), f.grid(), "weighted_quadrature");
    double sum = 0.0;
    auto wv = w.values();
    auto fv = f.values();
    for (std::size_t k = 0; k < fv.size(); ++k) sum += wv[k] * fv[k];
    return sum * f.grid().cell_area();
}

} // namespace snls
