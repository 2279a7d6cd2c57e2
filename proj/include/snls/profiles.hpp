#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "snls/grid.hpp"

namespace snls {

/// A exp(-|x - c|^2 / (2 s^2)).
inline Field gaussian(const GridSpec& grid, double amplitude, double cx = 0.0, double cy = 0.0, double width = 1.0) {
    const double inv = 1.0 / (2.0 * width * width);
    return Field::from_function(grid, [&](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        return cplx(amplitude * std::exp(-(dx * dx + dy * dy) * inv), 0.0);
    });
}

/// A exp(-(|x| - R)^2 / (2 s^2)): radially symmetric ring.
inline Field ring(const GridSpec& grid, double amplitude, double radius = 2.0, double width = 0.5) {
    const double inv = 1.0 / (2.0 * width * width);
    return Field::from_function(grid, [&](double x, double y) {
        const double d = std::hypot(x, y) - radius;
        return cplx(amplitude * std::exp(-d * d * inv), 0.0);
    });
}

/// a e^{i k.x} with k = (pi/L)(mx, my). Exact Fourier mode of the grid.
inline Field plane_wave(const GridSpec& grid, int mx, int my, double amplitude = 1.0) {
    const double kx = grid.wavenumber_spacing() * mx;
    const double ky = grid.wavenumber_spacing() * my;
    return Field::from_function(grid, [&](double x, double y) { return std::polar(amplitude, kx * x + ky * y); });
}

/// Random band-limited field: modes |m_x|, |m_y| <= max_mode carry complex
/// Gaussian coefficients with a Gaussian envelope in |m|. Seeded and
/// deterministic for a fixed standard library.
inline Field random_band_limited(const GridSpec& grid, int max_mode, std::uint64_t seed) {
    const int n = grid.n();
    if (max_mode < 1 || max_mode >= n / 2) {
        throw DomainError("random_band_limited: max_mode must lie in [1, n/2)");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> spec(grid.size(), cplx{0.0, 0.0});
    const double sigma = 0.5 * max_mode;
    for (int mx = -max_mode; mx <= max_mode; ++mx) {
        for (int my = -max_mode; my <= max_mode; ++my) {
            const double envelope = std::exp(-double(mx * mx + my * my) / (2.0 * sigma * sigma));
            const double re = normal(rng);
            const double im = normal(rng);
            const int p = (mx + n) % n, q = (my + n) % n;
            spec[grid.index(p, q)] = envelope * cplx(re, im);
        }
    }
    Field out(grid);
    detail::plan_for(n).backward(spec, out.values());
    return out;
}

/// Rescale so that ||u||_{H^1} = 1 (zero stays zero).
inline Field normalized_h1(const Field& u) {
    const double norm = h1_norm(u);
    return norm > 0.0 ? u.scaled(1.0 / norm) : u;
}

} // namespace snls
