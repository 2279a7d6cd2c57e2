#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "snls/error.hpp"

namespace snls {

using cplx = std::complex<double>;

/// Physical parameters: singularity exponent b and the derived strength
/// alpha = 2 pi (2 - b).
class PhysParams {
public:
    /// PDE parameters; b must lie in (0, 1).
    static PhysParams pde(double b) {
        if (!(b > 0.0 && b < 1.0)) {
            throw DomainError("phys.b=" + std::to_string(b) + " out of PDE range (0,1)");
        }
        return PhysParams(b);
    }

    /// Parameters for the functional-inequality probes; b in (0, 2).
    static PhysParams probe(double b) {
        if (!(b > 0.0 && b < 2.0)) {
            throw DomainError("b=" + std::to_string(b) + " outside (0,2)");
        }
        return PhysParams(b);
    }

    double b() const noexcept { return b_; }
    double alpha() const noexcept { return critical_alpha(b_); }

    static constexpr double critical_alpha(double b) noexcept { return 2.0 * std::numbers::pi * (2.0 - b); }

private:
    explicit PhysParams(double b) : b_(b) {}
    double b_;
};

/// Largest modulus the exponential terms accept; e^{alpha 400} overflows.
inline constexpr double amplitude_guard = 20.0;

namespace detail {

inline void check_amplitude(double modulus) {
    if (!(modulus <= amplitude_guard)) {
        throw NumericError("amplitude |u|=" + std::to_string(modulus) + " exceeds overflow guard " +
                           std::to_string(amplitude_guard));
    }
}

/// e^x - 1 - x without cancellation for small |x|.
inline double expm1_minus_x(double x) {
    if (std::abs(x) < 0.5) {
        double term = x * x / 2.0;
        double sum = term;
        for (int k = 3; k < 40; ++k) {
            term *= x / k;
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return std::expm1(x) - x;
}

} // namespace detail

/// g(z) = z (e^{alpha |z|^2} - 1).
inline cplx g(cplx z, double alpha) {
    const double m2 = std::norm(z);
    detail::check_amplitude(std::sqrt(m2));
    return z * std::expm1(alpha * m2);
}

/// f(x, z) = w(x) g(z).
inline cplx f(double weight, cplx z, double alpha) { return weight * g(z, alpha); }

/// Integrand of the potential energy, (e^{alpha|z|^2} - 1 - alpha|z|^2) / alpha.
inline double hamiltonian_density(cplx z, double alpha) {
    const double m2 = std::norm(z);
    detail::check_amplitude(std::sqrt(m2));
    return detail::expm1_minus_x(alpha * m2) / alpha;
}

struct DifferenceBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;

    /// lhs / rhs, or 0 when both vanish.
    double ratio() const noexcept { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0); }
};

/// Pointwise Lipschitz-type bound for g:
///   |g(z1) - g(z2)| <= C |z1 - z2| (e^{alpha(1+eps)|z1|^2} - 1 + e^{alpha(1+eps)|z2|^2} - 1).
/// The weight factor is common to both sides and omitted.
inline DifferenceBound difference_bound_check(cplx z1, cplx z2, double eps, double alpha, double constant) {
    if (!(eps > 0.0)) {
        throw DomainError("difference_bound_check requires eps > 0");
    }
    DifferenceBound out;
    out.lhs = std::abs(g(z1, alpha) - g(z2, alpha));
    const double s = alpha * (1.0 + eps);
    out.rhs = std::abs(z1 - z2) * (std::expm1(s * std::norm(z1)) + std::expm1(s * std::norm(z2)));
    out.holds = out.lhs <= constant * out.rhs;
    return out;
}

/// Constant for difference_bound_check: the largest observed lhs/rhs over a
/// deterministic sweep of pairs with |z| <= max_modulus, times 1.05.
/// The sweep covers moduli on an (m x m) lattice and relative phases in
/// [0, pi] (g is gauge covariant, so only the relative phase matters).
inline double calibrate_difference_constant(double eps, double alpha, double max_modulus, int lattice = 64,
                                            int phases = 16) {
    double worst = 0.0;
    for (int a = 1; a <= lattice; ++a) {
        const double r1 = max_modulus * a / lattice;
        for (int c = 0; c <= lattice; ++c) {
            const double r2 = max_modulus * c / lattice;
            for (int p = 0; p <= phases; ++p) {
                const double phase = std::numbers::pi * p / phases;
                const auto bound = difference_bound_check(cplx(r1, 0.0), std::polar(r2, phase), eps, alpha, 1.0);
                if (bound.rhs > 0.0) worst = std::max(worst, bound.ratio());
            }
        }
    }
    return 1.05 * worst;
}

} // namespace snls
