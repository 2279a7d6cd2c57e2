#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "snls/nonlinearity.hpp"

using namespace snls;
using std::numbers::pi;

namespace {

const double alpha_half = PhysParams::pde(0.5).alpha(); // 3 pi

// (e^{x} - 1 - x) / alpha by its Taylor series in long double.
long double density_series(long double m2, long double alpha) {
    const long double x = alpha * m2;
    long double term = x * x / 2.0L, sum = 0.0L;
    for (int k = 3; std::abs(term) > 1e-30L * std::abs(sum) || k < 6; ++k) {
        sum += term;
        term *= x / k;
    }
    return sum / alpha;
}

// Limit of |g(z1) - g(z2)| / rhs as z2 -> z1 along the radius, at x = alpha|z|^2:
// (e^x (1 + 2x) - 1) / (2 (e^{(1+eps)x} - 1)).
double radial_limit_ratio(double x, double eps) {
    return (std::exp(x) * (1.0 + 2.0 * x) - 1.0) / (2.0 * std::expm1((1.0 + eps) * x));
}

} // namespace

TEST(PhysParams, AlphaFromExponent) {
    EXPECT_DOUBLE_EQ(PhysParams::pde(0.5).alpha(), 3.0 * pi);
    EXPECT_DOUBLE_EQ(PhysParams::pde(0.25).alpha(), 2.0 * pi * 1.75);
    EXPECT_DOUBLE_EQ(PhysParams::critical_alpha(0.75), 2.5 * pi);
    EXPECT_DOUBLE_EQ(PhysParams::probe(1.5).alpha(), pi);
}

TEST(PhysParams, PdeRangeEnforced) {
    EXPECT_THROW(PhysParams::pde(0.0), DomainError);
    EXPECT_THROW(PhysParams::pde(1.0), DomainError);
    try {
        PhysParams::pde(1.5);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("out of PDE range (0,1)"), std::string::npos);
    }
    EXPECT_NO_THROW(PhysParams::probe(1.9));
    EXPECT_THROW(PhysParams::probe(2.0), DomainError);
}

TEST(G, ZeroAndForcedFixedPoint) {
    EXPECT_EQ(g(cplx(0.0, 0.0), alpha_half), cplx(0.0, 0.0));
    // |z|^2 = ln 2 / alpha makes e^{alpha|z|^2} - 1 = 1
    const cplx z = std::polar(std::sqrt(std::log(2.0) / alpha_half), 0.7);
    EXPECT_LT(std::abs(g(z, alpha_half) - z), 1e-15);
}

TEST(G, SmallAmplitudeTaylor) {
    const cplx z = std::polar(1e-4, -1.1);
    const double m2 = std::norm(z);
    const cplx ratio = g(z, alpha_half) / z;
    const double taylor = alpha_half * m2 + alpha_half * alpha_half * m2 * m2 / 2.0;
    EXPECT_LT(std::abs(ratio.imag()), 1e-20);
    EXPECT_LT(std::abs(ratio.real() - taylor) / taylor, 1e-10);
    // dropping the quadratic term leaves a relative error O(|z|^2)
    EXPECT_NEAR((ratio.real() - alpha_half * m2) / (alpha_half * m2), alpha_half * m2 / 2.0, 1e-14);
}

TEST(G, GaugeCovariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mod(0.0, 1.5), ang(-pi, pi);
    for (int s = 0; s < 1000; ++s) {
        const cplx z = std::polar(mod(rng), ang(rng));
        const cplx rot = std::polar(1.0, ang(rng));
        const cplx gz = g(z, alpha_half);
        EXPECT_LE(std::abs(g(rot * z, alpha_half) - rot * gz), 1e-13 * (1.0 + std::abs(gz)));
        EXPECT_NEAR(std::abs(g(rot * z, alpha_half)), std::abs(g(cplx(std::abs(z), 0.0), alpha_half)),
                    1e-13 * (1.0 + std::abs(gz)));
    }
}

TEST(G, OverflowGuardNamesModulus) {
    EXPECT_NO_THROW(g(cplx(2.0, 0.0), alpha_half));
    try {
        g(cplx(20.5, 0.0), alpha_half);
        FAIL();
    } catch (const NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("20.5"), std::string::npos) << e.what();
    }
    EXPECT_THROW(hamiltonian_density(cplx(0.0, 21.0), alpha_half), NumericError);
    EXPECT_THROW(g(cplx(std::nan(""), 0.0), alpha_half), NumericError);
}

TEST(F, WeightComposition) {
    const cplx z = std::polar(std::sqrt(std::log(2.0) / alpha_half), 0.3);
    EXPECT_EQ(f(3.0, cplx(0.0, 0.0), alpha_half), cplx(0.0, 0.0));
    EXPECT_EQ(f(1.0, z, alpha_half), g(z, alpha_half));
    EXPECT_LT(std::abs(f(2.0, z, alpha_half) - 2.0 * z), 1e-15);
}

TEST(HamiltonianDensity, ZeroAndQuarticLowerBound) {
    EXPECT_EQ(hamiltonian_density(cplx(0.0, 0.0), alpha_half), 0.0);
    for (int k = 1; k <= 400; ++k) {
        const double r = 0.005 * k;
        const double d = hamiltonian_density(cplx(0.0, r), alpha_half);
        EXPECT_GE(d, alpha_half / 2.0 * std::pow(r, 4)) << "r=" << r;
    }
}

TEST(HamiltonianDensity, SmallAmplitudeIsCancellationFree) {
    const double r = 1e-3;
    const double d = hamiltonian_density(cplx(r, 0.0), alpha_half);
    EXPECT_NEAR(d, alpha_half * std::pow(r, 4) / 2.0, 1e-3 * alpha_half * std::pow(r, 4) / 2.0);
    for (double m : {1e-8, 1e-5, 1e-3, 0.05, 0.2}) {
        const double exact = static_cast<double>(density_series((long double)m * m, alpha_half));
        EXPECT_NEAR(hamiltonian_density(cplx(m, 0.0), alpha_half), exact, 1e-14 * exact) << "m=" << m;
    }
}

TEST(HamiltonianDensity, MonotoneAndConvexInSquaredModulus) {
    double prev = 0.0, prev_slope = 0.0;
    const double step = 1e-3;
    for (int k = 1; k <= 1500; ++k) {
        const double m2 = k * step;
        const double d = hamiltonian_density(cplx(std::sqrt(m2), 0.0), alpha_half);
        EXPECT_GT(d, prev);
        const double slope = (d - prev) / step;
        if (k > 1) {
            EXPECT_GE(slope, prev_slope * (1.0 - 1e-12));
        }
        prev = d;
        prev_slope = slope;
    }
}

TEST(DifferenceBound, EqualArgumentsAndEpsDomain) {
    const auto b = difference_bound_check(cplx(0.4, 0.2), cplx(0.4, 0.2), 0.1, alpha_half, 1.0);
    EXPECT_EQ(b.lhs, 0.0);
    EXPECT_TRUE(b.holds);
    EXPECT_THROW(difference_bound_check(cplx(1.0, 0.0), cplx(0.0, 0.0), 0.0, alpha_half, 1.0), DomainError);
}

TEST(DifferenceBound, AgainstZeroHoldsWithUnitConstant) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mod(0.0, 2.0), ang(-pi, pi);
    for (int s = 0; s < 10000; ++s) {
        const cplx z = std::polar(mod(rng), ang(rng));
        const auto b = difference_bound_check(z, cplx(0.0, 0.0), 0.1, alpha_half, 1.0);
        const double m2 = std::norm(z);
        EXPECT_NEAR(b.rhs, std::abs(z) * std::expm1(alpha_half * 1.1 * m2), 1e-12 * (1.0 + b.rhs));
        EXPECT_TRUE(b.holds) << "|z|=" << std::abs(z);
    }
}

TEST(DifferenceBound, CalibratedConstantDominatesRadialLimit) {
    // sup over x of the infinitesimal radial ratio, by a fine scan of x = alpha |z|^2 <= 4 alpha
    const double eps = 0.1;
    double sup = 0.0;
    for (int k = 1; k <= 200000; ++k) sup = std::max(sup, radial_limit_ratio(4.0 * alpha_half * k / 200000.0, eps));
    const double c = calibrate_difference_constant(eps, alpha_half, 2.0);
    EXPECT_GE(c, sup);
    EXPECT_LT(c, 1.1 * sup);
}

TEST(DifferenceBound, CalibratedConstantHoldsOnFreshSamples) {
    const double eps = 0.1;
    const double c = calibrate_difference_constant(eps, alpha_half, 2.0);
    EXPECT_NEAR(c, 3.9192, 1e-3); // regression value
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mod(0.0, 2.0), ang(-pi, pi);
    for (int s = 0; s < 100000; ++s) {
        const auto b = difference_bound_check(std::polar(mod(rng), ang(rng)), std::polar(mod(rng), ang(rng)), eps,
                                              alpha_half, c);
        ASSERT_TRUE(b.holds) << "ratio " << b.ratio();
    }
}
