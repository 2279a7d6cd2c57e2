#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "snls/functionals.hpp"
#include "snls/profiles.hpp"
#include "snls/rearrangement.hpp"

using namespace snls;
using std::numbers::pi;

namespace {

RealField random_nonnegative(const GridSpec& g, std::uint64_t seed, int levels = 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealField out(g);
    for (double& v : out.values()) v = levels > 0 ? std::floor(unit(rng) * levels) : unit(rng);
    return out;
}

double count_above(const RealField& u, double t) {
    int count = 0;
    for (int i = 0; i < u.grid().n(); ++i)
        for (int j = 0; j < u.grid().n(); ++j) count += u(i, j) > t ? 1 : 0;
    return count * u.grid().cell_area();
}

double lp_integral(const RealField& u, double p) {
    double s = 0.0;
    for (double v : u.values()) s += std::pow(v, p);
    return s * u.grid().cell_area();
}

} // namespace

TEST(Distribution, MatchesCellCount) {
    const auto g = make_grid(32, 3.0);
    const RealField u = random_nonnegative(g, 11);
    for (double t : {-1.0, 0.0, 0.1, 0.5, 0.9, 1.0}) EXPECT_EQ(distribution_function(u, t), count_above(u, t));
    EXPECT_EQ(distribution_function(u, -1.0), 36.0);
    EXPECT_EQ(distribution_function(u, 1.0), 0.0);
}

TEST(Distribution, DiskLevelSetArea) {
    const auto g = make_grid(512, 4.0);
    const RealField disk = disk_indicator(g, 2.0);
    EXPECT_NEAR(distribution_function(disk, 0.5), 4.0 * pi, 4.0 * pi * 1e-2);
}

TEST(DecreasingRearrangement, TwoLevelField) {
    const auto g = make_grid(8, 2.0);
    const double cell = g.cell_area();
    RealField u(g);
    for (int k = 0; k < 5; ++k) u(k, 3) = 2.0;
    for (int k = 0; k < 7; ++k) u(7, k) = 1.0;
    const auto r = decreasing_rearrangement(u);
    ASSERT_EQ(r.levels().size(), 3u);
    EXPECT_EQ(r.levels()[0].value, 2.0);
    EXPECT_DOUBLE_EQ(r.levels()[0].measure, 5 * cell);
    EXPECT_EQ(r.levels()[1].value, 1.0);
    EXPECT_DOUBLE_EQ(r.levels()[1].measure, 7 * cell);
    EXPECT_EQ(r.levels()[2].value, 0.0);
    EXPECT_DOUBLE_EQ(r.total_measure(), 16.0);
    EXPECT_EQ(r(0.0), 2.0);
    EXPECT_EQ(r(4.9 * cell), 2.0);
    EXPECT_EQ(r(5.1 * cell), 1.0);
    EXPECT_EQ(r(12.5 * cell), 0.0);
    EXPECT_EQ(r(100.0), 0.0);
}

TEST(DecreasingRearrangement, ConstantField) {
    const auto g = make_grid(16, 2.0);
    RealField u(g);
    for (double& v : u.values()) v = 0.7;
    const auto r = decreasing_rearrangement(u);
    ASSERT_EQ(r.levels().size(), 1u);
    EXPECT_DOUBLE_EQ(r.levels()[0].measure, 16.0);
    const RealField s = schwarz_symmetrization(u);
    for (double v : s.values()) EXPECT_EQ(v, 0.7);
}

TEST(DecreasingRearrangement, Equimeasurable) {
    const auto g = make_grid(64, 4.0);
    const RealField u = modulus(gaussian(g, 1.0, 1.0, -0.5) + ring(g, 0.5, 2.0, 0.3));
    const auto r = decreasing_rearrangement(u);
    const RealField s = schwarz_symmetrization(u);
    for (int k = 0; k < 100; ++k) {
        const double t = 1.5 * k / 100.0;
        const double mu = distribution_function(u, t);
        EXPECT_EQ(r.distribution(t), mu);
        EXPECT_EQ(distribution_function(s, t), mu);
    }
}

TEST(Schwarz, AnnulusMovesToCenteredDisk) {
    const auto g = make_grid(64, 4.0);
    RealField annulus(g);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double r = g.radius(i, j);
            annulus(i, j) = (r > 1.5 && r < 2.5) ? 1.0 : 0.0;
        }
    const RealField s = schwarz_symmetrization(annulus);
    const int c = g.origin_index();
    EXPECT_EQ(s(c, c), 1.0);
    // support is a centered disk with the annulus area
    const double area = distribution_function(annulus, 0.5);
    const double radius = std::sqrt(area / pi);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            if (g.radius(i, j) < radius - g.spacing()) {
                EXPECT_EQ(s(i, j), 1.0);
            } else if (g.radius(i, j) > radius + g.spacing()) {
                EXPECT_EQ(s(i, j), 0.0);
            }
        }
}

TEST(Schwarz, NonincreasingInRadius) {
    const auto g = make_grid(64, 4.0);
    const RealField s = schwarz_symmetrization(random_nonnegative(g, 5));
    std::map<std::int64_t, std::pair<double, double>> shells; // r^2 / h^2 -> (min, max)
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            auto it = shells.try_emplace(g.radius_squared_cells(i, j), s(i, j), s(i, j)).first;
            it->second.first = std::min(it->second.first, s(i, j));
            it->second.second = std::max(it->second.second, s(i, j));
        }
    for (auto it = std::next(shells.begin()); it != shells.end(); ++it) {
        EXPECT_LE(it->second.second, std::prev(it)->second.first);
    }
}

TEST(Schwarz, Idempotent) {
    const auto g = make_grid(32, 4.0);
    const RealField once = schwarz_symmetrization(random_nonnegative(g, 8, 6));
    const RealField twice = schwarz_symmetrization(once);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(once.values()[k], twice.values()[k]);
}

TEST(Schwarz, RadialDecreasingFieldIsFixed) {
    const auto g = make_grid(128, 6.0);
    const RealField u = modulus(gaussian(g, 1.0));
    const RealField s = schwarz_symmetrization(u);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(s.values()[k], u.values()[k], 1e-15);
}

TEST(Schwarz, PreservesLpNorms) {
    const auto g = make_grid(128, 6.0);
    for (const RealField& u : {modulus(gaussian(g, 1.0, 2.0, 1.0, 0.7)), modulus(random_band_limited(g, 5, 3)),
                               random_nonnegative(g, 4)}) {
        const RealField s = schwarz_symmetrization(u);
        for (double p : {1.0, 2.0, 4.0, 7.5}) {
            const double before = lp_integral(u, p);
            EXPECT_NEAR(lp_integral(s, p), before, 1e-12 * before) << "p=" << p;
        }
    }
}

TEST(Schwarz, CommutesWithIncreasingMaps) {
    const auto g = make_grid(64, 4.0);
    const RealField u = random_nonnegative(g, 21);
    RealField phi_u(g);
    for (std::size_t k = 0; k < g.size(); ++k) phi_u.values()[k] = std::expm1(3.0 * u.values()[k]);
    const RealField lhs = schwarz_symmetrization(phi_u);
    const RealField us = schwarz_symmetrization(u);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(lhs.values()[k], std::expm1(3.0 * us.values()[k]));
}

TEST(Schwarz, RejectsNegativeValues) {
    const auto g = make_grid(8, 1.0);
    RealField u(g);
    u(3, 4) = -1e-3;
    EXPECT_THROW(schwarz_symmetrization(u), DomainError);
    EXPECT_THROW(decreasing_rearrangement(u), DomainError);
    EXPECT_THROW(hardy_littlewood_check(u, RealField(g)), DomainError);
}

TEST(HardyLittlewood, DisjointSpikes) {
    const auto g = make_grid(8, 2.0);
    RealField f(g), h(g);
    f(1, 1) = 3.0;
    h(5, 6) = 2.0;
    const auto r = hardy_littlewood_check(f, h);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_DOUBLE_EQ(r.rhs, 6.0 * g.cell_area());
    EXPECT_TRUE(r.holds);
}

TEST(HardyLittlewood, EqualityForIdenticalFactors) {
    const auto g = make_grid(32, 3.0);
    const RealField f = random_nonnegative(g, 2);
    const auto r = hardy_littlewood_check(f, f);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-12 * r.rhs);
    EXPECT_TRUE(r.holds);
}

TEST(HardyLittlewood, RandomPairs) {
    const auto g = make_grid(16, 2.0);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto r = hardy_littlewood_check(random_nonnegative(g, 2 * s + 1), random_nonnegative(g, 2 * s + 2));
        ASSERT_TRUE(r.holds) << "seed " << s;
        ASSERT_LE(r.lhs, r.rhs);
    }
}

TEST(HardyLittlewood, RightSideIsSymmetrizedProduct) {
    const auto g = make_grid(32, 3.0);
    const RealField f = random_nonnegative(g, 31), h = random_nonnegative(g, 32);
    const RealField fs = schwarz_symmetrization(f), hs = schwarz_symmetrization(h);
    double direct = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) direct += fs.values()[k] * hs.values()[k];
    direct *= g.cell_area();
    EXPECT_NEAR(hardy_littlewood_check(f, h).rhs, direct, 1e-12 * direct);
}

TEST(HardyLittlewood, NoPermutationBeatsSortedPairing) {
    const auto g = make_grid(8, 2.0);
    const RealField f = random_nonnegative(g, 41), h = random_nonnegative(g, 42);
    const double rhs = hardy_littlewood_check(f, h).rhs;
    std::mt19937_64 rng(43);
    std::vector<double> hv(h.values().begin(), h.values().end());
    for (int trial = 0; trial < 20000; ++trial) {
        std::shuffle(hv.begin(), hv.end(), rng);
        double s = 0.0;
        for (std::size_t k = 0; k < hv.size(); ++k) s += f.values()[k] * hv[k];
        ASSERT_LE(s * g.cell_area(), rhs * (1.0 + 1e-14));
    }
}

TEST(PolyaSzego, HoldsAcrossFamily) {
    const auto g = make_grid(256, 6.0);
    const std::vector<Field> family{gaussian(g, 1.0),
                                    gaussian(g, 1.0, 1.5, -0.5, 0.8),
                                    ring(g, 1.0, 2.0, 0.5),
                                    moser_sequence(8, g),
                                    gaussian(g, 1.0, -2.0, 0.0, 0.6) + gaussian(g, 0.7, 2.0, 1.0, 0.6),
                                    random_band_limited(g, 8, 17)};
    for (const auto& u : family) {
        const auto r = polya_szego_check(modulus(u));
        EXPECT_TRUE(r.holds) << "excess " << r.excess();
        EXPECT_GT(r.grad_before, 0.0);
    }
}

TEST(PolyaSzego, DiscretizationExcessVanishesUnderRefinement) {
    std::vector<double> excess;
    for (int n : {64, 128, 256, 512}) {
        excess.push_back(polya_szego_check(modulus(gaussian(make_grid(n, 6.0), 1.0, 1.3, -0.7))).excess());
    }
    for (std::size_t k = 1; k < excess.size(); ++k) EXPECT_LT(excess[k], excess[k - 1]);
    EXPECT_LT(excess.back(), 0.005);
}

TEST(PolyaSzego, ZeroField) {
    const auto r = polya_szego_check(RealField(make_grid(16, 2.0)));
    EXPECT_EQ(r.grad_before, 0.0);
    EXPECT_EQ(r.excess(), 0.0);
    EXPECT_TRUE(r.holds);
}

TEST(WeightRearrangement, ClosedForm) {
    EXPECT_DOUBLE_EQ(weight_rearrangement_exact(1.0, pi), 1.0);
    EXPECT_DOUBLE_EQ(weight_rearrangement_exact(0.5, pi * 16.0), 0.5);
}

TEST(WeightRearrangement, DiscreteMatchesClosedForm) {
    const auto r = weight_rearrangement(make_grid(512, 4.0), 0.5, 2.0);
    EXPECT_EQ(r.s.size(), 200u);
    EXPECT_LT(r.max_relative_error, 0.01);
    EXPECT_NEAR(r.s.back(), 4.0 * pi, 1e-12);
    EXPECT_THROW(weight_rearrangement(make_grid(64, 4.0), 0.5, 5.0), DomainError);
}

TEST(WeightRearrangement, ErrorShrinksUnderRefinement) {
    const double e1 = weight_rearrangement(make_grid(256, 4.0), 0.5, 2.0).max_relative_error;
    const double e2 = weight_rearrangement(make_grid(1024, 4.0), 0.5, 2.0).max_relative_error;
    EXPECT_LT(e2, e1);
}

TEST(WeightRearrangement, WeightIsItsOwnSymmetrization) {
    const auto g = make_grid(128, 4.0);
    const auto w = make_singular_weight(g, 0.75);
    const RealField s = schwarz_symmetrization(w.field());
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(s.values()[k], w.values()[k], 1e-13 * w.values()[k]);
}
