#include "thermo/julienne.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

namespace {
const GlobalState& lebesgue() {
    static const GlobalState g = [] {
        CoverSpec c;
        c.resolution_k = 10;
        c.grid = 8;
        return assemble_global(ModelSystem::cat_map(), Potential::zero(), c);
    }();
    return g;
}
}  // namespace

TEST(Julienne, LinearScaling) {
    const auto sys = ModelSystem::cat_map();
    JulienneSpec s;
    for (int n = 0; n <= 10; ++n) {
        s.n = n;
        const auto j = julienne(sys, s, JulienneKind::scu);
        const double want = 0.1 * std::pow(sys.lambda(), -n);
        EXPECT_NEAR(j.u_half / want, 1.0, 1e-12);
        EXPECT_NEAR(j.s_half / want, 1.0, 1e-12);
    }
    s.n = 0;
    EXPECT_EQ(julienne(sys, s, JulienneKind::u).s_half, 0.0);
    EXPECT_EQ(julienne(sys, s, JulienneKind::s).u_half, 0.0);
}

TEST(Julienne, SkewProductExtents) {
    const auto sys = ModelSystem::skew_product();
    JulienneSpec s;
    s.x = TorusPoint(0.3, 0.6, 0.1);
    s.n = 5;
    const auto j = julienne(sys, s, JulienneKind::scu);
    EXPECT_NEAR(j.u_half, 0.1 * std::pow(sys.lambda(), -5), 1e-15);
    EXPECT_NEAR(j.s_half, 0.1 * std::pow(sys.lambda(), -5), 1e-15);
    EXPECT_DOUBLE_EQ(j.c_half, 0.03125);
    s.n = 0;
    EXPECT_TRUE(julienne(sys, s, JulienneKind::c).full_circle);
}

TEST(Julienne, ContainsItsCenterAndIsNested) {
    const auto sys = ModelSystem::skew_product();
    JulienneSpec s;
    s.x = TorusPoint(0.3, 0.6, 0.1);
    Rng rng(derive_seed(7, "julienne-nesting"));
    for (int n = 0; n < 6; ++n) {
        s.n = n;
        const auto outer = julienne(sys, s, JulienneKind::scu);
        s.n = n + 1;
        const auto inner = julienne(sys, s, JulienneKind::scu);
        EXPECT_TRUE(inner.contains(sys, s.x));
        for (int i = 0; i < 200; ++i) {
            const double t = (2 * rng.uniform() - 1) * inner.u_half, r = (2 * rng.uniform() - 1) * inner.s_half;
            const double c = (2 * rng.uniform() - 1) * inner.c_half;
            const Vec2 b = s.x.base() + t * sys.v_u() + r * sys.v_s();
            const double off = unstable_center_offset(sys, s.x.base(), t, 60) +
                               stable_center_offset(sys, s.x.base() + t * sys.v_u(), r, 60);
            const TorusPoint y(wrap01(b.x), wrap01(b.y), wrap01(s.x.center() + c + off));
            ASSERT_TRUE(inner.contains(sys, y, 1e-9));
            EXPECT_TRUE(outer.contains(sys, y, 1e-9));
        }
    }
}

TEST(Julienne, ValidatesParameters) {
    const auto sys = ModelSystem::cat_map();
    JulienneSpec s;
    s.epsilon = 0.3;
    EXPECT_THROW(julienne(sys, s, JulienneKind::scu), ChartOverflow);
    s.epsilon = 0.1;
    s.n = -1;
    EXPECT_THROW(julienne(sys, s, JulienneKind::scu), PreconditionError);
    s.n = 0;
    EXPECT_THROW(julienne(sys, s, JulienneKind::c), PreconditionError);
    EXPECT_THROW(parse_julienne_kind("xy"), ConfigError);
    EXPECT_EQ(parse_julienne_kind("cu"), JulienneKind::cu);
}

TEST(Julienne, LebesgueMassIsTheArea) {
    const auto sys = ModelSystem::cat_map();
    const double det = std::fabs(cross(sys.v_u(), sys.v_s()));
    JulienneSpec s;
    for (int n = 0; n <= 8; ++n) {
        s.n = n;
        const double side = 2 * 0.1 * std::pow(sys.lambda(), -n);
        EXPECT_NEAR(julienne_measure(lebesgue(), s) / (side * side * det), 1.0, 1e-9);
    }
    s.n = 60;
    EXPECT_THROW(julienne_measure(lebesgue(), s), Starvation);
}

TEST(Julienne, BandDensityPoints) {
    const CellSet band = CellSet::band_x1(0, 0.5);
    JulienneSpec s;
    double prev = 0;
    for (int n = 2; n <= 6; ++n) {
        s.n = n;
        s.x = TorusPoint(0.499, 0.6);
        const double edge = density_ratio(lebesgue(), band, s);
        EXPECT_GE(edge, prev - 1e-12);
        prev = edge;
        s.x = TorusPoint(0.25, 0.6);
        EXPECT_NEAR(density_ratio(lebesgue(), band, s), 1.0, 1e-12);
        s.x = TorusPoint(0.75, 0.6);
        EXPECT_NEAR(density_ratio(lebesgue(), band, s), 0.0, 1e-12);
        EXPECT_NEAR(density_ratio(lebesgue(), CellSet::whole(), s), 1.0, 1e-12);
        EXPECT_EQ(density_ratio(lebesgue(), CellSet::empty(), s), 0.0);
    }
    EXPECT_GT(prev, 0.95);
}
