#include "thermo/product_states.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

namespace {
constexpr double kLogLambda = 0.9624236501192069;

GlobalState zero_state() {
    static const GlobalState g = [] {
        CoverSpec c;
        c.resolution_k = 10;
        c.grid = 32;
        return assemble_global(ModelSystem::cat_map(), Potential::zero(), c);
    }();
    return g;
}

GlobalState trig_state() {
    static const GlobalState g = [] {
        const auto sys = ModelSystem::cat_map();
        CoverSpec c;
        c.resolution_k = 12;
        c.grid = 32;
        return assemble_global(sys, Potential::parse("cos:0.2", sys), c);
    }();
    return g;
}

double cell_sum(const GlobalState& g) {
    double s = 0;
    for (double m : g.grid_masses())
        s += m;
    return s;
}
}  // namespace

TEST(ProductStates, ZeroPotentialIsLebesgue) {
    const GlobalState g = zero_state();
    EXPECT_NEAR(g.P(), kLogLambda, 1e-12);
    EXPECT_NEAR(cell_sum(g), 1.0, 1e-12);
    EXPECT_LT(tv_to_lebesgue(g), 1e-10);
    EXPECT_LT(invariance_residual(g), 1e-10);
    EXPECT_NEAR(g.mass(ConvexPolygon::rectangle(0.1, 0.2, 0.4, 0.3)), 0.03, 1e-10);
    EXPECT_LT(g.overlap_discrepancy(), 1e-10);
}

TEST(ProductStates, SrbConditionalsAreArcLength) {
    const auto sys = ModelSystem::cat_map();
    CoverSpec c;
    c.resolution_k = 10;
    c.grid = 16;
    const GlobalState g = assemble_global(sys, Potential::srb(sys), c);
    const ConditionalReport r = conditional_density_compare(g);
    for (double d : r.arc_deviation)
        EXPECT_LT(d, 1e-9);
}

TEST(ProductStates, SliceIndependenceForConstantPotential) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::constant(0.1);
    const LeafState U = solve_leaf_state(sys, phi, default_unstable_window(sys), 10);
    const LeafState S = solve_leaf_state(sys, phi, default_stable_window(sys), 10);
    ChartSpec spec;
    spec.center = Vec2(0.3, 0.6);
    const ProductChart chart = make_chart(U, S, spec);
    EXPECT_LE(slice_independence_gap(chart, U, 0.015, S), 1e-10);
}

TEST(ProductStates, ChartMassGridMatchesCellUnions) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    const GlobalState g = trig_state();
    ChartSpec spec;
    spec.center = Vec2(0.3, 0.6);
    const ProductChart chart = assemble_m_UW(make_chart(g.unstable(), g.stable(), spec, 8));
    double total = 0;
    for (double m : chart.mass_grid)
        total += m;
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            all.push_back({i, j});
    EXPECT_NEAR(m_UW(chart, all), total, 1e-9 * total);
    EXPECT_NEAR(m_UW(chart, {{2, 3}}), chart.mass(2, 3), 1e-9 * chart.mass(2, 3));
}

TEST(ProductStates, TrigStateIsInvariantAndConsistent) {
    const GlobalState g = trig_state();
    EXPECT_NEAR(cell_sum(g), 1.0, 1e-12);
    EXPECT_LT(invariance_residual(g), 1e-2);
    EXPECT_LT(g.overlap_discrepancy(), g.cover().overlap_tol);
    const auto a = ConvexPolygon::rectangle(0.1, 0.1, 0.3, 0.2), b = ConvexPolygon::rectangle(0.3, 0.1, 0.6, 0.2);
    const double whole = g.mass(ConvexPolygon::rectangle(0.1, 0.1, 0.6, 0.2));
    EXPECT_NEAR(g.mass(a) + g.mass(b), whole, 1e-8 * whole);
    // a nonconstant potential moves mass away from Lebesgue
    EXPECT_GT(tv_to_lebesgue(g), 0.05);
}

TEST(ProductStates, ConditionalsMatchNu) {
    const ConditionalReport r = conditional_density_compare(trig_state());
    ASSERT_EQ(r.deviation.size(), 3u);
    EXPECT_LT(r.deviation.back(), 5e-3);
    EXPECT_LT(r.deviation.back(), r.deviation.front());
}

TEST(ProductStates, GibbsRatioIsFlat) {
    const GibbsReport r = gibbs_ratio(trig_state(), TorusPoint(0.31, 0.77), 0.2, {4, 6, 8, 10, 12});
    EXPECT_LT(std::fabs(r.slope), 0.01);
    EXPECT_THROW(gibbs_ratio(trig_state(), TorusPoint(0.31, 0.77), 0.2, {4}), PreconditionError);
}

TEST(ProductStates, UnnormalizedStateIsRejected) {
    EXPECT_THROW(invariance_residual(zero_state().with_normalization(2 * zero_state().normalization_c())),
                 PreconditionError);
}

TEST(ProductStates, ConformalStateHasNoUnstableFamily) {
    const auto sys = ModelSystem::cat_map();
    const LeafState S = solve_leaf_state(sys, Potential::zero(), default_stable_window(sys), 10);
    CoverSpec c;
    c.resolution_k = 10;
    c.grid = 8;
    const GlobalState g = assemble_conformal(sys, S, c);
    EXPECT_TRUE(g.conformal());
    EXPECT_THROW(g.unstable(), Error);
    EXPECT_LT(tv_to_lebesgue(g), 1e-10);
}
