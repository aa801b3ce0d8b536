#include "thermo/horocycle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

TEST(Horocycle, FlowIsATranslationGroup) {
    const HoroFlow hf(ModelSystem::cat_map());
    const TorusPoint x(0.2, 0.9);
    const TorusPoint a = flow(hf, flow(hf, x, 1.75), 2.5), b = flow(hf, x, 4.25);
    EXPECT_LT(torus_distance(a, b), 1e-13);
    EXPECT_LT(torus_distance(flow(hf, flow(hf, x, 3.0), -3.0), x), 1e-14);
    EXPECT_THROW(flow(hf, x, 2e7), PreconditionError);
}

TEST(Horocycle, RenormalizedByTheMap) {
    const auto sys = ModelSystem::cat_map();
    const HoroFlow hf(sys);
    const TorusPoint x(0.41, 0.13);
    for (double t : {0.1, 0.7, 3.0}) {
        const TorusPoint lhs = apply(sys, flow(hf, x, t), 1);
        const TorusPoint rhs = flow(hf, apply(sys, x, 1), hf.renormalization() * t);
        EXPECT_LT(torus_distance(lhs, rhs), 1e-12);
    }
}

TEST(Horocycle, JacobianCocycle) {
    const auto sys = ModelSystem::cat_map();
    const HoroFlow hf(sys);
    const auto phi = Potential::parse("cos:0.2", sys);
    const TorusPoint x(0.3, 0.2);
    const auto st = jacobian_cocycle(hf, phi, x, 0.3, 60);
    const auto s = jacobian_cocycle(hf, phi, x, 0.1, 60);
    const auto t = jacobian_cocycle(hf, phi, flow(hf, x, 0.1), 0.2, 60);
    EXPECT_LE(std::fabs(std::log(st.value / (s.value * t.value))), st.tail_bound + s.tail_bound + t.tail_bound + 1e-12);
    EXPECT_NEAR(jacobian_cocycle(hf, Potential::zero(), x, 0.3, 60).value, 1.0, 1e-14);
}

TEST(Horocycle, OrbitAverageQuadratureMatchesClosedForm) {
    const HoroFlow hf(ModelSystem::cat_map());
    for (const TrigTest& g : default_trig_tests()) {
        const double exact = orbit_average_exact(hf, g, Vec2(0.3, 0.7), 50.0);
        EXPECT_NEAR(orbit_average(hf, g, Vec2(0.3, 0.7), 50.0, 4000), exact, 1e-8);
    }
}

TEST(Horocycle, EquidistributesForZeroPotential) {
    const HoroFlow hf(ModelSystem::cat_map());
    const double e100 = equidistribution(hf, Vec2(0.3, 0.7), 100, default_trig_tests());
    const double e1e4 = equidistribution(hf, Vec2(0.3, 0.7), 1e4, default_trig_tests());
    EXPECT_LT(e1e4, 0.01);
    EXPECT_LT(e1e4, e100);
}

TEST(Horocycle, TotalVariation) {
    EXPECT_DOUBLE_EQ(total_variation({0.5, 0.5}, {1.0, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(total_variation({0.25, 0.75}, {0.25, 0.75}), 0.0);
}

TEST(Horocycle, ZeroPotentialConformalMeasureIsLebesgue) {
    const auto sys = ModelSystem::cat_map();
    const HoroFlow hf(sys);
    ConformalOptions o;
    o.grid = 16;
    o.resolution_k = 10;
    const auto c = build_conformal_candidate(hf, Potential::zero(), ConstructionRoute::leaf_product, o);
    const std::vector<double> uniform(16 * 16, 1.0 / 256);
    EXPECT_LT(total_variation(c.grid_masses, uniform), 1e-10);
    EXPECT_LT(conformality_residual(c, hf, {0.05}, 8, 4), 1e-9);
}

TEST(Horocycle, RoutesAgreeForTrigPotential) {
    const auto sys = ModelSystem::cat_map();
    const HoroFlow hf(sys);
    const auto phi = Potential::parse("cos:0.2", sys);
    ConformalOptions o;
    o.grid = 16;
    o.resolution_k = 12;
    o.T = 2000;
    const auto leaf = build_conformal_candidate(hf, phi, ConstructionRoute::leaf_product, o);
    const auto avg = build_conformal_candidate(hf, phi, ConstructionRoute::reweighted_average, o);
    EXPECT_LT(total_variation(leaf.grid_masses, avg.grid_masses), 0.02);
    EXPECT_LT(conformality_residual(leaf, hf, {0.02, 0.1}, 8, 8), 5e-3);
    EXPECT_THROW(uniqueness_gap(hf, phi, {SeedMeasure{}}, o), PreconditionError);
}
