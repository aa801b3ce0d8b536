#include "thermo/leaf_measures.hpp"
#include "thermo/product_states.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

namespace {
constexpr double kLogLambda = 0.9624236501192069;
// periodic orbit sums, tests/oracles/periodic_pressure.py
constexpr double kTrigPressure = 0.9724025805;

struct Leaves {
    ModelSystem sys = ModelSystem::cat_map();
    Potential phi = Potential::parse("cos:0.2", sys);
    LeafState U = solve_leaf_state(sys, phi, default_unstable_window(sys), 12);
    LeafState S = solve_leaf_state(sys, phi, default_stable_window(sys), 12);
};

const Leaves& leaves() {
    static const Leaves l;
    return l;
}
}  // namespace

TEST(LeafMeasures, ConstantPotentialGivesArcLength) {
    const auto sys = ModelSystem::cat_map();
    const LeafState U = solve_leaf_state(sys, Potential::zero(), default_unstable_window(sys), 10);
    EXPECT_NEAR(U.P(), kLogLambda, 1e-12);
    const auto& w = U.density().weights;
    for (double v : w)
        EXPECT_NEAR(v / w.front(), 1.0, 1e-12);
    EXPECT_LT(U.residual(), 1e-10);
}

TEST(LeafMeasures, TrigPressureMatchesPeriodicOrbits) {
    EXPECT_NEAR(leaves().U.P(), kTrigPressure, 5e-5);
    EXPECT_NEAR(leaves().S.P(), kTrigPressure, 5e-5);
    const auto& l = leaves();
    const double u14 = solve_leaf_state(l.sys, l.phi, default_unstable_window(l.sys), 14).P();
    const double s14 = solve_leaf_state(l.sys, l.phi, default_stable_window(l.sys), 14).P();
    EXPECT_NEAR(u14, kTrigPressure, 5e-6);
    EXPECT_NEAR(s14, kTrigPressure, 5e-6);
    EXPECT_LT(4 * std::fabs(s14 - kTrigPressure), std::fabs(l.S.P() - kTrigPressure));
}

TEST(LeafMeasures, QuasiInvarianceResidual) {
    EXPECT_LT(quasi_invariance_residual(leaves().U), 1e-6);
    EXPECT_LT(quasi_invariance_residual(leaves().S), 1e-6);
}

TEST(LeafMeasures, ConstantShiftOfPressure) {
    const auto& l = leaves();
    for (double c : {-0.5, 0.3}) {
        const LeafState V = solve_leaf_state(l.sys, l.phi.shifted(c), default_unstable_window(l.sys), 12);
        EXPECT_NEAR(V.P() - l.U.P(), c, 1e-9);
    }
}

TEST(LeafMeasures, SegmentMassIsAdditive) {
    const auto& U = leaves().U;
    const Vec2 p = U.density().segment.base_point().base();
    const double a = U.segment_mass(p, -0.2, 0.05), b = U.segment_mass(p, 0.05, 0.3);
    EXPECT_NEAR(U.segment_mass(p, -0.2, 0.3), a + b, 1e-12 * (a + b));
    EXPECT_GT(a, 0);
}

TEST(LeafMeasures, FromPartsRoundTrip) {
    const auto& l = leaves();
    const LeafState R = LeafState::from_parts(l.sys, l.phi, l.U.density().segment, 12, l.U.density().weights,
                                              l.U.P(), l.U.iterations());
    EXPECT_EQ(R.P(), l.U.P());
    EXPECT_EQ(R.residual(), l.U.residual());
    EXPECT_THROW(LeafState::from_parts(l.sys, l.phi, l.U.density().segment, 12, {1.0, 2.0}, 1.0, 0),
                 PreconditionError);
}

TEST(LeafMeasures, DeltaIsOneForConstantPotential) {
    const auto sys = ModelSystem::cat_map();
    for (double t : {-0.4, 0.1, 0.3})
        EXPECT_NEAR(delta_along(sys, Potential::constant(0.1), Vec2(0.2, 0.7), t, 60).value, 1.0, 1e-12);
}

TEST(LeafMeasures, DeltaChainRuleWithinTailBounds) {
    const auto& l = leaves();
    const Vec2 x(0.21, 0.63);
    for (double t1 : {-0.2, 0.1})
        for (double t2 : {-0.3, 0.25}) {
            const auto xz = delta_along(l.sys, l.phi, x, t2, 60);
            const auto xy = delta_along(l.sys, l.phi, x, t1, 60);
            const auto yz = delta_along(l.sys, l.phi, x + t1 * l.sys.v_u(), t2 - t1, 60);
            EXPECT_LE(std::fabs(std::log(xz.value / (xy.value * yz.value))),
                      xz.tail_bound + xy.tail_bound + yz.tail_bound + 1e-12);
            const auto deep = delta_along(l.sys, l.phi, x, t2, 120);
            EXPECT_LE(std::fabs(std::log(xz.value / deep.value)), xz.tail_bound + 1e-12);
        }
}

TEST(LeafMeasures, NuTransformsWithPressure) {
    const auto& U = leaves().U;
    EXPECT_LT(nu_invariance_residual(U, U.density().segment.point(0.0)), 1e-3);
}

TEST(LeafMeasures, ResolutionIsValidated) {
    const auto& l = leaves();
    EXPECT_THROW(solve_leaf_state(l.sys, l.phi, default_unstable_window(l.sys), 4), PreconditionError);
}
