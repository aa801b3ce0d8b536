#include "thermo/potential.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

TEST(Potential, ParseForms) {
    const auto sys = ModelSystem::cat_map();
    EXPECT_EQ(Potential::parse("zero", sys).kind(), PotentialKind::zero);
    EXPECT_DOUBLE_EQ(Potential::parse("const:0.1", sys).eval(TorusPoint(0.2, 0.4)), 0.1);
    EXPECT_NEAR(Potential::parse("srb", sys).constant_part(), -std::log(sys.lambda()), 1e-15);
    const auto c = Potential::parse("cos:0.2", sys);
    EXPECT_NEAR(c.eval(TorusPoint(0.0, 0.3)), 0.2, 1e-15);
    EXPECT_NEAR(c.eval(TorusPoint(0.5, 0.3)), -0.2, 1e-15);
    const auto t = Potential::parse("trig:cos 0.2 1 0; sin 0.1 0 1", sys);
    EXPECT_NEAR(t.eval(TorusPoint(0.0, 0.25)), 0.3, 1e-15);
    EXPECT_THROW(Potential::parse("wavy", sys), ConfigError);
    EXPECT_THROW(Potential::parse("const:abc", sys), ConfigError);
}

TEST(Potential, BirkhoffSumIsAdditive) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    const TorusPoint p(0.37, 0.11);
    const double s10 = birkhoff_sum(sys, phi, p, 10);
    const double s4 = birkhoff_sum(sys, phi, p, 4);
    const double s6 = birkhoff_sum(sys, phi, apply(sys, p, 4), 6);
    EXPECT_NEAR(s10, s4 + s6, 1e-13);
    EXPECT_NEAR(birkhoff_sum(sys, phi.shifted(0.5), p, 10), s10 + 5, 1e-13);
}

TEST(Potential, CompositionWithTheMap) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("trig:cos 0.2 1 0; sin 0.1 1 2", sys);
    const auto pf = phi.composed(sys.matrix());
    const Vec2 x(0.13, 0.77);
    EXPECT_NEAR(pf.eval_base(x), phi.eval_base(sys.map_base(x)), 1e-13);
}
