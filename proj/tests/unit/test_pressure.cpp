#include "thermo/pressure.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

namespace {
constexpr double kLogLambda = 0.9624236501192069;
// periodic orbit sums, tests/oracles/periodic_pressure.py
constexpr double kTrigPressure = 0.9724025805;

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int n = a; n <= b; ++n)
        v.push_back(n);
    return v;
}
}  // namespace

TEST(Pressure, EntropyOfCatMap) {
    const auto sys = ModelSystem::cat_map();
    const auto est = spanning_pressure(sys, Potential::zero(), 0.05, range(6, 16));
    EXPECT_NEAR(est.slope, kLogLambda, 0.02);
    EXPECT_EQ(est.n_values.size(), 11u);
}

TEST(Pressure, TrigPotentialAgainstPeriodicOrbits) {
    const auto sys = ModelSystem::cat_map();
    const auto est = spanning_pressure(sys, Potential::parse("cos:0.2", sys), 0.1, range(4, 10));
    EXPECT_NEAR(est.slope, kTrigPressure, 0.02);
}

TEST(Pressure, ConstantShiftMovesLogSumsByNc) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    const auto ns = range(3, 7);
    const auto a = spanning_pressure(sys, phi, 0.1, ns);
    const auto b = spanning_pressure(sys, phi.shifted(0.3), 0.1, ns);
    for (std::size_t i = 0; i < ns.size(); ++i)
        EXPECT_NEAR(b.log_sums[i] - a.log_sums[i], 0.3 * ns[i], 1e-9);
    EXPECT_NEAR(b.slope - a.slope, 0.3, 1e-9);
}

TEST(Pressure, LogSumsDecreaseInEpsilon) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    for (int n : {3, 6}) {
        double prev = 1e300;
        for (double eps : {0.02, 0.05, 0.1, 0.2}) {
            const double v = spanning_log_sum(sys, phi, eps, n);
            EXPECT_LE(v, prev);
            prev = v;
        }
    }
}

TEST(Pressure, ResolutionExhaustionIsSignalled) {
    const auto sys = ModelSystem::cat_map();
    SpanningOptions o;
    o.min_spacing = 1e-3;
    EXPECT_THROW(spanning_pressure(sys, Potential::zero(), 0.05, range(10, 12), o), ResolutionExhausted);
}

TEST(Pressure, AtomAtFixedPointHasZeroEntropy) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    const auto mu = SampledMeasure::atom(TorusPoint(0, 0), 1000);
    EXPECT_NEAR(metric_pressure(sys, phi, mu, {TorusPoint(0, 0)}), 0.2, 1e-12);
}

TEST(Pressure, LebesgueIsMaximalEntropy) {
    const auto sys = ModelSystem::cat_map();
    const auto mu = SampledMeasure::lebesgue(sys, 100000, derive_seed(7, "lebesgue"));
    const std::vector<TorusPoint> xs(mu.points.begin(), mu.points.begin() + 8);
    const double h = metric_pressure(sys, Potential::zero(), mu, xs);
    EXPECT_NEAR(h, kLogLambda, 0.05);
    EXPECT_NEAR(metric_pressure(sys, Potential::srb(sys), mu, xs), 0.0, 0.05);
}

TEST(Pressure, VariationalInequalityOnOrbitMeasures) {
    const auto sys = ModelSystem::cat_map();
    const auto phi = Potential::parse("cos:0.2", sys);
    Rng rng(derive_seed(7, "orbits"));
    for (int i = 0; i < 3; ++i) {
        const double a = rng.uniform();
        const auto mu = SampledMeasure::orbit(sys, TorusPoint(a, rng.uniform()), 100000);
        const std::vector<TorusPoint> xs(mu.points.begin(), mu.points.begin() + 8);
        EXPECT_LE(metric_pressure(sys, phi, mu, xs), kTrigPressure + 0.05);
    }
}

TEST(Pressure, StarvationBelowSampleFloor) {
    const auto sys = ModelSystem::cat_map();
    const auto mu = SampledMeasure::lebesgue(sys, 200, 3);
    EXPECT_THROW(local_entropy(sys, mu, mu.points[0]), Starvation);
}
