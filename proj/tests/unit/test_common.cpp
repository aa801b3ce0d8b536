#include "thermo/common.hpp"
#include "thermo/geometry.hpp"

#include <gtest/gtest.h>

using namespace thermo;

TEST(Common, WrapRanges) {
    EXPECT_DOUBLE_EQ(wrap01(1.25), 0.25);
    EXPECT_DOUBLE_EQ(wrap01(-0.25), 0.75);
    EXPECT_EQ(wrap01(-1e-18), 0.0);
    EXPECT_DOUBLE_EQ(wrap_half(0.75), -0.25);
    EXPECT_NEAR(circle_dist(0.95, 0.05), 0.1, 1e-15);
}

TEST(Common, CompensatedSumKeepsSmallTerms) {
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i)
        s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1000.0);
}

TEST(Common, SeedDerivationIsStableAndDistinct) {
    EXPECT_EQ(derive_seed(7, "gibbs"), derive_seed(7, "gibbs"));
    EXPECT_NE(derive_seed(7, "gibbs"), derive_seed(7, "gibbs-points"));
    EXPECT_NE(derive_seed(7, "gibbs"), derive_seed(8, "gibbs"));
    Rng a(derive_seed(7, "x")), b(derive_seed(7, "x"));
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Common, FitLineRecoversExactLine) {
    const LineFit f = fit_line({1, 2, 3, 4}, {3.5, 5.5, 7.5, 9.5});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.5, 1e-14);
    EXPECT_NEAR(f.rms_residual, 0.0, 1e-14);
    EXPECT_THROW(fit_line({1, 1}, {2, 3}), Error);
}

TEST(Geometry, PolygonAreaAndClipping) {
    const auto sq = ConvexPolygon::rectangle(0, 0, 2, 1);
    EXPECT_DOUBLE_EQ(sq.area(), 2.0);
    EXPECT_DOUBLE_EQ(sq.clipped({1, 0}, 0.5).area(), 0.5);
    EXPECT_TRUE(sq.intersect(ConvexPolygon::rectangle(3, 0, 4, 1)).empty());
    const auto p = ConvexPolygon::parallelogram({0, 0}, {1, 0}, 0.5, {1, 1}, 0.25);
    EXPECT_NEAR(p.area(), 0.5, 1e-15);
    EXPECT_TRUE(p.contains({0.0, 0.0}));
    EXPECT_NEAR(p.mapped(2, 1, 1, 1).area(), p.area(), 1e-15);  // unimodular
}
