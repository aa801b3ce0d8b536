#include "thermo/torus.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermo;

namespace {
// log of the leading eigenvalue (3 + sqrt 5) / 2, computed in extended precision
constexpr double kLogLambda = 0.9624236501192069;
}  // namespace

TEST(Torus, CatMapSpectrum) {
    const auto sys = ModelSystem::cat_map();
    EXPECT_NEAR(std::log(sys.lambda()), kLogLambda, 1e-15);
    EXPECT_NEAR(sys.unstable_eigenvalue() * sys.stable_eigenvalue(), 1.0, 1e-15);
    const Mat2i& A = sys.matrix();
    const Vec2 Au = A * sys.v_u();
    EXPECT_NEAR(Au.x, sys.unstable_eigenvalue() * sys.v_u().x, 1e-14);
    EXPECT_NEAR(Au.y, sys.unstable_eigenvalue() * sys.v_u().y, 1e-14);
    EXPECT_NEAR(sys.v_u().norm(), 1.0, 1e-15);
    EXPECT_NEAR(sys.v_s().norm(), 1.0, 1e-15);
}

TEST(Torus, ExactIteratesInvert) {
    const auto sys = ModelSystem::cat_map();
    const Vec2 x(0.1234567, 0.7654321);
    const Vec2 y = sys.iterate_base(x, 40);
    const Vec2 back = sys.iterate_base(y, -40);
    const Vec2 x53 = sys.iterate_base(x, 0);
    EXPECT_EQ(back.x, x53.x);
    EXPECT_EQ(back.y, x53.y);
}

TEST(Torus, SkewProductCommutesWithFiberRotation) {
    const auto sys = ModelSystem::skew_product();
    const TorusPoint p(0.2, 0.3, 0.1), q(0.2, 0.3, 0.35);
    for (int k : {1, 5, 12}) {
        const TorusPoint fp = apply(sys, p, k), fq = apply(sys, q, k);
        EXPECT_EQ(fp.base().x, fq.base().x);
        EXPECT_NEAR(wrap_half(fq.center() - fp.center() - 0.25), 0.0, 1e-12);
    }
}

TEST(Torus, LeafSegmentsStayOnTheirLeaf) {
    const auto sys = ModelSystem::skew_product();
    const TorusPoint x(0.4, 0.1, 0.3);
    const LeafSegment w = leaf_segment(sys, x, LeafType::u, 0.3);
    for (double t : {-0.25, 0.0, 0.1, 0.29}) {
        const auto back = unstable_parameter(sys, x, w.point(t));
        ASSERT_TRUE(back.has_value());
        EXPECT_NEAR(*back, t, 1e-12);
    }
    EXPECT_FALSE(unstable_parameter(sys, x, TorusPoint(0.4, 0.1, 0.5)).has_value());
}

TEST(Torus, UnstableLeafIsContractedBackwards) {
    const auto sys = ModelSystem::cat_map();
    const TorusPoint x(0.31, 0.47);
    const TorusPoint y = TorusPoint::planar(x.base() + 0.2 * sys.v_u());
    for (int k = 1; k <= 10; ++k)
        EXPECT_NEAR(torus_distance(apply(sys, x, -k), apply(sys, y, -k)),
                    0.2 * std::pow(sys.lambda(), -k) * std::max(std::fabs(sys.v_u().x), std::fabs(sys.v_u().y)),
                    1e-12);
}

TEST(Torus, BowenPolygonMatchesMembership) {
    const auto sys = ModelSystem::cat_map();
    const double eps = 0.1;
    const int n = 4;
    const ConvexPolygon poly = bowen_polygon(sys, eps, n);
    const TorusPoint c(0.5, 0.5);
    Rng rng(derive_seed(1, "bowen"));
    int agree = 0;
    for (int i = 0; i < 2000; ++i) {
        const Vec2 d((rng.uniform() - 0.5) * 0.2, (rng.uniform() - 0.5) * 0.2);
        const bool in_poly = poly.contains(d);
        const bool in_ball = bowen_ball_contains(sys, {c, eps, n}, TorusPoint::planar(c.base() + d));
        agree += in_poly == in_ball;
    }
    EXPECT_EQ(agree, 2000);
}

TEST(Torus, BowenPolygonAreaScalesWithLambda) {
    const auto sys = ModelSystem::cat_map();
    double prev_err = 1;
    for (int n = 2; n <= 12; n += 2) {
        const double r = bowen_polygon(sys, 0.1, n + 1).area() / bowen_polygon(sys, 0.1, n).area();
        const double err = std::fabs(r * sys.lambda() - 1);
        EXPECT_LT(err, prev_err);
        prev_err = err;
    }
    EXPECT_LT(prev_err, 1e-4);
}
