#pragma once

#include "thermo/common.hpp"
#include "thermo/geometry.hpp"
#include "thermo/trig.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thermo {

/// Point of T^2 or T^3; base coordinates first, center coordinate last.
class TorusPoint {
public:
    TorusPoint() = default;
    TorusPoint(double x1, double x2);
    TorusPoint(double x1, double x2, double theta);
    static TorusPoint planar(Vec2 b) { return TorusPoint(b.x, b.y); }
    static TorusPoint spatial(Vec2 b, double theta) { return TorusPoint(b.x, b.y, theta); }

    int dim() const { return dim_; }
    double operator[](int i) const { return c_[i]; }
    Vec2 base() const { return {c_[0], c_[1]}; }
    double center() const { return c_[2]; }
    TorusPoint with_base(Vec2 b) const;

    bool operator==(const TorusPoint& o) const = default;

private:
    std::array<double, 3> c_{0, 0, 0};
    int dim_ = 2;
};

/// max over coordinates of the circle distance
double torus_distance(const TorusPoint& a, const TorusPoint& b);

/// Hyperbolic toral automorphism, optionally extended by a circle cocycle
/// (x, theta) -> (Ax, theta + tau(x)).
class ModelSystem {
public:
    ModelSystem(Mat2i A, std::optional<TrigPolynomial> cocycle = std::nullopt, int series_order = 60);

    static ModelSystem cat_map();
    static ModelSystem skew_product();
    static ModelSystem skew_product(TrigPolynomial tau);

    int dim() const { return tau_ ? 3 : 2; }
    const Mat2i& matrix() const { return A_; }
    const Mat2i& inverse_matrix() const { return Ainv_; }
    double lambda() const { return lambda_; }
    /// signed eigenvalues; |unstable| = lambda, |stable| = 1/lambda
    double unstable_eigenvalue() const { return mu_u_; }
    double stable_eigenvalue() const { return mu_s_; }
    Vec2 v_u() const { return vu_; }
    Vec2 v_s() const { return vs_; }
    bool has_center() const { return tau_.has_value(); }
    /// the cocycle; the zero polynomial on planar systems
    const TrigPolynomial& cocycle() const;
    int series_order() const { return series_order_; }

    /// f^{-1} as a model system in its own right (unstable and stable swap)
    ModelSystem inverse() const;
    ModelSystem base_system() const;
    ModelSystem with_series_order(int n) const;

    /// coefficients (u, s) with e = u v_u + s v_s
    std::pair<double, double> decompose(Vec2 e) const;

    /// floating base map and its inverse, wrapped to [0,1)^2
    Vec2 map_base(Vec2 x) const { return wrap01(A_ * x); }
    Vec2 map_base_inverse(Vec2 x) const { return wrap01(Ainv_ * x); }
    /// exact iterate on the dyadic grid 2^-53 (input is rounded to it)
    Vec2 iterate_base(Vec2 x, std::int64_t k) const;

    std::string describe() const;

private:
    Mat2i A_, Ainv_;
    std::optional<TrigPolynomial> tau_;
    int series_order_;
    double lambda_, mu_u_, mu_s_;
    Vec2 vu_, vs_;
    double pu_[2][2];  // rows give (u, s) coefficients
};

/// f^k(p); exact on the base, compensated on the center
TorusPoint apply(const ModelSystem& sys, const TorusPoint& p, std::int64_t k);

enum class LeafType { u, s, c, cs, cu };
std::string to_string(LeafType t);
LeafType parse_leaf_type(std::string_view s);

/// Center offset of the point at base parameter t on W^u(x):
/// sum_{k=1..N} [tau(A^{-k}(x + t v_u)) - tau(A^{-k} x)].
double unstable_center_offset(const ModelSystem& sys, Vec2 x, double t, int N);
/// -sum_{j=0..N-1} [tau(A^j(x + t v_s)) - tau(A^j x)]
double stable_center_offset(const ModelSystem& sys, Vec2 x, double t, int N);
/// bounds on the neglected series tails for |t| <= r
double unstable_offset_tail(const ModelSystem& sys, double r, int N);
double stable_offset_tail(const ModelSystem& sys, double r, int N);

/// Unit-speed segment of a leaf. The parameter is Euclidean arc length of
/// the base projection (the center leaf uses center arc length).
class LeafSegment {
public:
    LeafSegment(const ModelSystem& sys, const TorusPoint& x, LeafType type, double a, double b);

    LeafType type() const { return type_; }
    const TorusPoint& base_point() const { return x_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double length() const { return b_ - a_; }
    /// base direction of the one-dimensional part (zero for center leaves)
    Vec2 direction() const;
    const ModelSystem& system() const { return *sys_; }

    TorusPoint point(double t) const;
    /// two-parameter leaves: t along the base direction, t2 along the center
    TorusPoint point(double t, double t2) const;
    /// bound on the truncation error of center offsets over the segment
    double tail_bound() const;

private:
    std::shared_ptr<const ModelSystem> sys_;
    TorusPoint x_;
    LeafType type_;
    double a_, b_;
};

/// segment of W^type(x) over [-radius, radius]; radius <= 0.5
LeafSegment leaf_segment(const ModelSystem& sys, const TorusPoint& x, LeafType type, double radius);

/// Base parameter t with y = x + t v_u on the local unstable leaf, or
/// nullopt. Center coordinates are checked against the offset series.
std::optional<double> unstable_parameter(const ModelSystem& sys, const TorusPoint& x,
                                         const TorusPoint& y, double tol = 1e-9);
std::optional<double> stable_parameter(const ModelSystem& sys, const TorusPoint& x,
                                       const TorusPoint& y, double tol = 1e-9);

TorusPoint unstable_holonomy(const ModelSystem& sys, const TorusPoint& x0, const TorusPoint& y0,
                             const TorusPoint& w);

struct BowenBallSpec {
    TorusPoint center;
    double epsilon = 0.1;
    int n = 1;
};

bool bowen_ball_contains(const ModelSystem& sys, const BowenBallSpec& spec, const TorusPoint& y);

/// Displacements v with |A^j v|_inf < eps for j < n. On a planar model with
/// eps < 1/(|A|_inf + 1) the Bowen ball is exactly center + this polygon.
ConvexPolygon bowen_polygon(const ModelSystem& sys, double eps, int n);
double bowen_polygon_eps_limit(const ModelSystem& sys);

}  // namespace thermo
