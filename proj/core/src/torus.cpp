#include "thermo/torus.hpp"

#include <algorithm>
#include <sstream>

namespace thermo {

namespace {

constexpr double kFixScale = 0x1.0p53;
constexpr std::uint64_t kFixMask = (std::uint64_t(1) << 53) - 1;

std::uint64_t to_fixed(double x) {
    return static_cast<std::uint64_t>(std::llround(wrap01(x) * kFixScale)) & kFixMask;
}

double from_fixed(std::uint64_t m) { return static_cast<double>(m & kFixMask) / kFixScale; }

struct Mat2u {
    std::uint64_t a, b, c, d;
    Mat2u operator*(const Mat2u& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

Mat2u to_u(const Mat2i& M) {
    return {static_cast<std::uint64_t>(M.a), static_cast<std::uint64_t>(M.b),
            static_cast<std::uint64_t>(M.c), static_cast<std::uint64_t>(M.d)};
}

// Integer arithmetic mod 2^64 is exact mod 2^53 as well.
Vec2 apply_fixed(const Mat2u& M, Vec2 x) {
    std::uint64_t p = to_fixed(x.x), q = to_fixed(x.y);
    return {from_fixed(M.a * p + M.b * q), from_fixed(M.c * p + M.d * q)};
}

Mat2u power(Mat2u M, std::uint64_t k) {
    Mat2u r{1, 0, 0, 1};
    while (k) {
        if (k & 1)
            r = r * M;
        M = M * M;
        k >>= 1;
    }
    return r;
}

}  // namespace

TorusPoint::TorusPoint(double x1, double x2) : c_{wrap01(x1), wrap01(x2), 0}, dim_(2) {}

TorusPoint::TorusPoint(double x1, double x2, double theta)
    : c_{wrap01(x1), wrap01(x2), wrap01(theta)}, dim_(3) {}

TorusPoint TorusPoint::with_base(Vec2 b) const {
    TorusPoint r = *this;
    r.c_[0] = wrap01(b.x);
    r.c_[1] = wrap01(b.y);
    return r;
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    if (a.dim() != b.dim())
        throw PreconditionError("torus_distance: dimension mismatch");
    double d = 0;
    for (int i = 0; i < a.dim(); ++i)
        d = std::max(d, circle_dist(a[i], b[i]));
    return d;
}

ModelSystem::ModelSystem(Mat2i A, std::optional<TrigPolynomial> cocycle, int series_order)
    : A_(A), tau_(std::move(cocycle)), series_order_(series_order) {
    const auto dt = A.det();
    const auto tr = A.trace();
    if (dt != 1 && dt != -1)
        throw ConfigError("base matrix must have determinant +-1");
    if (std::abs(tr) <= 2)
        throw ConfigError("base matrix must satisfy |trace| > 2");
    if (series_order < 1)
        throw ConfigError("series_order must be >= 1");
    Ainv_ = A.inverse();
    const double disc = double(tr) * double(tr) - 4.0 * double(dt);
    mu_u_ = 0.5 * (double(tr) + (tr > 0 ? 1 : -1) * std::sqrt(disc));
    mu_s_ = double(dt) / mu_u_;
    lambda_ = std::fabs(mu_u_);
    auto eigvec = [&](double mu) {
        Vec2 v1(double(A.b), mu - double(A.a));
        Vec2 v2(mu - double(A.d), double(A.c));
        Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
        v = v * (1.0 / v.norm());
        if (v.x < 0 || (v.x == 0 && v.y < 0))
            v = v * -1.0;
        return v;
    };
    vu_ = eigvec(mu_u_);
    vs_ = eigvec(mu_s_);
    const double det = vu_.x * vs_.y - vs_.x * vu_.y;
    pu_[0][0] = vs_.y / det;
    pu_[0][1] = -vs_.x / det;
    pu_[1][0] = -vu_.y / det;
    pu_[1][1] = vu_.x / det;
}

ModelSystem ModelSystem::cat_map() { return ModelSystem({2, 1, 1, 1}); }

ModelSystem ModelSystem::skew_product() {
    return skew_product(TrigPolynomial(0.0, {TrigTerm{false, 0.3, 1, 0}}));
}

ModelSystem ModelSystem::skew_product(TrigPolynomial tau) { return ModelSystem({2, 1, 1, 1}, std::move(tau)); }

const TrigPolynomial& ModelSystem::cocycle() const {
    static const TrigPolynomial zero;
    return tau_ ? *tau_ : zero;
}

ModelSystem ModelSystem::inverse() const {
    std::optional<TrigPolynomial> t;
    // f^{-1}(y, eta) = (A^{-1} y, eta - tau(A^{-1} y))
    if (tau_)
        t = tau_->composed(Ainv_).scaled(-1.0);
    return ModelSystem(Ainv_, t, series_order_);
}

ModelSystem ModelSystem::base_system() const { return ModelSystem(A_, std::nullopt, series_order_); }

ModelSystem ModelSystem::with_series_order(int n) const { return ModelSystem(A_, tau_, n); }

std::pair<double, double> ModelSystem::decompose(Vec2 e) const {
    return {pu_[0][0] * e.x + pu_[0][1] * e.y, pu_[1][0] * e.x + pu_[1][1] * e.y};
}

Vec2 ModelSystem::iterate_base(Vec2 x, std::int64_t k) const {
    if (k == 0)
        return {from_fixed(to_fixed(x.x)), from_fixed(to_fixed(x.y))};
    Mat2u M = k > 0 ? to_u(A_) : to_u(Ainv_);
    return apply_fixed(power(M, static_cast<std::uint64_t>(k > 0 ? k : -k)), x);
}

std::string ModelSystem::describe() const {
    std::ostringstream out;
    out << "A=[[" << A_.a << ',' << A_.b << "],[" << A_.c << ',' << A_.d << "]]";
    if (tau_)
        out << " tau=" << tau_->to_string();
    out << " N_leaf=" << series_order_;
    return out.str();
}

TorusPoint apply(const ModelSystem& sys, const TorusPoint& p, std::int64_t k) {
    if (k > 1000000 || k < -1000000)
        throw PreconditionError("apply: |k| must be <= 1e6");
    if (p.dim() != sys.dim())
        throw PreconditionError("apply: point dimension does not match the system");
    if (!sys.has_center())
        return TorusPoint::planar(sys.iterate_base(p.base(), k));
    const Mat2u F = to_u(sys.matrix()), B = to_u(sys.inverse_matrix());
    const auto& tau = sys.cocycle();
    Vec2 x = sys.iterate_base(p.base(), 0);
    CompensatedSum theta;
    theta.add(p.center());
    if (k > 0) {
        for (std::int64_t j = 0; j < k; ++j) {
            theta.add(tau(x));
            x = apply_fixed(F, x);
        }
    } else {
        for (std::int64_t j = 0; j < -k; ++j) {
            x = apply_fixed(B, x);
            theta.add(-tau(x));
        }
    }
    return TorusPoint::spatial(x, theta.frac());
}

std::string to_string(LeafType t) {
    switch (t) {
    case LeafType::u: return "u";
    case LeafType::s: return "s";
    case LeafType::c: return "c";
    case LeafType::cs: return "cs";
    case LeafType::cu: return "cu";
    }
    return "?";
}

LeafType parse_leaf_type(std::string_view s) {
    if (s == "u") return LeafType::u;
    if (s == "s") return LeafType::s;
    if (s == "c") return LeafType::c;
    if (s == "cs") return LeafType::cs;
    if (s == "cu") return LeafType::cu;
    throw ConfigError("unknown leaf type '" + std::string(s) + "'");
}

double unstable_center_offset(const ModelSystem& sys, Vec2 x, double t, int N) {
    if (!sys.has_center() || t == 0)
        return 0;
    const auto& tau = sys.cocycle();
    const Mat2u B = to_u(sys.inverse_matrix());
    const Vec2 vu = sys.v_u();
    const double inv_mu = 1.0 / sys.unstable_eigenvalue();
    Vec2 q = sys.iterate_base(x, 0);
    double scale = t;
    CompensatedSum s;
    for (int k = 1; k <= N; ++k) {
        q = apply_fixed(B, q);
        scale *= inv_mu;
        s.add(tau(q + scale * vu) - tau(q));
    }
    return s.value();
}

double stable_center_offset(const ModelSystem& sys, Vec2 x, double t, int N) {
    if (!sys.has_center() || t == 0)
        return 0;
    const auto& tau = sys.cocycle();
    const Mat2u F = to_u(sys.matrix());
    const Vec2 vs = sys.v_s();
    const double mu = sys.stable_eigenvalue();
    Vec2 q = sys.iterate_base(x, 0);
    double scale = t;
    CompensatedSum s;
    for (int j = 0; j < N; ++j) {
        s.add(tau(q + scale * vs) - tau(q));
        q = apply_fixed(F, q);
        scale *= mu;
    }
    return -s.value();
}

double unstable_offset_tail(const ModelSystem& sys, double r, int N) {
    if (!sys.has_center())
        return 0;
    const double lam = sys.lambda();
    return sys.cocycle().lipschitz_euclid() * std::fabs(r) * std::pow(lam, -N) / (lam - 1.0);
}

double stable_offset_tail(const ModelSystem& sys, double r, int N) {
    if (!sys.has_center())
        return 0;
    const double lam = sys.lambda();
    return sys.cocycle().lipschitz_euclid() * std::fabs(r) * std::pow(lam, -N) * lam / (lam - 1.0);
}

LeafSegment::LeafSegment(const ModelSystem& sys, const TorusPoint& x, LeafType type, double a, double b)
    : sys_(std::make_shared<const ModelSystem>(sys)), x_(x), type_(type), a_(a), b_(b) {
    if (x.dim() != sys.dim())
        throw PreconditionError("leaf segment: point dimension does not match the system");
    if (!(a < b))
        throw PreconditionError("leaf segment: empty parameter interval");
    if (type == LeafType::c && !sys.has_center())
        throw PreconditionError("leaf segment: planar systems have no center leaves");
}

Vec2 LeafSegment::direction() const {
    switch (type_) {
    case LeafType::u:
    case LeafType::cu: return sys_->v_u();
    case LeafType::s:
    case LeafType::cs: return sys_->v_s();
    case LeafType::c: return {0, 0};
    }
    return {};
}

TorusPoint LeafSegment::point(double t) const { return point(t, 0.0); }

TorusPoint LeafSegment::point(double t, double t2) const {
    const Vec2 xb = x_.base();
    const int N = sys_->series_order();
    if (!sys_->has_center()) {
        if (t2 != 0)
            throw PreconditionError("leaf segment: planar leaves have one parameter");
        return TorusPoint::planar(xb + t * direction());
    }
    const double th = x_.center();
    switch (type_) {
    case LeafType::u: return TorusPoint::spatial(xb + t * sys_->v_u(), th + unstable_center_offset(*sys_, xb, t, N));
    case LeafType::s: return TorusPoint::spatial(xb + t * sys_->v_s(), th + stable_center_offset(*sys_, xb, t, N));
    case LeafType::c: return TorusPoint::spatial(xb, th + t);
    // W^cs and W^cu are products of base lines with the whole fiber
    case LeafType::cs: return TorusPoint::spatial(xb + t * sys_->v_s(), th + t2);
    case LeafType::cu: return TorusPoint::spatial(xb + t * sys_->v_u(), th + t2);
    }
    return x_;
}

double LeafSegment::tail_bound() const {
    const double r = std::max(std::fabs(a_), std::fabs(b_));
    const int N = sys_->series_order();
    if (type_ == LeafType::u)
        return unstable_offset_tail(*sys_, r, N);
    if (type_ == LeafType::s)
        return stable_offset_tail(*sys_, r, N);
    return 0;
}

LeafSegment leaf_segment(const ModelSystem& sys, const TorusPoint& x, LeafType type, double radius) {
    if (!(radius > 0))
        throw PreconditionError("leaf_segment: radius must be positive");
    if (radius > 0.5)
        throw ChartOverflow("leaf_segment: radius exceeds the chart validity scale 0.5");
    if (!sys.has_center() && type == LeafType::c)
        throw PreconditionError("leaf_segment: center leaves need a three-dimensional system");
    return LeafSegment(sys, x, type, -radius, radius);
}

namespace {

std::optional<double> leaf_parameter(const ModelSystem& sys, const TorusPoint& x, const TorusPoint& y,
                                     bool unstable, double tol) {
    if (x.dim() != sys.dim() || y.dim() != sys.dim())
        return std::nullopt;
    auto [eu, es] = sys.decompose(wrap_half(y.base() - x.base()));
    const double t = unstable ? eu : es;
    const double off = unstable ? es : eu;
    if (std::fabs(off) > tol || std::fabs(t) > 0.5)
        return std::nullopt;
    if (sys.has_center()) {
        const int N = sys.series_order();
        const double d = unstable ? unstable_center_offset(sys, x.base(), t, N)
                                  : stable_center_offset(sys, x.base(), t, N);
        const double tail = unstable ? unstable_offset_tail(sys, t, N) : stable_offset_tail(sys, t, N);
        if (circle_dist(y.center(), x.center() + d) > tail + tol)
            return std::nullopt;
    }
    return t;
}

}  // namespace

std::optional<double> unstable_parameter(const ModelSystem& sys, const TorusPoint& x, const TorusPoint& y,
                                         double tol) {
    return leaf_parameter(sys, x, y, true, tol);
}

std::optional<double> stable_parameter(const ModelSystem& sys, const TorusPoint& x, const TorusPoint& y,
                                       double tol) {
    return leaf_parameter(sys, x, y, false, tol);
}

TorusPoint unstable_holonomy(const ModelSystem& sys, const TorusPoint& x0, const TorusPoint& y0,
                             const TorusPoint& w) {
    auto t0 = unstable_parameter(sys, x0, y0);
    if (!t0)
        throw HolonomyError("unstable_holonomy: y0 is not on the local unstable leaf of x0");
    if (w.dim() != sys.dim())
        throw HolonomyError("unstable_holonomy: w has the wrong dimension");
    auto [eu, es] = sys.decompose(wrap_half(w.base() - x0.base()));
    if (std::fabs(eu) > 1e-9 || std::fabs(es) > 0.5)
        throw HolonomyError("unstable_holonomy: w is not on the local center-stable leaf of x0");
    if (std::fabs(es) + std::fabs(*t0) > 0.5)
        throw HolonomyError("unstable_holonomy: the unstable leaf of w leaves the chart before meeting W^cs(y0)");
    if (*t0 == 0)
        return w;
    const Vec2 b = w.base() + *t0 * sys.v_u();
    if (!sys.has_center())
        return TorusPoint::planar(b);
    return TorusPoint::spatial(b, w.center() + unstable_center_offset(sys, w.base(), *t0, sys.series_order()));
}

bool bowen_ball_contains(const ModelSystem& sys, const BowenBallSpec& spec, const TorusPoint& y) {
    if (spec.n < 1 || !(spec.epsilon > 0))
        throw PreconditionError("Bowen ball needs n >= 1 and epsilon > 0");
    TorusPoint a = spec.center, b = y;
    for (int j = 0; j < spec.n; ++j) {
        if (torus_distance(a, b) >= spec.epsilon)
            return false;
        if (j + 1 < spec.n) {
            a = apply(sys, a, 1);
            b = apply(sys, b, 1);
        }
    }
    return true;
}

double bowen_polygon_eps_limit(const ModelSystem& sys) { return 1.0 / (sys.matrix().norm_inf() + 1.0); }

ConvexPolygon bowen_polygon(const ModelSystem& sys, double eps, int n) {
    if (sys.has_center())
        throw PreconditionError("bowen_polygon: planar systems only");
    if (!(eps > 0) || eps >= bowen_polygon_eps_limit(sys))
        throw PreconditionError("bowen_polygon: epsilon outside the injectivity range");
    if (n < 1 || n > 36)
        throw PreconditionError("bowen_polygon: n must lie in [1, 36]");
    ConvexPolygon P = ConvexPolygon::rectangle(-eps, -eps, eps, eps);
    Mat2i M = sys.matrix();
    for (int j = 1; j < n; ++j) {
        for (int row = 0; row < 2; ++row) {
            Vec2 r = row == 0 ? Vec2(double(M.a), double(M.b)) : Vec2(double(M.c), double(M.d));
            P = P.clipped(r, eps).clipped(r * -1.0, eps);
        }
        M = sys.matrix() * M;
    }
    return P;
}

}  // namespace thermo
