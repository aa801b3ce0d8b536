#include "thermo/geometry.hpp"

#include <algorithm>

namespace thermo {

ConvexPolygon::ConvexPolygon(std::vector<Vec2> ccw_vertices) : v_(std::move(ccw_vertices)) {}

ConvexPolygon ConvexPolygon::rectangle(double x0, double y0, double x1, double y1) {
    return ConvexPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

ConvexPolygon ConvexPolygon::parallelogram(Vec2 c, Vec2 e1, double ha, Vec2 e2, double hb) {
    std::vector<Vec2> v = {c - ha * e1 - hb * e2, c + ha * e1 - hb * e2,
                           c + ha * e1 + hb * e2, c - ha * e1 + hb * e2};
    ConvexPolygon p(v);
    if (cross(e1, e2) < 0)
        std::reverse(p.v_.begin(), p.v_.end());
    return p;
}

double ConvexPolygon::area() const {
    if (empty())
        return 0;
    double a = 0;
    for (std::size_t i = 0; i < v_.size(); ++i)
        a += cross(v_[i], v_[(i + 1) % v_.size()]);
    return 0.5 * a;
}

Vec2 ConvexPolygon::centroid() const {
    if (v_.empty())
        return {};
    // shift to the first vertex for accuracy
    Vec2 o = v_[0];
    double a = 0, cx = 0, cy = 0;
    for (std::size_t i = 1; i + 1 < v_.size(); ++i) {
        Vec2 p = v_[i] - o, q = v_[i + 1] - o;
        double w = cross(p, q);
        a += w;
        cx += w * (p.x + q.x);
        cy += w * (p.y + q.y);
    }
    if (a == 0) {
        Vec2 s;
        for (auto& p : v_)
            s += p;
        return s * (1.0 / v_.size());
    }
    return o + Vec2(cx / (3 * a), cy / (3 * a));
}

ConvexPolygon ConvexPolygon::clipped(Vec2 n, double b) const {
    std::vector<Vec2> out;
    const std::size_t m = v_.size();
    if (m == 0)
        return {};
    out.reserve(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 p = v_[i], q = v_[(i + 1) % m];
        double dp = dot(n, p) - b, dq = dot(n, q) - b;
        if (dp <= 0)
            out.push_back(p);
        if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
            double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return ConvexPolygon(std::move(out));
}

ConvexPolygon ConvexPolygon::intersect(const ConvexPolygon& other) const {
    ConvexPolygon r = *this;
    const auto& w = other.v_;
    for (std::size_t i = 0; i < w.size() && !r.empty(); ++i) {
        Vec2 p = w[i], q = w[(i + 1) % w.size()];
        Vec2 e = q - p;
        Vec2 n(e.y, -e.x);  // outward for ccw
        r = r.clipped(n, dot(n, p));
    }
    if (r.empty())
        return {};
    return r;
}

ConvexPolygon ConvexPolygon::translated(Vec2 d) const {
    ConvexPolygon r = *this;
    for (auto& p : r.v_)
        p += d;
    return r;
}

ConvexPolygon ConvexPolygon::mapped(double a, double b, double c, double d) const {
    ConvexPolygon r = *this;
    for (auto& p : r.v_)
        p = Vec2(a * p.x + b * p.y, c * p.x + d * p.y);
    if (a * d - b * c < 0)
        std::reverse(r.v_.begin(), r.v_.end());
    return r;
}

std::pair<double, double> ConvexPolygon::extent(Vec2 dir) const {
    double lo = 1e300, hi = -1e300;
    for (auto& p : v_) {
        double t = dot(dir, p);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {lo, hi};
}

bool ConvexPolygon::contains(Vec2 p, double tol) const {
    if (empty())
        return false;
    for (std::size_t i = 0; i < v_.size(); ++i) {
        Vec2 a = v_[i], b = v_[(i + 1) % v_.size()];
        Vec2 e = b - a;
        if (cross(e, p - a) < -tol * e.norm())
            return false;
    }
    return true;
}

}  // namespace thermo
