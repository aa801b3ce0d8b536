#pragma once

#include "thermo/common.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace thermo {

/// Convex polygon with counter-clockwise vertices. Empty when it has fewer
/// than three vertices.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Vec2> ccw_vertices);

    static ConvexPolygon rectangle(double x0, double y0, double x1, double y1);
    /// parallelogram c + a*e1 + b*e2, |a| <= ha, |b| <= hb
    static ConvexPolygon parallelogram(Vec2 c, Vec2 e1, double ha, Vec2 e2, double hb);

    const std::vector<Vec2>& vertices() const { return v_; }
    bool empty() const { return v_.size() < 3; }

    double area() const;
    Vec2 centroid() const;

    /// keep the part where dot(n, p) <= b
    ConvexPolygon clipped(Vec2 n, double b) const;
    ConvexPolygon intersect(const ConvexPolygon& other) const;

    ConvexPolygon translated(Vec2 d) const;
    /// image under a linear map (orientation is restored if it flips)
    ConvexPolygon mapped(double a, double b, double c, double d) const;

    /// range of dot(dir, p) over the polygon
    std::pair<double, double> extent(Vec2 dir) const;
    bool contains(Vec2 p, double tol = 0) const;

private:
    std::vector<Vec2> v_;
};

}  // namespace thermo
