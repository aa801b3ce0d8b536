#include "thermo/julienne.hpp"

#include <cmath>

namespace thermo {

std::string to_string(JulienneKind k) {
    switch (k) {
    case JulienneKind::u: return "u";
    case JulienneKind::s: return "s";
    case JulienneKind::c: return "c";
    case JulienneKind::cu: return "cu";
    case JulienneKind::scu: return "scu";
    }
    return "?";
}

JulienneKind parse_julienne_kind(std::string_view s) {
    if (s == "u") return JulienneKind::u;
    if (s == "s") return JulienneKind::s;
    if (s == "c") return JulienneKind::c;
    if (s == "cu") return JulienneKind::cu;
    if (s == "scu") return JulienneKind::scu;
    throw ConfigError("unknown julienne kind '" + std::string(s) + "'");
}

ConvexPolygon JulienneRegion::base_polygon() const {
    if (!(u_half > 0) || !(s_half > 0))
        return {};
    return ConvexPolygon::parallelogram({0, 0}, v_u, u_half, v_s, s_half);
}

double JulienneRegion::center_fraction() const {
    if (dim == 2)
        return 1;
    return full_circle ? 1.0 : 2 * c_half;
}

bool JulienneRegion::contains(const ModelSystem& sys, const TorusPoint& y, double tol) const {
    if (y.dim() != dim)
        throw PreconditionError("julienne: point dimension does not match the region");
    const Vec2 xb = x.base();
    auto [t, s] = sys.decompose(wrap_half(y.base() - xb));
    if (std::fabs(t) > u_half + tol || std::fabs(s) > s_half + tol)
        return false;
    if (dim == 2 || full_circle)
        return true;
    const int N = sys.series_order();
    const double off = unstable_center_offset(sys, xb, t, N) + stable_center_offset(sys, xb + t * v_u, s, N);
    return std::fabs(wrap_half(y.center() - x.center() - off)) <= c_half + tol;
}

JulienneRegion julienne(const ModelSystem& sys, const JulienneSpec& spec, JulienneKind kind) {
    if (spec.n < 0)
        throw PreconditionError("julienne: n must be >= 0");
    if (!(spec.epsilon > 0))
        throw PreconditionError("julienne: epsilon must be positive");
    if (spec.epsilon > 0.2)
        throw ChartOverflow("julienne: epsilon above 0.2 leaves the chart");
    if (!(spec.sigma > 0) || !(spec.sigma < 1))
        throw PreconditionError("julienne: sigma must lie in (0, 1)");
    if (spec.x.dim() != sys.dim())
        throw PreconditionError("julienne: point dimension does not match the system");
    const bool has_c = kind == JulienneKind::c || kind == JulienneKind::cu || kind == JulienneKind::scu;
    if (!sys.has_center() && (kind == JulienneKind::c))
        throw PreconditionError("julienne: planar systems have no center direction");
    JulienneRegion r;
    r.kind = kind;
    r.x = spec.x;
    r.dim = sys.dim();
    r.v_u = sys.v_u();
    r.v_s = sys.v_s();
    const double scale = spec.epsilon * std::pow(sys.lambda(), -spec.n);
    if (kind == JulienneKind::u || kind == JulienneKind::cu || kind == JulienneKind::scu)
        r.u_half = scale;
    if (kind == JulienneKind::s || kind == JulienneKind::scu)
        r.s_half = scale;
    if (has_c && sys.has_center()) {
        const double c = std::pow(spec.sigma, spec.n);
        r.full_circle = c >= 0.5;
        r.c_half = std::min(c, 0.5);
    }
    return r;
}

double julienne_measure(const GlobalState& state, const JulienneSpec& spec) {
    const JulienneRegion r = julienne(state.system(), spec, JulienneKind::scu);
    if (r.u_half < 1e-10)
        throw Starvation("julienne_measure: the julienne is below the representable resolution");
    const double m = state.mass_local(spec.x.base(), r.base_polygon());
    if (!(m > 0))
        throw Starvation("julienne_measure: the julienne carries no mass");
    return m * r.center_fraction();
}

CellSet CellSet::whole() { return {{ConvexPolygon::rectangle(0, 0, 1, 1)}}; }
CellSet CellSet::empty() { return {}; }

CellSet CellSet::band_x1(double a, double b) {
    if (!(a >= 0) || !(b <= 1) || !(a < b))
        throw PreconditionError("band_x1: need 0 <= a < b <= 1");
    return {{ConvexPolygon::rectangle(a, 0, b, 1)}};
}

CellSet CellSet::cells(int g, const std::vector<std::pair<int, int>>& ij) {
    if (g < 1)
        throw PreconditionError("CellSet::cells: grid must be positive");
    CellSet out;
    for (auto [i, j] : ij) {
        if (i < 0 || j < 0 || i >= g || j >= g)
            throw PreconditionError("CellSet::cells: cell outside the grid");
        out.pieces.push_back(
            ConvexPolygon::rectangle(double(i) / g, double(j) / g, double(i + 1) / g, double(j + 1) / g));
    }
    return out;
}

double density_ratio(const GlobalState& state, const CellSet& X, const JulienneSpec& spec) {
    const JulienneRegion r = julienne(state.system(), spec, JulienneKind::scu);
    if (r.u_half < 1e-10)
        throw Starvation("density_ratio: the julienne is below the representable resolution");
    const Vec2 xb = spec.x.base();
    const ConvexPolygon J = r.base_polygon();
    const double total = state.mass_local(xb, J);
    if (!(total > 0))
        throw Starvation("density_ratio: the julienne carries no mass");
    const ConvexPolygon Jabs = J.translated(xb);
    double inside = 0;
    for (const auto& piece : X.pieces)
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                const ConvexPolygon q = Jabs.intersect(piece.translated(Vec2(a, b)));
                if (!q.empty())
                    inside += state.mass_local(xb, q.translated(xb * -1.0));
            }
    return inside / total;
}

}  // namespace thermo
