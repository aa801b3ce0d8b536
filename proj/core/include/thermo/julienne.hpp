#pragma once

#include "thermo/product_states.hpp"

#include <vector>

namespace thermo {

struct JulienneSpec {
    TorusPoint x = TorusPoint(0.3, 0.6);
    int n = 0;
    double epsilon = 0.1;
    double sigma = 0.5;
};

enum class JulienneKind { u, s, c, cu, scu };
std::string to_string(JulienneKind k);
JulienneKind parse_julienne_kind(std::string_view s);

/// Region x + t v_u + s v_s (base) with center
///   theta_x + c + delta_u(x, t) + delta_s(x + t v_u, s),
/// |t| <= u_half, |s| <= s_half, |c| <= c_half. Absent directions have
/// zero half width.
struct JulienneRegion {
    JulienneKind kind = JulienneKind::scu;
    TorusPoint x = TorusPoint(0, 0);
    int dim = 2;
    Vec2 v_u, v_s;
    double u_half = 0, s_half = 0, c_half = 0;
    bool full_circle = false;  // c_half clipped to the whole fiber

    /// base projection relative to x (empty unless both u and s are present)
    ConvexPolygon base_polygon() const;
    /// fraction of the fiber covered at each base point
    double center_fraction() const;
    bool contains(const ModelSystem& sys, const TorusPoint& y, double tol = 1e-12) const;
};

JulienneRegion julienne(const ModelSystem& sys, const JulienneSpec& spec, JulienneKind kind);

/// mu_phi of J^{scu}_n(x)
double julienne_measure(const GlobalState& state, const JulienneSpec& spec);

/// Union of base polygons inside [0,1)^2 (a cylinder over the fiber in d = 3).
struct CellSet {
    std::vector<ConvexPolygon> pieces;

    static CellSet whole();
    static CellSet empty();
    /// {x1 in [a, b)}
    static CellSet band_x1(double a, double b);
    /// union of g x g grid cells (i, j)
    static CellSet cells(int g, const std::vector<std::pair<int, int>>& ij);
};

/// mu_phi(X cap J^{scu}_n(x)) / mu_phi(J^{scu}_n(x))
double density_ratio(const GlobalState& state, const CellSet& X, const JulienneSpec& spec);

}  // namespace thermo
