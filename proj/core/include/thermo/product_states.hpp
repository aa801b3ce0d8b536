#pragma once

#include "thermo/geometry.hpp"
#include "thermo/leaf_measures.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace thermo {

/// Box c + t v_u + s v_s, |t| <= u_half, |s| <= s_half.
struct ChartSpec {
    Vec2 center;
    double u_half = 0.02;
    double s_half = 0.02;
    int nodes = 33;  // W grid nodes per side
    int N_trunc = 60;
    /// arc length along u and Delta-only weights (conformal measures)
    bool lebesgue_u = false;
};

/// Local product m_{U,W}: slice measure on the stable segment through the
/// center, plaques weighted by nu^u through each slice point.
///   m(dt ds) = mu^s(ds) * W(t, s) * mu^u_0(dt)
/// with W the plaque's Delta times the holonomy Jacobian back to the
/// central plaque, bilinear on a node grid.
class ChartEvaluator {
public:
    ChartEvaluator(const LeafState& U, const LeafState& S, const ChartSpec& spec);
    /// conformal variant: arc length along u
    ChartEvaluator(const LeafState& S, const Potential& phi, const ChartSpec& spec);

    const ChartSpec& spec() const { return spec_; }
    const SegmentMeasure& slice() const { return slice_; }
    const SegmentMeasure& plaque() const { return plaque_; }

    /// chart coordinates (t, s) of a displacement from the center
    std::pair<double, double> coords(Vec2 d) const;
    /// polygon given in chart coordinates
    double mass(const ConvexPolygon& ts) const;
    double mass_rect(double t0, double t1, double s0, double s1) const;
    /// nu^u_{w(s)} mass of {t in [t0, t1]} on the plaque through slice point s
    double plaque_mass(double s, double t0, double t1) const;
    double weight(double t, double s) const;

private:
    void build(const ModelSystem& base, const Potential& phi, const LeafState* U);
    double row_prefix(int q, double t) const;

    ChartSpec spec_;
    SegmentMeasure slice_;
    SegmentMeasure plaque_;
    double M_[2][2];  // displacement -> (t, s)
    std::vector<double> W_;       // nodes x nodes, row = s index
    std::vector<double> prefix_;  // nodes x (pieces + 1)
    std::vector<double> mid_;     // plaque piece midpoints
};

/// Foliation box with its m_{U,W} mass grid (grid x grid cells, row = s).
struct ProductChart {
    ChartSpec spec;
    int grid = 16;
    std::shared_ptr<const ChartEvaluator> eval;
    std::vector<double> mass_grid;

    double cell_t(int i) const { return -spec.u_half + 2 * spec.u_half * i / grid; }
    double cell_s(int j) const { return -spec.s_half + 2 * spec.s_half * j / grid; }
    double mass(int i, int j) const { return mass_grid[std::size_t(j) * grid + i]; }
};

ProductChart make_chart(const LeafState& U, const LeafState& S, const ChartSpec& spec, int grid = 16);

/// nu^u_{w(s)} mass of the union of grid cells A meeting the plaque through
/// slice point s; cells are (i, j) = (t index, s index)
double alpha_function(const ProductChart& chart, const std::vector<std::pair<int, int>>& A, double s);

/// mass_grid(i, j) = integral over slice cell j of the nu^u mass of u-cell i
ProductChart assemble_m_UW(ProductChart chart);

/// m_{U,W} of a union of grid cells, integrating alpha over the slice
double m_UW(const ProductChart& chart, const std::vector<std::pair<int, int>>& A);

/// Recomputes the mass grid from the vertical slice through center + t' v_u
/// with the stable family S_prime; returns sup |m - m'| * cells after both
/// grids are normalized to probability.
double slice_independence_gap(const ProductChart& chart, const LeafState& U, double t_prime,
                              const LeafState& S_prime);

struct CoverSpec {
    int resolution_k = 16;
    double leaf_tol = 1e-8;
    /// lattice spacing of chart centers in (u, s) coordinates
    double spacing = 1.0 / 32;
    int nodes = 17;
    int N_trunc = 60;
    int grid = 64;
    /// maximal relative disagreement between the two shifted covers
    double overlap_tol = 1e-2;
};

/// mu_phi glued from the cover charts, normalized to total mass 1.
class GlobalState {
public:
    struct Impl;
    explicit GlobalState(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    const ModelSystem& system() const;
    const Potential& potential() const;
    const LeafState& unstable() const;
    const LeafState& stable() const;
    const CoverSpec& cover() const;
    double P() const;
    double normalization_c() const;
    int dim() const;
    /// arc length along u instead of the unstable family
    bool conformal() const;

    /// mass of a planar polygon (any lift, area <= 1)
    double mass(const ConvexPolygon& base_polygon) const;
    /// mass of center + rel through a chart centered at center
    double mass_local(Vec2 center, const ConvexPolygon& rel) const;
    /// same through the cover shifted by half a lattice spacing
    double mass_shifted(const ConvexPolygon& base_polygon) const;

    /// normalized masses of the grid cells [i/g, (i+1)/g) x [j/g, (j+1)/g), index i*g + j
    const std::vector<double>& grid_masses() const;
    double total_mass() const;
    double overlap_discrepancy() const;
    Vec2 overlap_location() const;

    GlobalState with_normalization(double c) const;

private:
    std::shared_ptr<const Impl> impl_;
};

GlobalState assemble_global(const ModelSystem& sys, const Potential& phi, const CoverSpec& cover = {});
/// U and S must be solved on the base of sys
GlobalState assemble_global(const ModelSystem& sys, const LeafState& U, const LeafState& S,
                            const CoverSpec& cover = {});

/// mu^s(ds) * Delta dt: stable family times arc length along u
GlobalState assemble_conformal(const ModelSystem& sys, const LeafState& S, const CoverSpec& cover = {});

/// default leaf windows used by assemble_global
LeafSegment default_unstable_window(const ModelSystem& sys);
LeafSegment default_stable_window(const ModelSystem& sys);

/// sup over grid cells A of |mu(f^{-1} A) - mu(A)| / mu(A)
double invariance_residual(const GlobalState& state);

/// total variation distance of the normalized grid to the uniform grid
double tv_to_lebesgue(const GlobalState& state);

struct GibbsReport {
    std::vector<int> n_values;
    std::vector<double> r;  // log mu(B(x, eps, n)) - (S_n phi(x) - n P)
    double slope = 0;       // fitted -K
    double range = 0;       // max r - min r
};

GibbsReport gibbs_ratio(const GlobalState& state, const TorusPoint& x, double epsilon,
                        const std::vector<int>& n_values);

struct PartitionSpec {
    TorusPoint x = TorusPoint(0.3, 0.6);
    double u_half = 0.02;
    int pieces = 8;
    std::vector<double> strip_widths = {0.02, 0.01, 0.005};
};

struct ConditionalReport {
    std::vector<double> strip_widths;
    /// sup relative deviation of the plaque conditionals from nu^u, per strip width
    std::vector<double> deviation;
    /// same against arc length (meaningful for the SRB potential)
    std::vector<double> arc_deviation;
};

ConditionalReport conditional_density_compare(const GlobalState& state, const PartitionSpec& spec = {});

}  // namespace thermo
