#pragma once

#include "thermo/potential.hpp"
#include "thermo/torus.hpp"

#include <memory>
#include <vector>

namespace thermo {

enum class LeafSide { unstable, stable };
enum class NormalizationTag { probability_on_window, global_scale };

/// Cell-constant density against arc length on a leaf window of 2^k cells.
struct LeafDensity {
    LeafSegment segment;
    int resolution_k = 0;
    std::vector<double> weights;
    NormalizationTag normalization_tag = NormalizationTag::probability_on_window;

    std::size_t cells() const { return weights.size(); }
    double cell_length() const { return segment.length() / double(weights.size()); }
    double cell_lo(std::size_t i) const { return segment.a() + double(i) * cell_length(); }
    double cell_center(std::size_t i) const { return segment.a() + (double(i) + 0.5) * cell_length(); }
    double cell_mass(std::size_t i) const { return weights[i] * cell_length(); }
    double total_mass() const;
};

/// Measure on a parameter interval, piecewise constant against the parameter.
struct SegmentMeasure {
    std::vector<double> breaks;  // ascending, size = masses.size() + 1
    std::vector<double> masses;

    double total() const;
    double lo() const { return breaks.front(); }
    double hi() const { return breaks.back(); }
    /// mass of [a, b], interpolating linearly inside pieces
    double mass(double a, double b) const;
    /// prefix sums aligned with breaks
    std::vector<double> cumulative() const;
};

struct LeafSolveOptions {
    int max_iterations = 50000;
    /// starting search radius along the contracting direction when projecting onto the window
    double reach = 2.0;
};

/// (P, leaf family) solved on one window. The family extends to every leaf
/// of the same foliation by sliding along the transverse foliation with the
/// holonomy Jacobian.
class LeafState {
public:
    double P() const;
    const LeafDensity& density() const;
    double residual() const;
    int iterations() const;
    LeafSide side() const;
    const ModelSystem& system() const;
    const Potential& potential() const;

    /// Measure of {p + t e : t in [t0, t1]} where e is the window direction.
    /// zoom < 0 picks enough forward refinement levels to resolve short segments.
    SegmentMeasure segment_measure(Vec2 p, double t0, double t1, int zoom = -1) const;
    double segment_mass(Vec2 p, double t0, double t1) const;

    /// same window and P, different weights; residual is recomputed
    LeafState with_weights(std::vector<double> weights) const;
    static LeafState from_parts(const ModelSystem& sys, const Potential& phi, const LeafSegment& window, int k,
                                std::vector<double> weights, double P, int iterations);

    /// per-cell fixed-point defect, computed through segment_measure
    std::vector<double> cell_defects() const;

    struct Impl;
    explicit LeafState(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    const Impl& impl() const { return *impl_; }

private:
    std::shared_ptr<const Impl> impl_;
};

/// Solves mu_{gx}(gI) = e^{P - psi} mu_x(I) on the window by power iteration.
/// A u window gives the unstable family (g = f, psi = phi); an s window the
/// stable family (g = f^{-1}, psi = phi o f^{-1}).
LeafState solve_leaf_state(const ModelSystem& sys, const Potential& phi, const LeafSegment& window, int resolution_k,
                           double tol = 1e-8, const LeafSolveOptions& opts = {});

double quasi_invariance_residual(const LeafState& state);

struct TruncatedValue {
    double value = 1;
    /// bound on |log(exact) - log(value)|
    double tail_bound = 0;
};

/// Delta_x(x + t v_u) = prod_{k=1..N} exp(phi(f^{-k}(x + t v_u)) - phi(f^{-k} x))
TruncatedValue delta_along(const ModelSystem& sys, const Potential& phi, Vec2 x, double t, int N);
TruncatedValue delta_density(const ModelSystem& sys, const Potential& phi, const TorusPoint& x,
                             const TorusPoint& y, int N);
TruncatedValue holonomy_jacobian(const ModelSystem& sys, const Potential& phi, const TorusPoint& x0,
                                 const TorusPoint& y0, const TorusPoint& w, int N);

/// nu_x = Delta_x * mu on the window of an unstable state
LeafDensity nu_measure(const LeafState& state, const TorusPoint& x, int N = 60);
/// sup over cells of the defect in nu_{fx}(fI) = e^{P - phi(x)} nu_x(I)
double nu_invariance_residual(const LeafState& state, const TorusPoint& x, int N = 60);

}  // namespace thermo
