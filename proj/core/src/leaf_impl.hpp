#pragma once

#include "thermo/leaf_measures.hpp"

#include <functional>

namespace thermo {

struct LeafState::Impl {
    Impl(const ModelSystem& sys, const Potential& phi, const LeafSegment& window, int k, double reach);

    ModelSystem base;  // planar part of the system
    Potential phi;
    Potential psi;  // weight potential: phi, or phi o f^{-1} on the stable side
    LeafSide side;
    LeafDensity density;
    std::size_t n;
    double a, h;
    Vec2 x0;
    Vec2 e, c;     // expanding and contracting directions of g
    double Lam;    // signed expansion of g along e
    double kappa;  // signed contraction of g along c
    Mat2i G;
    double reach;
    int jac_terms;
    double P = 0;
    double residual = 0;
    int iterations = 0;

    /// coefficients (along e, along c)
    std::pair<double, double> coords(Vec2 d) const;
    Vec2 g_iter(Vec2 p, int m) const;
    double log_jac(Vec2 w, double s) const;

    /// Projects {p + t e : t in [t0,t1]} onto the window along the contracting
    /// foliation (nearest branch) and reports every (window cell, overlap)
    /// pair: cb(cell, w_lo, w_hi, s, t_lo).
    void visit(Vec2 p, double t0, double t1,
               const std::function<void(std::size_t, double, double, double, double)>& cb) const;
    SegmentMeasure measure0(Vec2 p, double t0, double t1) const;
    SegmentMeasure measure(Vec2 p, double t0, double t1, int zoom) const;
    std::vector<double> defects() const;
};

}  // namespace thermo
