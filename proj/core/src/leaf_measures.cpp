#include "thermo/leaf_measures.hpp"

#include "leaf_impl.hpp"

#include <algorithm>
#include <numeric>

namespace thermo {

double LeafDensity::total_mass() const {
    double s = 0;
    for (double w : weights)
        s += w;
    return s * cell_length();
}

double SegmentMeasure::total() const {
    double s = 0;
    for (double m : masses)
        s += m;
    return s;
}

std::vector<double> SegmentMeasure::cumulative() const {
    std::vector<double> c(breaks.size(), 0.0);
    for (std::size_t i = 0; i < masses.size(); ++i)
        c[i + 1] = c[i] + masses[i];
    return c;
}

double SegmentMeasure::mass(double a, double b) const {
    if (b < a)
        std::swap(a, b);
    double s = 0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
        if (hi > lo)
            s += masses[i] * (hi - lo) / (breaks[i + 1] - breaks[i]);
    }
    return s;
}

LeafState::Impl::Impl(const ModelSystem& sys, const Potential& phi_, const LeafSegment& window, int k, double reach_)
    : base(sys.base_system()), phi(phi_), psi(phi_), density{window, k, {}, NormalizationTag::probability_on_window},
      reach(reach_) {
    if (window.type() == LeafType::u || window.type() == LeafType::cu) {
        side = LeafSide::unstable;
        e = base.v_u();
        c = base.v_s();
        Lam = base.unstable_eigenvalue();
        kappa = base.stable_eigenvalue();
        G = base.matrix();
    } else if (window.type() == LeafType::s || window.type() == LeafType::cs) {
        side = LeafSide::stable;
        e = base.v_s();
        c = base.v_u();
        Lam = 1.0 / base.stable_eigenvalue();
        kappa = 1.0 / base.unstable_eigenvalue();
        G = base.inverse_matrix();
        psi = phi_.composed(base.inverse_matrix());
    } else {
        throw PreconditionError("leaf state: window must be an unstable or stable segment");
    }
    if (k < 1 || k > 24)
        throw PreconditionError("leaf state: resolution_k must lie in [1, 24]");
    n = std::size_t(1) << k;
    a = window.a();
    h = window.length() / double(n);
    x0 = window.base_point().base();
    // holonomy sums: stop once the neglected tail is below 1e-15 for |s| <= 4 reach
    const double L = psi.lipschitz_euclid();
    const double q = std::fabs(kappa);
    jac_terms = 1;
    if (L > 0)
        jac_terms = std::max(1, int(std::ceil(std::log(4 * reach * L / (1 - q) / 1e-15) / -std::log(q))));
}

std::pair<double, double> LeafState::Impl::coords(Vec2 d) const {
    auto [u, s] = base.decompose(d);
    return side == LeafSide::unstable ? std::make_pair(u, s) : std::make_pair(s, u);
}

Vec2 LeafState::Impl::g_iter(Vec2 p, int m) const {
    return base.iterate_base(p, side == LeafSide::unstable ? m : -m);
}

double LeafState::Impl::log_jac(Vec2 w, double s) const {
    if (s == 0 || psi.is_constant())
        return 0;
    double sum = 0, scale = s;
    Vec2 y = w;
    for (int j = 0; j < jac_terms; ++j) {
        sum += psi.eval_base(y + scale * c) - psi.eval_base(y);
        y = wrap01(G * y);
        scale *= kappa;
    }
    return sum;
}

void LeafState::Impl::visit(Vec2 p, double t0, double t1,
                            const std::function<void(std::size_t, double, double, double, double)>& cb) const {
    if (!(t1 > t0))
        return;
    const auto [ad, bd] = coords(wrap_half(p - x0));
    const double wlo = a, whi = a + double(n) * h;
    struct Cand {
        double abs_s, s, am;
        long m1, m2;
    };
    struct Piece {
        double ta, tb, wa, s;
    };
    double S = reach;
    for (int attempt = 0; attempt < 5; ++attempt, S *= 1.5) {
        const double amax = std::fabs(ad) + std::max(std::fabs(t0), std::fabs(t1)) +
                            std::max(std::fabs(wlo), std::fabs(whi)) + 1;
        const double bmax = std::fabs(bd) + S + 1;
        const long M1 = long(std::ceil(amax * std::fabs(e.x) + bmax * std::fabs(c.x)));
        const long M2 = long(std::ceil(amax * std::fabs(e.y) + bmax * std::fabs(c.y)));
        std::vector<Cand> cands;
        for (long m1 = -M1; m1 <= M1; ++m1)
            for (long m2 = -M2; m2 <= M2; ++m2) {
                const auto [am, bm] = coords(Vec2(double(m1), double(m2)));
                const double s = bd - bm;
                if (std::fabs(s) > S)
                    continue;
                const double lo = std::max(t0, wlo - ad + am), hi = std::min(t1, whi - ad + am);
                if (lo < hi)
                    cands.push_back({std::fabs(s), s, am, m1, m2});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            if (x.abs_s != y.abs_s) return x.abs_s < y.abs_s;
            if (x.s != y.s) return x.s < y.s;
            if (x.m1 != y.m1) return x.m1 < y.m1;
            return x.m2 < y.m2;
        });
        std::vector<std::pair<double, double>> unc = {{t0, t1}};
        std::vector<Piece> pieces;
        for (const auto& cd : cands) {
            const double lo_c = wlo - ad + cd.am, hi_c = whi - ad + cd.am;
            std::vector<std::pair<double, double>> next;
            for (auto [u0, u1] : unc) {
                const double lo = std::max(u0, lo_c), hi = std::min(u1, hi_c);
                if (lo < hi) {
                    pieces.push_back({lo, hi, ad - cd.am + lo, cd.s});
                    if (u0 < lo) next.emplace_back(u0, lo);
                    if (hi < u1) next.emplace_back(hi, u1);
                } else {
                    next.emplace_back(u0, u1);
                }
            }
            unc.swap(next);
            if (unc.empty())
                break;
        }
        if (!unc.empty())
            continue;
        for (const auto& pc : pieces) {
            const double wa = pc.wa, wb = pc.wa + (pc.tb - pc.ta);
            long j = long(std::floor((wa - a) / h));
            j = std::clamp(j, 0L, long(n) - 1);
            for (; j < long(n); ++j) {
                const double clo = a + double(j) * h, chi = clo + h;
                if (clo >= wb)
                    break;
                const double lo = std::max(wa, clo), hi = std::min(wb, chi);
                if (hi > lo)
                    cb(std::size_t(j), lo, hi, pc.s, pc.ta + (lo - wa));
            }
        }
        return;
    }
    throw Error("leaf state: a segment could not be projected onto the window");
}

SegmentMeasure LeafState::Impl::measure0(Vec2 p, double t0, double t1) const {
    struct Bit {
        double t, len, m;
    };
    std::vector<Bit> bits;
    const auto& w = density.weights;
    visit(p, t0, t1, [&](std::size_t j, double lo, double hi, double s, double tlo) {
        const double wm = 0.5 * (lo + hi);
        const double m = w[j] * (hi - lo) * std::exp(log_jac(x0 + wm * e, s));
        bits.push_back({tlo, hi - lo, m});
    });
    std::sort(bits.begin(), bits.end(), [](const Bit& x, const Bit& y) { return x.t < y.t; });
    SegmentMeasure out;
    out.breaks.push_back(t0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out.masses.push_back(bits[i].m);
        out.breaks.push_back(i + 1 < bits.size() ? bits[i + 1].t : t1);
    }
    return out;
}

SegmentMeasure LeafState::Impl::measure(Vec2 p, double t0, double t1, int zoom) const {
    const double len = t1 - t0;
    if (!(len > 0))
        throw PreconditionError("segment_measure: empty interval");
    const double lam = std::fabs(Lam);
    if (zoom < 0) {
        zoom = 0;
        const double target = 64 * h;
        if (len < target)
            zoom = int(std::ceil(std::log(target / len) / std::log(lam)));
    }
    if (zoom > 200)
        throw Starvation("segment_measure: segment is below the representable resolution");
    if (zoom == 0)
        return measure0(p, t0, t1);
    // mu(I) = e^{-mP} int_{g^m I} exp(S_m psi o g^{-m}) dmu
    const double Lm = std::pow(Lam, zoom);
    double i0 = Lm * t0, i1 = Lm * t1;
    const bool flip = Lm < 0;
    if (flip)
        std::swap(i0, i1);
    const SegmentMeasure img = measure0(g_iter(p, zoom), i0, i1);
    std::vector<Vec2> orb(zoom);
    orb[0] = base.iterate_base(p, 0);
    for (int r = 1; r < zoom; ++r)
        orb[r] = g_iter(orb[r - 1], 1);
    const double shift = -zoom * P;
    const std::size_t np = img.masses.size();
    SegmentMeasure out;
    out.breaks.resize(np + 1);
    out.masses.resize(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double tm = 0.5 * (img.breaks[i] + img.breaks[i + 1]) / Lm;
        double S = 0, sc = tm;
        for (int r = 0; r < zoom; ++r) {
            S += psi.eval_base(orb[r] + sc * e);
            sc *= Lam;
        }
        const std::size_t dst = flip ? np - 1 - i : i;
        out.masses[dst] = img.masses[i] * std::exp(S + shift);
    }
    for (std::size_t i = 0; i <= np; ++i) {
        const std::size_t src = flip ? np - i : i;
        out.breaks[i] = img.breaks[src] / Lm;
    }
    out.breaks.front() = t0;
    out.breaks.back() = t1;
    return out;
}

std::vector<double> LeafState::Impl::defects() const {
    std::vector<double> out(n);
    const Vec2 gx = g_iter(x0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + double(i) * h, hi = lo + h;
        double i0 = Lam * lo, i1 = Lam * hi;
        if (i0 > i1)
            std::swap(i0, i1);
        const double lhs = measure0(gx, i0, i1).total();
        const double ci = lo + 0.5 * h;
        const double rhs = std::exp(P - psi.eval_base(x0 + ci * e)) * density.weights[i] * h;
        out[i] = rhs > 0 ? std::fabs(lhs - rhs) / rhs : (lhs > 0 ? 1.0 : 0.0);
    }
    return out;
}

double LeafState::P() const { return impl_->P; }
const LeafDensity& LeafState::density() const { return impl_->density; }
double LeafState::residual() const { return impl_->residual; }
int LeafState::iterations() const { return impl_->iterations; }
LeafSide LeafState::side() const { return impl_->side; }
const ModelSystem& LeafState::system() const { return impl_->base; }
const Potential& LeafState::potential() const { return impl_->phi; }

SegmentMeasure LeafState::segment_measure(Vec2 p, double t0, double t1, int zoom) const {
    return impl_->measure(p, t0, t1, zoom);
}

double LeafState::segment_mass(Vec2 p, double t0, double t1) const { return segment_measure(p, t0, t1).total(); }

std::vector<double> LeafState::cell_defects() const { return impl_->defects(); }

LeafState LeafState::with_weights(std::vector<double> weights) const {
    if (weights.size() != impl_->n)
        throw PreconditionError("with_weights: wrong number of cells");
    auto im = std::make_shared<Impl>(*impl_);
    im->density.weights = std::move(weights);
    auto d = im->defects();
    im->residual = *std::max_element(d.begin(), d.end());
    return LeafState(im);
}

LeafState LeafState::from_parts(const ModelSystem& sys, const Potential& phi, const LeafSegment& window, int k,
                                std::vector<double> weights, double P, int iterations) {
    auto im = std::make_shared<Impl>(sys, phi, window, k, LeafSolveOptions{}.reach);
    if (weights.size() != im->n)
        throw PreconditionError("from_parts: wrong number of cells");
    im->density.weights = std::move(weights);
    im->P = P;
    im->iterations = iterations;
    auto d = im->defects();
    im->residual = *std::max_element(d.begin(), d.end());
    return LeafState(im);
}

LeafState solve_leaf_state(const ModelSystem& sys, const Potential& phi, const LeafSegment& window, int resolution_k,
                           double tol, const LeafSolveOptions& opts) {
    if (resolution_k < 8 || resolution_k > 24)
        throw PreconditionError("solve_leaf_state: resolution_k must lie in [8, 24]");
    if (window.length() < 1.0)
        throw PreconditionError("solve_leaf_state: window length must be >= 1");
    auto im = std::make_shared<LeafState::Impl>(sys, phi, window, resolution_k, opts.reach);
    const std::size_t n = im->n;
    const double h = im->h;
    if (!(window.length() > h))
        throw PreconditionError("solve_leaf_state: degenerate window");

    // sparse operator on cell masses
    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    cols.reserve(5 * n);
    vals.reserve(5 * n);
    const Vec2 gx = im->g_iter(im->x0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = im->a + double(i) * h, hi = lo + h;
        const double weight = std::exp(im->psi.eval_base(im->x0 + (lo + 0.5 * h) * im->e));
        double i0 = im->Lam * lo, i1 = im->Lam * hi;
        if (i0 > i1)
            std::swap(i0, i1);
        im->visit(gx, i0, i1, [&](std::size_t j, double wlo, double whi, double s, double) {
            const double wm = 0.5 * (wlo + whi);
            cols.push_back(std::uint32_t(j));
            vals.push_back(weight * (whi - wlo) / h * std::exp(im->log_jac(im->x0 + wm * im->e, s)));
        });
        row_ptr[i + 1] = cols.size();
    }

    std::vector<double> m(n, 1.0 / double(n)), next(n);
    const double target = std::max(tol * 1e-2, 1e-13);
    double defect = 1, r = 1;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t q = row_ptr[i]; q < row_ptr[i + 1]; ++q)
                s += vals[q] * m[cols[q]];
            next[i] = s;
        }
        r = 0;
        for (double v : next)
            r += v;
        defect = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::fabs(next[i] - r * m[i]) / (r * m[i]);
            defect = std::max(defect, d);
        }
        for (std::size_t i = 0; i < n; ++i)
            m[i] = next[i] / r;
        if (defect < target)
            break;
    }
    if (defect >= target && defect > tol)
        throw NonConvergence("solve_leaf_state: power iteration did not converge", defect);
    im->P = std::log(r);
    im->iterations = it + 1;
    im->density.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        im->density.weights[i] = m[i] / h;
    auto d = im->defects();
    im->residual = *std::max_element(d.begin(), d.end());
    if (im->residual > tol)
        throw NonConvergence("solve_leaf_state: quasi-invariance residual above tolerance", im->residual);
    return LeafState(im);
}

double quasi_invariance_residual(const LeafState& state) {
    auto d = state.cell_defects();
    return *std::max_element(d.begin(), d.end());
}

namespace {

// sum_{k=1..N} phi(f^{-k} x + t mu_u^{-k} v_u), on the exact backward orbit
double backward_sum(const ModelSystem& sys, const Potential& phi, Vec2 x, double t, int N) {
    const Vec2 vu = sys.v_u();
    const double inv = 1.0 / sys.unstable_eigenvalue();
    Vec2 q = sys.iterate_base(x, 0);
    double sc = t, s = 0;
    for (int k = 1; k <= N; ++k) {
        q = sys.iterate_base(q, -1);
        sc *= inv;
        s += phi.eval_base(q + sc * vu);
    }
    return s;
}

}  // namespace

TruncatedValue delta_along(const ModelSystem& sys, const Potential& phi, Vec2 x, double t, int N) {
    if (N < 1)
        throw PreconditionError("delta: N_trunc must be >= 1");
    TruncatedValue out;
    if (phi.is_constant() || t == 0)
        return out;
    const Vec2 vu = sys.v_u();
    const double inv = 1.0 / sys.unstable_eigenvalue();
    Vec2 q = sys.iterate_base(x, 0);
    double sc = t, s = 0;
    for (int k = 1; k <= N; ++k) {
        q = sys.iterate_base(q, -1);
        sc *= inv;
        s += phi.eval_base(q + sc * vu) - phi.eval_base(q);
    }
    const double lam = sys.lambda();
    out.value = std::exp(s);
    out.tail_bound = phi.holder_constant() * std::fabs(t) * vu.norm_inf() * std::pow(lam, -N) / (lam - 1);
    return out;
}

TruncatedValue delta_density(const ModelSystem& sys, const Potential& phi, const TorusPoint& x, const TorusPoint& y,
                             int N) {
    auto t = unstable_parameter(sys, x, y);
    if (!t)
        throw LeafMembershipError("delta_density: y is not on the local unstable leaf of x");
    return delta_along(sys, phi, x.base(), *t, N);
}

TruncatedValue holonomy_jacobian(const ModelSystem& sys, const Potential& phi, const TorusPoint& x0,
                                 const TorusPoint& y0, const TorusPoint& w, int N) {
    unstable_holonomy(sys, x0, y0, w);  // validates the configuration
    auto t0 = unstable_parameter(sys, x0, y0);
    return delta_along(sys, phi, w.base(), *t0, N);
}

namespace {

double window_parameter(const LeafState::Impl& im, const TorusPoint& x) {
    const auto [al, be] = im.coords(wrap_half(x.base() - im.x0));
    const double lo = im.a, hi = im.a + double(im.n) * im.h;
    if (std::fabs(be) > 1e-9 || al < lo || al > hi)
        throw LeafMembershipError("nu_measure: the point is not on the solved window");
    return al;
}

}  // namespace

LeafDensity nu_measure(const LeafState& state, const TorusPoint& x, int N) {
    const auto& im = state.impl();
    if (im.side != LeafSide::unstable)
        throw PreconditionError("nu_measure: needs an unstable state");
    const double tx = window_parameter(im, x);
    const double Dx = backward_sum(im.base, im.phi, im.x0, tx, N);
    LeafDensity out = im.density;
    out.normalization_tag = NormalizationTag::global_scale;
    if (im.phi.is_constant())
        return out;
    for (std::size_t i = 0; i < im.n; ++i) {
        const double ci = im.a + (double(i) + 0.5) * im.h;
        out.weights[i] *= std::exp(backward_sum(im.base, im.phi, im.x0, ci, N) - Dx);
    }
    return out;
}

double nu_invariance_residual(const LeafState& state, const TorusPoint& x, int N) {
    const auto& im = state.impl();
    if (im.side != LeafSide::unstable)
        throw PreconditionError("nu_invariance_residual: needs an unstable state");
    const double tx = window_parameter(im, x);
    const LeafDensity nu = nu_measure(state, x, N);
    const Vec2 fx0 = im.g_iter(im.x0, 1);
    const double Lam = im.Lam;
    // Delta_{fx} on the image leaf, parametrized from f(x0)
    const double Dfx = backward_sum(im.base, im.phi, fx0, Lam * tx, N);
    const double factor = std::exp(im.P - im.phi.eval_base(im.x0 + tx * im.e));
    double worst = 0;
    for (std::size_t i = 0; i < im.n; ++i) {
        const double lo = im.a + double(i) * im.h, hi = lo + im.h;
        double i0 = Lam * lo, i1 = Lam * hi;
        if (i0 > i1)
            std::swap(i0, i1);
        const SegmentMeasure sm = im.measure0(fx0, i0, i1);
        double lhs = 0;
        for (std::size_t q = 0; q < sm.masses.size(); ++q) {
            const double tm = 0.5 * (sm.breaks[q] + sm.breaks[q + 1]);
            lhs += sm.masses[q] * std::exp(backward_sum(im.base, im.phi, fx0, tm, N) - Dfx);
        }
        const double rhs = factor * nu.cell_mass(i);
        worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
    }
    return worst;
}

}  // namespace thermo
