#include "thermo/product_states.hpp"

#include "leaf_impl.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <unordered_map>

namespace thermo {

namespace {

// range of t where the horizontal line at height s meets the polygon
std::pair<double, double> t_range(const ConvexPolygon& P, double s) {
    const auto& v = P.vertices();
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 p = v[i], q = v[(i + 1) % v.size()];
        const double a = std::min(p.y, q.y), b = std::max(p.y, q.y);
        if (s < a || s > b)
            continue;
        if (b == a) {
            lo = std::min({lo, p.x, q.x});
            hi = std::max({hi, p.x, q.x});
        } else {
            const double t = p.x + (q.x - p.x) * (s - p.y) / (q.y - p.y);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    }
    return {lo, hi};
}

void fill_matrix(const ModelSystem& base, double M[2][2]) {
    auto [u1, s1] = base.decompose({1, 0});
    auto [u2, s2] = base.decompose({0, 1});
    M[0][0] = u1;
    M[0][1] = u2;
    M[1][0] = s1;
    M[1][1] = s2;
}

}  // namespace

ChartEvaluator::ChartEvaluator(const LeafState& U, const LeafState& S, const ChartSpec& spec) : spec_(spec) {
    if (U.side() != LeafSide::unstable || S.side() != LeafSide::stable)
        throw PreconditionError("chart: needs an unstable and a stable state");
    slice_ = S.segment_measure(spec.center, -spec.s_half, spec.s_half);
    plaque_ = U.segment_measure(spec.center, -spec.u_half, spec.u_half);
    build(U.system(), U.potential(), &U);
}

ChartEvaluator::ChartEvaluator(const LeafState& S, const Potential& phi, const ChartSpec& spec) : spec_(spec) {
    if (S.side() != LeafSide::stable)
        throw PreconditionError("chart: needs a stable state");
    spec_.lebesgue_u = true;
    slice_ = S.segment_measure(spec.center, -spec.s_half, spec.s_half);
    const int np = 2048;
    const double w = 2 * spec.u_half / np;
    plaque_.breaks.resize(np + 1);
    plaque_.masses.assign(np, w);
    for (int i = 0; i <= np; ++i)
        plaque_.breaks[i] = -spec.u_half + i * w;
    plaque_.breaks.back() = spec.u_half;
    build(S.system(), phi, nullptr);
}

void ChartEvaluator::build(const ModelSystem& base, const Potential& phi, const LeafState* U) {
    if (spec_.nodes < 2)
        throw PreconditionError("chart: need at least two nodes per side");
    if (!(spec_.u_half > 0) || !(spec_.s_half > 0))
        throw PreconditionError("chart: half sizes must be positive");
    fill_matrix(base, M_);
    const int n = spec_.nodes;
    const Vec2 vu = base.v_u(), vs = base.v_s();
    W_.assign(std::size_t(n) * n, 1.0);
    if (!phi.is_constant()) {
        for (int j = 0; j < n; ++j) {
            const double s = -spec_.s_half + 2 * spec_.s_half * j / (n - 1);
            const Vec2 w = spec_.center + s * vs;
            for (int i = 0; i < n; ++i) {
                const double t = -spec_.u_half + 2 * spec_.u_half * i / (n - 1);
                double lw = std::log(delta_along(base, phi, w, t, spec_.N_trunc).value);
                if (U)
                    lw += U->impl().log_jac(spec_.center + t * vu, s);
                W_[std::size_t(j) * n + i] = std::exp(lw);
            }
        }
    }
    const std::size_t np = plaque_.masses.size();
    mid_.resize(np);
    for (std::size_t k = 0; k < np; ++k)
        mid_[k] = 0.5 * (plaque_.breaks[k] + plaque_.breaks[k + 1]);
    prefix_.assign(std::size_t(n) * (np + 1), 0.0);
    const double dt = 2 * spec_.u_half / (n - 1);
    for (int q = 0; q < n; ++q) {
        const double* Wq = &W_[std::size_t(q) * n];
        double* F = &prefix_[std::size_t(q) * (np + 1)];
        for (std::size_t k = 0; k < np; ++k) {
            const double x = std::clamp((mid_[k] + spec_.u_half) / dt, 0.0, double(n - 1));
            const int i = std::min(int(x), n - 2);
            const double b = x - i;
            F[k + 1] = F[k] + ((1 - b) * Wq[i] + b * Wq[i + 1]) * plaque_.masses[k];
        }
    }
}

std::pair<double, double> ChartEvaluator::coords(Vec2 d) const {
    return {M_[0][0] * d.x + M_[0][1] * d.y, M_[1][0] * d.x + M_[1][1] * d.y};
}

double ChartEvaluator::row_prefix(int q, double t) const {
    const auto& br = plaque_.breaks;
    const std::size_t np = plaque_.masses.size();
    const double* F = &prefix_[std::size_t(q) * (np + 1)];
    if (t <= br.front())
        return 0;
    if (t >= br.back())
        return F[np];
    std::size_t k = std::size_t(std::upper_bound(br.begin(), br.end(), t) - br.begin()) - 1;
    k = std::min(k, np - 1);
    const double frac = (t - br[k]) / (br[k + 1] - br[k]);
    return F[k] + (F[k + 1] - F[k]) * frac;
}

double ChartEvaluator::plaque_mass(double s, double t0, double t1) const {
    if (!(t1 > t0))
        return 0;
    const int n = spec_.nodes;
    const double x = std::clamp((s + spec_.s_half) / (2 * spec_.s_half) * (n - 1), 0.0, double(n - 1));
    const int q = std::min(int(x), n - 2);
    const double b = x - q;
    const double m0 = row_prefix(q, t1) - row_prefix(q, t0);
    if (b == 0)
        return m0;
    return (1 - b) * m0 + b * (row_prefix(q + 1, t1) - row_prefix(q + 1, t0));
}

double ChartEvaluator::weight(double t, double s) const {
    const int n = spec_.nodes;
    const double x = std::clamp((t + spec_.u_half) / (2 * spec_.u_half) * (n - 1), 0.0, double(n - 1));
    const double y = std::clamp((s + spec_.s_half) / (2 * spec_.s_half) * (n - 1), 0.0, double(n - 1));
    const int i = std::min(int(x), n - 2), j = std::min(int(y), n - 2);
    const double a = x - i, b = y - j;
    auto at = [&](int jj, int ii) { return W_[std::size_t(jj) * n + ii]; };
    return (1 - b) * ((1 - a) * at(j, i) + a * at(j, i + 1)) + b * ((1 - a) * at(j + 1, i) + a * at(j + 1, i + 1));
}

double ChartEvaluator::mass_rect(double t0, double t1, double s0, double s1) const {
    if (!(t1 > t0) || !(s1 > s0))
        return 0;
    const auto& br = slice_.breaks;
    const std::size_t ns = slice_.masses.size();
    std::size_t k = std::size_t(std::upper_bound(br.begin(), br.end(), s0) - br.begin());
    k = k == 0 ? 0 : k - 1;
    double total = 0;
    for (; k < ns && br[k] < s1; ++k) {
        const double lo = std::max(br[k], s0), hi = std::min(br[k + 1], s1);
        if (hi <= lo)
            continue;
        const double w = slice_.masses[k] * (hi - lo) / (br[k + 1] - br[k]);
        total += w * plaque_mass(0.5 * (lo + hi), t0, t1);
    }
    return total;
}

double ChartEvaluator::mass(const ConvexPolygon& ts) const {
    if (ts.empty())
        return 0;
    const double b = spec_.u_half, a = spec_.s_half;
    auto [tmin, tmax] = ts.extent({1, 0});
    auto [smin, smax] = ts.extent({0, 1});
    const double tol_t = 1e-9 * b + 1e-15, tol_s = 1e-9 * a + 1e-15;
    if (tmin < -b - tol_t || tmax > b + tol_t || smin < -a - tol_s || smax > a + tol_s)
        throw ChartOverflow("chart: query polygon leaves the foliation box");
    smin = std::max(smin, -a);
    smax = std::min(smax, a);
    std::vector<double> vs;
    for (const Vec2& p : ts.vertices())
        vs.push_back(p.y);
    std::sort(vs.begin(), vs.end());

    const auto& br = slice_.breaks;
    const std::size_t ns = slice_.masses.size();
    std::size_t k = std::size_t(std::upper_bound(br.begin(), br.end(), smin) - br.begin());
    k = k == 0 ? 0 : k - 1;
    double total = 0;
    std::vector<double> cuts;
    for (; k < ns && br[k] < smax; ++k) {
        const double lo = std::max(br[k], smin), hi = std::min(br[k + 1], smax);
        if (hi <= lo)
            continue;
        cuts.assign({lo});
        for (double v : vs)
            if (v > lo && v < hi)
                cuts.push_back(v);
        cuts.push_back(hi);
        const double dens = slice_.masses[k] / (br[k + 1] - br[k]);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double sm = 0.5 * (cuts[c] + cuts[c + 1]);
            auto [t0, t1] = t_range(ts, sm);
            if (!(t1 > t0))
                continue;
            total += dens * (cuts[c + 1] - cuts[c]) * plaque_mass(sm, std::max(t0, -b), std::min(t1, b));
        }
    }
    return total;
}

ProductChart make_chart(const LeafState& U, const LeafState& S, const ChartSpec& spec, int grid) {
    if (grid < 1)
        throw PreconditionError("make_chart: grid must be positive");
    ProductChart ch;
    ch.spec = spec;
    ch.grid = grid;
    ch.eval = std::make_shared<ChartEvaluator>(U, S, spec);
    return assemble_m_UW(std::move(ch));
}

double alpha_function(const ProductChart& chart, const std::vector<std::pair<int, int>>& A, double s) {
    double total = 0;
    for (auto [i, j] : A) {
        if (i < 0 || j < 0 || i >= chart.grid || j >= chart.grid)
            throw PreconditionError("alpha_function: cell outside the box");
        const double s0 = chart.cell_s(j), s1 = chart.cell_s(j + 1);
        const bool in_row = (s >= s0 && s < s1) || (j == chart.grid - 1 && s == s1);
        if (in_row)
            total += chart.eval->plaque_mass(s, chart.cell_t(i), chart.cell_t(i + 1));
    }
    return total;
}

namespace {

// integral of alpha over the slice, split at the grid rows
double integrate_alpha(const ProductChart& chart, const std::vector<std::pair<int, int>>& A) {
    double total = 0;
    const auto& sl = chart.eval->slice();
    for (auto [i, j] : A) {
        const double s0 = chart.cell_s(j), s1 = chart.cell_s(j + 1);
        for (std::size_t k = 0; k < sl.masses.size(); ++k) {
            const double lo = std::max(sl.breaks[k], s0), hi = std::min(sl.breaks[k + 1], s1);
            if (hi <= lo)
                continue;
            const double w = sl.masses[k] * (hi - lo) / (sl.breaks[k + 1] - sl.breaks[k]);
            total += w * chart.eval->plaque_mass(0.5 * (lo + hi), chart.cell_t(i), chart.cell_t(i + 1));
        }
    }
    return total;
}

}  // namespace

ProductChart assemble_m_UW(ProductChart chart) {
    if (!chart.eval)
        throw PreconditionError("assemble_m_UW: chart has no solved densities");
    const int g = chart.grid;
    chart.mass_grid.assign(std::size_t(g) * g, 0.0);
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < g; ++i)
            chart.mass_grid[std::size_t(j) * g + i] =
                chart.eval->mass_rect(chart.cell_t(i), chart.cell_t(i + 1), chart.cell_s(j), chart.cell_s(j + 1));
    return chart;
}

double m_UW(const ProductChart& chart, const std::vector<std::pair<int, int>>& A) {
    return integrate_alpha(chart, A);
}

double slice_independence_gap(const ProductChart& chart, const LeafState& U, double t_prime,
                              const LeafState& S_prime) {
    ChartSpec sp = chart.spec;
    sp.center = chart.spec.center + t_prime * U.system().v_u();
    sp.u_half = chart.spec.u_half + std::fabs(t_prime);
    const ChartEvaluator other(U, S_prime, sp);
    const int g = chart.grid;
    std::vector<double> m2(std::size_t(g) * g);
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < g; ++i)
            m2[std::size_t(j) * g + i] = other.mass_rect(chart.cell_t(i) - t_prime, chart.cell_t(i + 1) - t_prime,
                                                         chart.cell_s(j), chart.cell_s(j + 1));
    double a = 0, b = 0;
    for (std::size_t q = 0; q < m2.size(); ++q) {
        a += chart.mass_grid[q];
        b += m2[q];
    }
    double gap = 0;
    for (std::size_t q = 0; q < m2.size(); ++q)
        gap = std::max(gap, std::fabs(chart.mass_grid[q] / a - m2[q] / b));
    return gap * double(m2.size());
}

struct GlobalState::Impl {
    ModelSystem sys;
    std::optional<LeafState> U;  // empty for conformal states
    LeafState S;
    Potential phi;
    CoverSpec cover;
    double c = 1;
    double M[2][2];
    double Minv[2][2];
    std::vector<double> grid;
    double overlap = 0;
    Vec2 overlap_at;

    mutable std::mutex mu;
    mutable std::unordered_map<std::int64_t, std::shared_ptr<const ChartEvaluator>> cache;

    Impl(const ModelSystem& s, std::optional<LeafState> u, const LeafState& st, const CoverSpec& cv)
        : sys(s), U(std::move(u)), S(st), phi(st.potential()), cover(cv) {
        fill_matrix(S.system(), M);
        const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
        Minv[0][0] = M[1][1] / det;
        Minv[0][1] = -M[0][1] / det;
        Minv[1][0] = -M[1][0] / det;
        Minv[1][1] = M[0][0] / det;
    }
    Impl(const Impl& o)
        : sys(o.sys), U(o.U), S(o.S), phi(o.phi), cover(o.cover), c(o.c), grid(o.grid), overlap(o.overlap),
          overlap_at(o.overlap_at) {
        std::copy(&o.M[0][0], &o.M[0][0] + 4, &M[0][0]);
        std::copy(&o.Minv[0][0], &o.Minv[0][0] + 4, &Minv[0][0]);
    }

    std::shared_ptr<const ChartEvaluator> chart(std::int64_t i, std::int64_t j, bool shifted) const {
        const std::int64_t key = ((i + (1 << 20)) << 22) ^ ((j + (1 << 20)) << 1) ^ std::int64_t(shifted);
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        if (cache.size() > 512)
            cache.clear();
        const double o = shifted ? 0.5 : 0.0;
        const double sp = cover.spacing;
        const double u = (double(i) + o) * sp, s = (double(j) + o) * sp;
        ChartSpec spec;
        spec.center = Vec2(Minv[0][0] * u + Minv[0][1] * s, Minv[1][0] * u + Minv[1][1] * s);
        spec.u_half = spec.s_half = 0.5 * sp * 1.02;
        spec.nodes = cover.nodes;
        spec.N_trunc = cover.N_trunc;
        auto ev = make_eval(spec);
        cache.emplace(key, ev);
        return ev;
    }

    std::shared_ptr<const ChartEvaluator> make_eval(const ChartSpec& spec) const {
        if (U)
            return std::make_shared<const ChartEvaluator>(*U, S, spec);
        return std::make_shared<const ChartEvaluator>(S, phi, spec);
    }

    double raw_mass(const ConvexPolygon& P, bool shifted) const {
        if (P.empty())
            return 0;
        auto [x0, x1] = P.extent({1, 0});
        auto [y0, y1] = P.extent({0, 1});
        const double o = shifted ? 0.5 : 0.0;
        const double sp = cover.spacing;
        double total = 0;
        for (long mx = long(std::floor(x0)); double(mx) < x1; ++mx)
            for (long my = long(std::floor(y0)); double(my) < y1; ++my) {
                ConvexPolygon piece = P.intersect(ConvexPolygon::rectangle(mx, my, mx + 1, my + 1));
                if (piece.empty())
                    continue;
                piece = piece.translated(Vec2(-double(mx), -double(my)));
                const ConvexPolygon q = piece.mapped(M[0][0], M[0][1], M[1][0], M[1][1]);
                auto [u0, u1] = q.extent({1, 0});
                auto [s0, s1] = q.extent({0, 1});
                const auto i0 = std::int64_t(std::floor(u0 / sp - o + 0.5)), i1 = std::int64_t(std::floor(u1 / sp - o + 0.5));
                const auto j0 = std::int64_t(std::floor(s0 / sp - o + 0.5)), j1 = std::int64_t(std::floor(s1 / sp - o + 0.5));
                for (auto i = i0; i <= i1; ++i)
                    for (auto j = j0; j <= j1; ++j) {
                        const double cu = (double(i) + o) * sp, cs = (double(j) + o) * sp;
                        const ConvexPolygon r =
                            q.intersect(ConvexPolygon::rectangle(cu - 0.5 * sp, cs - 0.5 * sp, cu + 0.5 * sp, cs + 0.5 * sp));
                        if (r.empty())
                            continue;
                        total += chart(i, j, shifted)->mass(r.translated(Vec2(-cu, -cs)));
                    }
            }
        return total;
    }
};

const ModelSystem& GlobalState::system() const { return impl_->sys; }
const Potential& GlobalState::potential() const { return impl_->phi; }
const LeafState& GlobalState::unstable() const {
    if (!impl_->U)
        throw PreconditionError("conformal state: no unstable family");
    return *impl_->U;
}
const LeafState& GlobalState::stable() const { return impl_->S; }
const CoverSpec& GlobalState::cover() const { return impl_->cover; }
bool GlobalState::conformal() const { return !impl_->U; }
double GlobalState::P() const { return impl_->S.P(); }
double GlobalState::normalization_c() const { return impl_->c; }
int GlobalState::dim() const { return impl_->sys.dim(); }
const std::vector<double>& GlobalState::grid_masses() const { return impl_->grid; }
double GlobalState::overlap_discrepancy() const { return impl_->overlap; }
Vec2 GlobalState::overlap_location() const { return impl_->overlap_at; }

double GlobalState::mass(const ConvexPolygon& P) const { return impl_->c * impl_->raw_mass(P, false); }
double GlobalState::mass_shifted(const ConvexPolygon& P) const { return impl_->c * impl_->raw_mass(P, true); }

double GlobalState::mass_local(Vec2 center, const ConvexPolygon& rel) const {
    const auto& im = *impl_;
    const ConvexPolygon q = rel.mapped(im.M[0][0], im.M[0][1], im.M[1][0], im.M[1][1]);
    auto [u0, u1] = q.extent({1, 0});
    auto [s0, s1] = q.extent({0, 1});
    ChartSpec spec;
    spec.center = center;
    spec.u_half = std::max(std::fabs(u0), std::fabs(u1)) * (1 + 1e-9);
    spec.s_half = std::max(std::fabs(s0), std::fabs(s1)) * (1 + 1e-9);
    spec.nodes = im.cover.nodes;
    spec.N_trunc = im.cover.N_trunc;
    return im.c * im.make_eval(spec)->mass(q);
}

double GlobalState::total_mass() const {
    double s = 0;
    for (double m : impl_->grid)
        s += m;
    return s;
}

GlobalState GlobalState::with_normalization(double c) const {
    if (!(c > 0))
        throw PreconditionError("with_normalization: c must be positive");
    auto im = std::make_shared<Impl>(*impl_);
    for (double& m : im->grid)
        m *= c / impl_->c;
    im->c = c;
    return GlobalState(im);
}

LeafSegment default_unstable_window(const ModelSystem& sys) {
    return leaf_segment(sys.base_system(), TorusPoint(0.1, 0.2), LeafType::u, 0.5);
}

LeafSegment default_stable_window(const ModelSystem& sys) {
    return leaf_segment(sys.base_system(), TorusPoint(0.7, 0.4), LeafType::s, 0.5);
}

GlobalState assemble_global(const ModelSystem& sys, const Potential& phi, const CoverSpec& cover) {
    const ModelSystem base = sys.base_system();
    const LeafState U = solve_leaf_state(base, phi, default_unstable_window(sys), cover.resolution_k, cover.leaf_tol);
    const LeafState S = solve_leaf_state(base, phi, default_stable_window(sys), cover.resolution_k, cover.leaf_tol);
    return assemble_global(sys, U, S, cover);
}

namespace {

GlobalState glue(const ModelSystem& sys, std::optional<LeafState> U, const LeafState& S, const CoverSpec& cover) {
    if (S.side() != LeafSide::stable)
        throw PreconditionError("assemble_global: needs a stable state");
    if (cover.grid < 1 || !(cover.spacing > 0) || cover.spacing > 0.25)
        throw PreconditionError("assemble_global: invalid cover specification");
    auto im = std::make_shared<GlobalState::Impl>(sys, std::move(U), S, cover);
    const int g = cover.grid;
    im->grid.assign(std::size_t(g) * g, 0.0);
    double total = 0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const auto cell = ConvexPolygon::rectangle(double(i) / g, double(j) / g, double(i + 1) / g, double(j + 1) / g);
            const double m = im->raw_mass(cell, false);
            im->grid[std::size_t(i) * g + j] = m;
            total += m;
        }
    if (!(total > 0))
        throw Starvation("assemble_global: the cover carries no mass");
    im->c = 1.0 / total;
    for (double& m : im->grid)
        m *= im->c;
    // cross-check against the cover shifted by half a spacing on sampled cells
    im->cache.clear();
    for (int q = 0; q < g * g; q += 61) {
        const int i = q / g, j = q % g;
        const auto cell = ConvexPolygon::rectangle(double(i) / g, double(j) / g, double(i + 1) / g, double(j + 1) / g);
        const double a = im->grid[std::size_t(q)];
        const double b = im->c * im->raw_mass(cell, true);
        const double d = std::fabs(a - b) / a;
        if (d > im->overlap) {
            im->overlap = d;
            im->overlap_at = Vec2((i + 0.5) / g, (j + 0.5) / g);
        }
    }
    im->cache.clear();
    if (im->overlap > cover.overlap_tol)
        throw Error("assemble_global: overlapping charts disagree by " + std::to_string(im->overlap) + " near (" +
                    std::to_string(im->overlap_at.x) + ", " + std::to_string(im->overlap_at.y) + ")");
    return GlobalState(im);
}

}  // namespace

GlobalState assemble_global(const ModelSystem& sys, const LeafState& U, const LeafState& S, const CoverSpec& cover) {
    if (U.side() != LeafSide::unstable)
        throw PreconditionError("assemble_global: needs an unstable state");
    return glue(sys, U, S, cover);
}

GlobalState assemble_conformal(const ModelSystem& sys, const LeafState& S, const CoverSpec& cover) {
    return glue(sys, std::nullopt, S, cover);
}

double invariance_residual(const GlobalState& state) {
    if (std::fabs(state.total_mass() - 1) > 1e-9)
        throw PreconditionError("invariance_residual: the state is not normalized");
    const Mat2i& B = state.system().inverse_matrix();
    const int g = state.cover().grid;
    const auto& grid = state.grid_masses();
    double worst = 0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const auto cell = ConvexPolygon::rectangle(double(i) / g, double(j) / g, double(i + 1) / g, double(j + 1) / g);
            const ConvexPolygon pre = cell.mapped(B.a, B.b, B.c, B.d);
            const double a = grid[std::size_t(i) * g + j];
            worst = std::max(worst, std::fabs(state.mass(pre) - a) / a);
        }
    return worst;
}

double tv_to_lebesgue(const GlobalState& state) {
    const auto& grid = state.grid_masses();
    const double u = 1.0 / double(grid.size());
    double s = 0;
    for (double m : grid)
        s += std::fabs(m - u);
    return 0.5 * s;
}

GibbsReport gibbs_ratio(const GlobalState& state, const TorusPoint& x, double epsilon, const std::vector<int>& n_values) {
    if (state.dim() != 2)
        throw PreconditionError("gibbs_ratio: planar systems only");
    if (n_values.size() < 2)
        throw PreconditionError("gibbs_ratio: at least two n values are needed for a slope");
    const ModelSystem& sys = state.system();
    const Potential& phi = state.potential();
    GibbsReport rep;
    rep.n_values = n_values;
    std::vector<double> xs;
    for (int n : n_values) {
        const ConvexPolygon ball = bowen_polygon(sys, epsilon, n);
        const double m = state.mass_local(x.base(), ball);
        if (!(m > 0))
            throw Starvation("gibbs_ratio: Bowen ball carries no mass at n=" + std::to_string(n));
        rep.r.push_back(std::log(m) - (birkhoff_sum(sys, phi, x, n) - n * state.P()));
        xs.push_back(n);
    }
    rep.slope = fit_line(xs, rep.r).slope;
    auto [lo, hi] = std::minmax_element(rep.r.begin(), rep.r.end());
    rep.range = *hi - *lo;
    return rep;
}

ConditionalReport conditional_density_compare(const GlobalState& state, const PartitionSpec& spec) {
    if (state.dim() != 2)
        throw PreconditionError("conditional_density_compare: planar systems only");
    if (spec.pieces < 2 || !(spec.u_half > 0))
        throw PreconditionError("conditional_density_compare: invalid partition");
    const LeafState& U = state.unstable();
    const ModelSystem& base = U.system();
    const Potential& phi = U.potential();
    const Vec2 x = base.iterate_base(spec.x.base(), 0);
    const Vec2 vu = base.v_u(), vs = base.v_s();
    const int np = spec.pieces;
    const double b = spec.u_half;
    auto edge = [&](int i) { return -b + 2 * b * i / np; };

    // nu^u_x on the plaque through x
    std::vector<double> ref(np, 0.0);
    for (int i = 0; i < np; ++i) {
        const SegmentMeasure sm = U.segment_measure(x, edge(i), edge(i + 1));
        for (std::size_t k = 0; k < sm.masses.size(); ++k) {
            const double tm = 0.5 * (sm.breaks[k] + sm.breaks[k + 1]);
            ref[i] += sm.masses[k] * delta_along(base, phi, x, tm, state.cover().N_trunc).value;
        }
    }
    double rt = 0;
    for (double r : ref)
        rt += r;

    ConditionalReport rep;
    rep.strip_widths = spec.strip_widths;
    for (double delta : spec.strip_widths) {
        if (!(delta > 0))
            throw PreconditionError("conditional_density_compare: strip widths must be positive");
        std::vector<double> m(np);
        double mt = 0;
        for (int i = 0; i < np; ++i) {
            const double h = 0.5 * (edge(i + 1) - edge(i));
            const auto P = ConvexPolygon::parallelogram(x + (edge(i) + h) * vu, vu, h, vs, 0.5 * delta);
            m[i] = state.mass(P);
            mt += m[i];
        }
        if (!(mt > 0))
            throw Starvation("conditional_density_compare: strip carries no mass");
        double dev = 0, arc = 0;
        for (int i = 0; i < np; ++i) {
            dev = std::max(dev, std::fabs((m[i] / mt) / (ref[i] / rt) - 1));
            arc = std::max(arc, std::fabs((m[i] / mt) * np - 1));
        }
        rep.deviation.push_back(dev);
        rep.arc_deviation.push_back(arc);
    }
    return rep;
}

}  // namespace thermo
