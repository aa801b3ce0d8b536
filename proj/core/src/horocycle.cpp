#include "thermo/horocycle.hpp"

#include <algorithm>
#include <cmath>

namespace thermo {

HoroFlow::HoroFlow(const ModelSystem& sys) : sys_(sys) {
    if (sys.has_center())
        throw PreconditionError("horocycle: planar systems only");
}

namespace {

// frac(x + t v) with t * v carried as an exact product
double shift_coord(double x, double t, double v) {
    const double hi = t * v;
    const double lo = std::fma(t, v, -hi);
    return wrap01((hi - std::floor(hi)) + (x + lo));
}

}  // namespace

TorusPoint flow(const HoroFlow& hf, const TorusPoint& x, double t) {
    if (!(std::fabs(t) <= 1e7))
        throw PreconditionError("flow: |t| must be <= 1e7");
    if (x.dim() != 2)
        throw PreconditionError("flow: planar points only");
    const Vec2 v = hf.direction();
    return TorusPoint(shift_coord(x.base().x, t, v.x), shift_coord(x.base().y, t, v.y));
}

TruncatedValue jacobian_cocycle(const HoroFlow& hf, const Potential& phi, const TorusPoint& x, double t, int N) {
    return delta_along(hf.system(), phi, x.base(), t, N);
}

std::string to_string(ConstructionRoute r) {
    return r == ConstructionRoute::leaf_product ? "leaf_product" : "reweighted_average";
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw PreconditionError("total_variation: grids differ in size");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

double ConformalCandidate::mass(const ConvexPolygon& P) const {
    if (state)
        return state->mass(P);
    if (P.empty())
        return 0;
    const int g = grid;
    auto [x0, x1] = P.extent({1, 0});
    auto [y0, y1] = P.extent({0, 1});
    double total = 0;
    for (long i = long(std::floor(x0 * g)); double(i) < x1 * g; ++i)
        for (long j = long(std::floor(y0 * g)); double(j) < y1 * g; ++j) {
            const auto cell = ConvexPolygon::rectangle(double(i) / g, double(j) / g, double(i + 1) / g, double(j + 1) / g);
            const double a = P.intersect(cell).area();
            if (a <= 0)
                continue;
            const long ii = ((i % g) + g) % g, jj = ((j % g) + g) % g;
            total += grid_masses[std::size_t(ii) * g + jj] * a * g * g;
        }
    return total;
}

ConformalCandidate grid_candidate(std::vector<double> masses, const Potential& phi) {
    const auto g = int(std::lround(std::sqrt(double(masses.size()))));
    if (g < 1 || std::size_t(g) * g != masses.size())
        throw PreconditionError("grid_candidate: masses must form a square grid");
    double s = 0;
    for (double m : masses) {
        if (!(m >= 0))
            throw PreconditionError("grid_candidate: masses must be nonnegative");
        s += m;
    }
    if (!(s > 0))
        throw PreconditionError("grid_candidate: zero total mass");
    for (double& m : masses)
        m /= s;
    ConformalCandidate c;
    c.grid = g;
    c.grid_masses = std::move(masses);
    c.jacobian_source = phi;
    c.route = ConstructionRoute::reweighted_average;
    return c;
}

namespace {

// Accumulates Delta_p(y) dsigma over y = p - sigma v_u, sigma in [s0, s1],
// into grid cells. Weights are carried relative to exp(shift).
class OrbitAccumulator {
public:
    OrbitAccumulator(const ModelSystem& sys, const Potential& phi, Vec2 p, int grid, int N)
        : phi_(phi), p_(sys.iterate_base(p, 0)), g_(grid), d_(sys.v_u() * -1.0), acc_(std::size_t(grid) * grid, 0.0) {
        if (!phi.is_constant()) {
            const double inv = 1.0 / sys.unstable_eigenvalue();
            Vec2 q = p_;
            double sc = 1;
            for (int k = 1; k <= N; ++k) {
                q = sys.iterate_base(q, -1);
                sc *= inv;
                orbit_.push_back(q);
                scale_.push_back(sc);
            }
        }
    }

    double log_delta(double tau) const {
        double s = 0;
        for (std::size_t k = 0; k < orbit_.size(); ++k) {
            const double off = tau * scale_[k];
            if (std::fabs(off) < 1e-18)
                break;
            s += phi_.eval_base(orbit_[k] + off * Vec2(-d_.x, -d_.y)) - phi_.eval_base(orbit_[k]);
        }
        return s;
    }

    void run(double s0, double s1) {
        if (!(s1 > s0))
            return;
        const double eps = 1e-12 * std::max(1.0, s0);
        const Vec2 y = p_ + (s0 + eps) * d_;
        long ix = long(std::floor(y.x * g_)), iy = long(std::floor(y.y * g_));
        double cur = s0;
        while (cur < s1) {
            const double sx = next_crossing(p_.x, d_.x, ix);
            const double sy = next_crossing(p_.y, d_.y, iy);
            const double nxt = std::min({sx, sy, s1});
            if (nxt > cur) {
                const double mid = 0.5 * (cur + nxt);
                add(ix, iy, -mid, nxt - cur);
            }
            cur = nxt;
            if (nxt == sx)
                ix += d_.x > 0 ? 1 : -1;
            else if (nxt == sy)
                iy += d_.y > 0 ? 1 : -1;
        }
    }

    /// normalized grid
    std::vector<double> normalized() const {
        double s = 0;
        for (double a : acc_)
            s += a;
        std::vector<double> out(acc_);
        for (double& a : out)
            a /= s;
        return out;
    }

private:
    double next_crossing(double p, double d, long i) const {
        if (d > 0)
            return (double(i + 1) / g_ - p) / d;
        if (d < 0)
            return (double(i) / g_ - p) / d;
        return INFINITY;
    }

    void add(long ix, long iy, double tau, double len) {
        const double lw = orbit_.empty() ? 0.0 : log_delta(tau);
        if (lw - shift_ > 500) {
            const double f = std::exp(shift_ - lw);
            for (double& a : acc_)
                a *= f;
            shift_ = lw;
        }
        const long i = ((ix % g_) + g_) % g_, j = ((iy % g_) + g_) % g_;
        acc_[std::size_t(i) * g_ + j] += std::exp(lw - shift_) * len;
    }

    const Potential& phi_;
    Vec2 p_;
    long g_;
    Vec2 d_;
    std::vector<double> acc_;
    std::vector<Vec2> orbit_;
    std::vector<double> scale_;
    double shift_ = 0;
};

std::vector<Vec2> seed_starts(const SeedMeasure& seed) {
    if (seed.kind == SeedMeasure::atom)
        return {seed.point};
    if (seed.starts < 1)
        throw PreconditionError("seed measure: needs at least one start point");
    Rng rng(derive_seed(seed.seed, "horocycle-lebesgue-starts"));
    std::vector<Vec2> out;
    for (int i = 0; i < seed.starts; ++i) {
        const double a = rng.uniform();
        out.emplace_back(a, rng.uniform());
    }
    return out;
}

ConformalCandidate reweighted_average(const HoroFlow& hf, const Potential& phi, const ConformalOptions& opts) {
    if (!(opts.T > 0) || opts.T > 1e7)
        throw PreconditionError("reweighted_average: T must lie in (0, 1e7]");
    const int g = opts.grid;
    const auto starts = seed_starts(opts.seed);
    std::vector<double> half(std::size_t(g) * g, 0.0), full(half);
    for (Vec2 p : starts) {
        OrbitAccumulator acc(hf.system(), phi, p, g, opts.N_trunc);
        acc.run(0, 0.5 * opts.T);
        const auto h = acc.normalized();
        acc.run(0.5 * opts.T, opts.T);
        const auto f = acc.normalized();
        for (std::size_t q = 0; q < half.size(); ++q) {
            half[q] += h[q] / double(starts.size());
            full[q] += f[q] / double(starts.size());
        }
    }
    ConformalCandidate c = grid_candidate(full, phi);
    c.horizon_gap = total_variation(half, c.grid_masses);
    if (c.horizon_gap > opts.convergence_tol)
        throw NonConvergence("reweighted_average: half and full horizon averages differ", c.horizon_gap);
    return c;
}

}  // namespace

ConformalCandidate build_conformal_candidate(const HoroFlow& hf, const Potential& phi, ConstructionRoute route,
                                             const ConformalOptions& opts) {
    if (opts.grid < 1)
        throw PreconditionError("build_conformal_candidate: grid must be positive");
    if (route == ConstructionRoute::reweighted_average)
        return reweighted_average(hf, phi, opts);
    const ModelSystem& sys = hf.system();
    const LeafState S = solve_leaf_state(sys, phi, default_stable_window(sys), opts.resolution_k);
    CoverSpec cover;
    cover.grid = opts.grid;
    cover.resolution_k = opts.resolution_k;
    cover.N_trunc = opts.N_trunc;
    GlobalState st = assemble_conformal(sys, S, cover);
    ConformalCandidate c;
    c.grid = opts.grid;
    c.grid_masses = st.grid_masses();
    c.jacobian_source = phi;
    c.route = route;
    c.state = st;
    return c;
}

double conformality_residual(const ConformalCandidate& cand, const HoroFlow& hf, const std::vector<double>& t_values,
                             int test_grid, int sub, int N) {
    if (test_grid < 1 || sub < 1)
        throw PreconditionError("conformality_residual: invalid test grid");
    const Vec2 v = hf.direction();
    const Potential& phi = cand.jacobian_source;
    const int g = test_grid;
    double worst = 0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const double x0 = double(i) / g, y0 = double(j) / g, w = 1.0 / g, ws = w / sub;
            const auto A = ConvexPolygon::rectangle(x0, y0, x0 + w, y0 + w);
            const double mA = cand.mass(A);
            if (!(mA > 0))
                continue;
            std::vector<double> sub_mass;
            for (int a = 0; a < sub; ++a)
                for (int b = 0; b < sub; ++b)
                    sub_mass.push_back(cand.mass(
                        ConvexPolygon::rectangle(x0 + a * ws, y0 + b * ws, x0 + (a + 1) * ws, y0 + (b + 1) * ws)));
            for (double t : t_values) {
                const double lhs = cand.mass(A.translated(t * v));
                double rhs = 0;
                int q = 0;
                for (int a = 0; a < sub; ++a)
                    for (int b = 0; b < sub; ++b, ++q) {
                        const Vec2 c(x0 + (a + 0.5) * ws, y0 + (b + 0.5) * ws);
                        rhs += delta_along(hf.system(), phi, c, t, N).value * sub_mass[q];
                    }
                worst = std::max(worst, std::fabs(lhs - rhs) / mA);
            }
        }
    return worst;
}

UniquenessReport uniqueness_gap(const HoroFlow& hf, const Potential& phi, const std::vector<SeedMeasure>& seeds,
                                const ConformalOptions& opts) {
    if (seeds.size() < 2)
        throw PreconditionError("uniqueness_gap: at least two seed measures are needed");
    UniquenessReport rep;
    for (const auto& s : seeds) {
        ConformalOptions o = opts;
        o.seed = s;
        rep.candidates.push_back(build_conformal_candidate(hf, phi, ConstructionRoute::reweighted_average, o));
    }
    for (std::size_t a = 0; a < rep.candidates.size(); ++a)
        for (std::size_t b = a + 1; b < rep.candidates.size(); ++b)
            rep.gap = std::max(rep.gap, total_variation(rep.candidates[a].grid_masses, rep.candidates[b].grid_masses));
    if (phi.is_constant())
        rep.equidistribution_error = equidistribution(hf, seeds.front().point, opts.T, default_trig_tests());
    return rep;
}

std::vector<TrigTest> default_trig_tests() {
    return {{false, 1, 0}, {true, 0, 1}, {false, 1, 1}, {false, 1, -2}, {true, 3, 1}};
}

namespace {

double trig_at(const TrigTest& g, Vec2 x) {
    const double ph = kTwoPi * wrap_half(g.m1 * x.x + g.m2 * x.y);
    return g.is_sin ? std::sin(ph) : std::cos(ph);
}

}  // namespace

double orbit_average(const HoroFlow& hf, const TrigTest& g, Vec2 x, double T, int panels) {
    if (!(T > 0) || panels < 1)
        throw PreconditionError("orbit_average: T and panels must be positive");
    // composite Simpson on [0, T]
    const int n = 2 * panels;
    const double h = T / n;
    const TorusPoint p = TorusPoint::planar(x);
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * trig_at(g, flow(hf, p, i * h).base());
    }
    return s * h / 3 / T;
}

double orbit_average_exact(const HoroFlow& hf, const TrigTest& g, Vec2 x, double T) {
    const Vec2 v = hf.direction();
    const double a = kTwoPi * (g.m1 * x.x + g.m2 * x.y);
    const double w = kTwoPi * (g.m1 * v.x + g.m2 * v.y);
    if (w == 0)
        return g.is_sin ? std::sin(a) : std::cos(a);
    // integral of cos/sin(a + w s) over [0, T], divided by T
    if (g.is_sin)
        return (std::cos(a) - std::cos(a + w * T)) / (w * T);
    return (std::sin(a + w * T) - std::sin(a)) / (w * T);
}

double equidistribution(const HoroFlow& hf, Vec2 x, double T, const std::vector<TrigTest>& tests) {
    double worst = 0;
    for (const auto& g : tests) {
        if (g.m1 == 0 && g.m2 == 0)
            throw PreconditionError("equidistribution: test functions need a nonzero frequency");
        const int panels = std::max(64, int(std::ceil(T * 8)));
        worst = std::max(worst, std::fabs(orbit_average(hf, g, x, T, panels)));
    }
    return worst;
}

}  // namespace thermo
