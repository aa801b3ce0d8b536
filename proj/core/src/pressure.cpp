#include "thermo/pressure.hpp"

#include <algorithm>
#include <numeric>

namespace thermo {

SpanningCell spanning_cell(const ModelSystem& sys, double eps, int n) {
    const double lam = sys.lambda();
    const double nu = sys.v_u().norm_inf(), ns = sys.v_s().norm_inf();
    double beta = 0.999;
    double drift_factor = 0;
    if (sys.has_center()) {
        // center drift over n steps is at most C * sum_i |A^i v|_inf
        const double C = sys.cocycle().lipschitz_max();
        drift_factor = C * (lam + 1) / (lam - 1);
        beta = std::min(beta, 1.0 / (1.0 + drift_factor));
    }
    SpanningCell cell;
    cell.u = beta * eps / (2 * nu * std::pow(lam, n - 1));
    cell.s = beta * eps / (2 * ns);
    if (sys.has_center())
        cell.c = 0.999 * (eps - 0.5 * beta * eps * drift_factor);
    return cell;
}

namespace {

struct RowRange {
    double s;
    std::int64_t i_lo, i_hi;
};

// Lattice rows of cells (in (u,s) coordinates) that meet the unit square.
std::vector<RowRange> lattice_rows(const ModelSystem& sys, const SpanningCell& cell) {
    std::vector<Vec2> q;
    for (Vec2 c : {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}) {
        auto [u, s] = sys.decompose(c);
        q.emplace_back(u, s);
    }
    ConvexPolygon Q(q);
    if (Q.area() < 0) {
        std::reverse(q.begin(), q.end());
        Q = ConvexPolygon(q);
    }
    auto [smin, smax] = Q.extent({0, 1});
    const double ws = 2 * cell.s, wu = 2 * cell.u;
    const auto j_lo = static_cast<std::int64_t>(std::floor((smin - cell.s) / ws));
    const auto j_hi = static_cast<std::int64_t>(std::ceil((smax + cell.s) / ws));
    std::vector<RowRange> rows;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const double s = j * ws;
        ConvexPolygon strip = Q.clipped({0, 1}, s + cell.s).clipped({0, -1}, -(s - cell.s));
        if (strip.empty())
            continue;
        auto [umin, umax] = strip.extent({1, 0});
        RowRange r;
        r.s = s;
        r.i_lo = static_cast<std::int64_t>(std::ceil((umin - cell.u) / wu));
        r.i_hi = static_cast<std::int64_t>(std::floor((umax + cell.u) / wu));
        if (r.i_hi >= r.i_lo)
            rows.push_back(r);
    }
    return rows;
}

}  // namespace

double spanning_log_sum(const ModelSystem& sys, const Potential& phi, double eps, int n,
                        const SpanningOptions& opts, double* cardinality) {
    if (!(eps > 0) || eps > 0.2)
        throw PreconditionError("spanning_pressure: epsilon must lie in (0, 0.2]");
    if (n < 1)
        throw PreconditionError("spanning_pressure: n must be >= 1");
    const SpanningCell cell = spanning_cell(sys, eps, n);
    if (2 * cell.u < opts.min_spacing)
        throw ResolutionExhausted("spanning_pressure: unstable lattice spacing underflows the configured minimum");
    const auto rows = lattice_rows(sys, cell);
    double count = 0;
    for (const auto& r : rows)
        count += double(r.i_hi - r.i_lo + 1);
    double center_count = 1;
    if (sys.has_center())
        center_count = std::ceil(1.0 / (2 * cell.c));
    if (cardinality)
        *cardinality = count * center_count;
    const double c0 = phi.constant_part();
    if (phi.is_constant())
        return std::log(count) + std::log(center_count) + n * c0;
    if (count > opts.max_points)
        throw ResolutionExhausted("spanning_pressure: lattice has " + std::to_string(count) +
                                  " centers, above the configured budget");
    // phi depends on base coordinates only, so center copies share one sum
    const Potential tilde = phi.shifted(-c0);
    const Vec2 vu = sys.v_u(), vs = sys.v_s();
    const double wu = 2 * cell.u;
    double total = 0;
    for (const auto& r : rows) {
        double row_sum = 0;
        for (std::int64_t i = r.i_lo; i <= r.i_hi; ++i) {
            Vec2 x = wrap01((i * wu) * vu + r.s * vs);
            double S = 0;
            for (int k = 0; k < n; ++k) {
                S += tilde.eval_base(x);
                x = sys.map_base(x);
            }
            row_sum += std::exp(S);
        }
        total += row_sum;
    }
    return std::log(total) + std::log(center_count) + n * c0;
}

PressureEstimate spanning_pressure(const ModelSystem& sys, const Potential& phi, double eps,
                                   const std::vector<int>& n_values, const SpanningOptions& opts) {
    if (n_values.size() < 2)
        throw PreconditionError("spanning_pressure: slope needs at least two n values");
    PressureEstimate est;
    est.epsilon = eps;
    est.n_values = n_values;
    std::vector<double> xs;
    for (int n : n_values) {
        double card = 0;
        est.log_sums.push_back(spanning_log_sum(sys, phi, eps, n, opts, &card));
        est.cardinalities.push_back(card);
        xs.push_back(n);
    }
    const LineFit fit = fit_line(xs, est.log_sums);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.slope_ci = fit.slope_stderr;
    est.rms_residual = fit.rms_residual;
    return est;
}

SampledMeasure SampledMeasure::lebesgue(const ModelSystem& sys, std::size_t count, std::uint64_t seed) {
    SampledMeasure m;
    m.label = "lebesgue";
    Rng rng(seed);
    m.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double a = rng.uniform(), b = rng.uniform();
        if (sys.has_center())
            m.points.emplace_back(a, b, rng.uniform());
        else
            m.points.emplace_back(a, b);
    }
    return m;
}

SampledMeasure SampledMeasure::atom(const TorusPoint& p, std::size_t count) {
    SampledMeasure m;
    m.label = "atom";
    m.points.assign(count, p);
    return m;
}

SampledMeasure SampledMeasure::orbit(const ModelSystem& sys, const TorusPoint& x0, std::size_t count) {
    SampledMeasure m;
    m.label = "orbit";
    m.points.reserve(count);
    TorusPoint x = x0;
    for (std::size_t i = 0; i < count; ++i) {
        m.points.push_back(x);
        x = apply(sys, x, 1);
    }
    return m;
}

double local_entropy(const ModelSystem& sys, const SampledMeasure& mu, const TorusPoint& x,
                     const LocalEntropyOptions& opts) {
    if (opts.n_values.size() < 2)
        throw PreconditionError("local_entropy: degenerate fit, at least two n values are needed");
    if (mu.points.empty())
        throw Starvation("local_entropy: empty sample");
    const int n_max = *std::max_element(opts.n_values.begin(), opts.n_values.end());
    std::vector<TorusPoint> xorb;
    TorusPoint xc = x;
    for (int j = 0; j < n_max; ++j) {
        xorb.push_back(xc);
        xc = apply(sys, xc, 1);
    }
    // survivors[j] = samples whose first j iterates stay eps-close
    std::vector<std::size_t> survivors(n_max + 1, 0);
    for (const auto& y0 : mu.points) {
        TorusPoint y = y0;
        int j = 0;
        while (j < n_max && torus_distance(xorb[j], y) < opts.epsilon) {
            ++j;
            if (j < n_max)
                y = apply(sys, y, 1);
        }
        survivors[j] += 1;
    }
    for (int j = n_max - 1; j >= 0; --j)
        survivors[j] += survivors[j + 1];
    std::vector<double> xs, ys;
    for (int n : opts.n_values) {
        if (n < 1)
            throw PreconditionError("local_entropy: n values must be >= 1");
        const std::size_t c = survivors[n];
        if (c < opts.min_samples)
            throw Starvation("local_entropy: only " + std::to_string(c) + " samples in the Bowen ball at n=" +
                             std::to_string(n));
        xs.push_back(n);
        ys.push_back(-std::log(double(c) / double(mu.points.size())));
    }
    return fit_line(xs, ys).slope;
}

double metric_pressure(const ModelSystem& sys, const Potential& phi, const SampledMeasure& mu,
                       const std::vector<TorusPoint>& x_samples, const LocalEntropyOptions& opts) {
    if (x_samples.empty())
        throw PreconditionError("metric_pressure: no sample centers");
    double h = 0;
    for (const auto& x : x_samples)
        h += local_entropy(sys, mu, x, opts);
    h /= double(x_samples.size());
    CompensatedSum integral;
    for (const auto& p : mu.points)
        integral.add(phi.eval(p));
    return h + integral.value() / double(mu.points.size());
}

}  // namespace thermo
