#include "acceptance.hpp"

#include "serialize.hpp"

#include "thermo/horocycle.hpp"
#include "thermo/julienne.hpp"
#include "thermo/pressure.hpp"
#include "thermo/product_states.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace thermo::app {

namespace {

const std::vector<std::string> kTestPotentials = {"zero", "const:0.1", "srb", "cos:0.2"};
constexpr const char* kTrig = "cos:0.2";

// Pinned tolerances, one block per criterion.
constexpr double kPressureAgree = 0.02;
constexpr double kPressureRuntime = 300;
constexpr double kShiftTol = 1e-9;
constexpr double kLeafResidual = 1e-6;
constexpr double kConstantJacobian = 1e-12;
constexpr double kRounding = 1e-12;
constexpr double kSliceConstant = 1e-10;
constexpr double kLebesgueTV = 1e-3;
constexpr double kInvariance = 1e-3;
constexpr double kGibbsSlope = 0.01;
constexpr double kGibbsEpsilon = 0.2;
constexpr double kGibbsRangeBound = 1.0;
constexpr double kConditional = 5e-3;
constexpr double kConformal = 5e-3;
constexpr double kHorocycleGap = 0.02;
constexpr double kEquidistribution = 0.01;
constexpr double kHorocycleRuntime = 600;
constexpr double kExtent = 1e-12;
constexpr double kMassRatio = 0.10;
constexpr double kBand = 0.05;
constexpr double kVariational = 0.05;

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int n = a; n <= b; ++n)
        v.push_back(n);
    return v;
}

class Context {
public:
    explicit Context(std::uint64_t seed) : seed(seed), cat(ModelSystem::cat_map()) {}

    std::uint64_t seed;
    ModelSystem cat;

    Potential potential(const std::string& name) const { return Potential::parse(name, cat); }

    const LeafState& leaf(const std::string& phi, LeafSide side, int k) {
        const auto key = std::make_tuple(phi, side, k);
        auto it = leaves_.find(key);
        if (it == leaves_.end()) {
            const auto w = side == LeafSide::unstable ? default_unstable_window(cat) : default_stable_window(cat);
            it = leaves_.emplace(key, solve_leaf_state(cat, potential(phi), w, k)).first;
        }
        return it->second;
    }

    const GlobalState& global(const std::string& phi, int k) {
        const auto key = std::make_pair(phi, k);
        auto it = globals_.find(key);
        if (it == globals_.end()) {
            CoverSpec cover;
            cover.resolution_k = k;
            it = globals_
                     .emplace(key, assemble_global(cat, leaf(phi, LeafSide::unstable, k),
                                                   leaf(phi, LeafSide::stable, k), cover))
                     .first;
        }
        return it->second;
    }

    const PressureEstimate& spanning(const std::string& phi) {
        auto it = spanning_.find(phi);
        if (it == spanning_.end())
            it = spanning_.emplace(phi, spanning_pressure(cat, potential(phi), 0.05, range(4, 12))).first;
        return it->second;
    }

    std::vector<Vec2> random_points(const std::string& label, int count) const {
        Rng rng(derive_seed(seed, label));
        std::vector<Vec2> out;
        for (int i = 0; i < count; ++i) {
            const double a = rng.uniform();
            out.emplace_back(a, rng.uniform());
        }
        return out;
    }

private:
    std::map<std::tuple<std::string, LeafSide, int>, LeafState> leaves_;
    std::map<std::pair<std::string, int>, GlobalState> globals_;
    std::map<std::string, PressureEstimate> spanning_;
};

CriterionResult start(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

std::string tag(const std::string& phi) {
    std::string s = phi;
    std::replace(s.begin(), s.end(), ':', '_');
    return s;
}

CriterionResult pressure_cross_validation(Context& ctx) {
    CriterionResult r = start(1, "pressure cross-validation");
    const double t0 = now();
    const double log_lambda = std::log(ctx.cat.lambda());
    double worst = 0;
    for (const auto& phi : kTestPotentials) {
        const double slope = ctx.spanning(phi).slope;
        const double P = ctx.leaf(phi, LeafSide::unstable, 16).P();
        r.measured.push_back({"slope_" + tag(phi), slope});
        r.measured.push_back({"P_" + tag(phi), P});
        worst = std::max(worst, std::fabs(slope - P));
        if (phi == "zero")
            worst = std::max({worst, std::fabs(slope - log_lambda), std::fabs(P - log_lambda)});
    }
    const double elapsed = now() - t0;
    r.measured.push_back({"max_disagreement", worst});
    r.passed = worst <= kPressureAgree && elapsed < kPressureRuntime;
    if (elapsed >= kPressureRuntime)
        r.note = "runtime limit exceeded";
    return r;
}

CriterionResult constant_shift(Context& ctx) {
    CriterionResult r = start(2, "constant-shift identity");
    const Potential phi = ctx.potential(kTrig);
    double worst = 0;
    for (LeafSide side : {LeafSide::unstable, LeafSide::stable}) {
        const auto w = side == LeafSide::unstable ? default_unstable_window(ctx.cat) : default_stable_window(ctx.cat);
        const double P0 = solve_leaf_state(ctx.cat, phi, w, 12).P();
        for (double c : {-0.5, 0.3})
            worst = std::max(worst, std::fabs(solve_leaf_state(ctx.cat, phi.shifted(c), w, 12).P() - P0 - c));
    }
    r.measured.push_back({"max_shift_error", worst});
    r.passed = worst <= kShiftTol;
    return r;
}

CriterionResult quasi_invariance(Context& ctx) {
    CriterionResult r = start(3, "quasi-invariance");
    double worst = 0;
    for (const auto& phi : kTestPotentials)
        for (LeafSide side : {LeafSide::unstable, LeafSide::stable}) {
            const double res = quasi_invariance_residual(ctx.leaf(phi, side, 16));
            worst = std::max(worst, res);
            r.measured.push_back({std::string(side == LeafSide::unstable ? "u_" : "s_") + tag(phi), res});
        }
    r.measured.push_back({"max_residual", worst});
    r.passed = worst < kLeafResidual;
    return r;
}

CriterionResult jacobian_certificates(Context& ctx) {
    CriterionResult r = start(4, "jacobian certificates");
    const auto pts = ctx.random_points("jacobian", 8);
    const std::vector<double> ts = {-0.3, -0.05, 0.01, 0.2, 0.45};

    double constant_dev = 0;
    for (const char* name : {"zero", "const:0.1", "srb"}) {
        const Potential phi = ctx.potential(name);
        for (Vec2 x : pts)
            for (double t : ts) {
                constant_dev = std::max(constant_dev, std::fabs(delta_along(ctx.cat, phi, x, t, 60).value - 1));
                const TorusPoint x0 = TorusPoint::planar(x);
                const TorusPoint y0 = TorusPoint::planar(x + t * ctx.cat.v_u());
                const TorusPoint w = TorusPoint::planar(x + 0.04 * ctx.cat.v_s());
                constant_dev =
                    std::max(constant_dev, std::fabs(holonomy_jacobian(ctx.cat, phi, x0, y0, w, 60).value - 1));
            }
    }

    // chain rule Delta_x(z) = Delta_x(y) Delta_y(z) and N = 60 against N = 120
    const Potential phi = ctx.potential(kTrig);
    double chain_excess = -1e300, trunc_excess = -1e300;
    for (Vec2 x : pts)
        for (double t1 : ts)
            for (double t2 : ts) {
                const auto xz = delta_along(ctx.cat, phi, x, t2, 60);
                const auto xy = delta_along(ctx.cat, phi, x, t1, 60);
                const auto yz = delta_along(ctx.cat, phi, x + t1 * ctx.cat.v_u(), t2 - t1, 60);
                const double err = std::fabs(std::log(xz.value) - std::log(xy.value) - std::log(yz.value));
                chain_excess = std::max(chain_excess, err - (xz.tail_bound + xy.tail_bound + yz.tail_bound + kRounding));
                const auto deep = delta_along(ctx.cat, phi, x, t2, 120);
                const double d = std::fabs(std::log(xz.value) - std::log(deep.value));
                trunc_excess = std::max(trunc_excess, d - (xz.tail_bound + kRounding));
            }
    r.measured = {{"constant_deviation", constant_dev},
                  {"chain_excess_over_bound", chain_excess},
                  {"truncation_excess_over_bound", trunc_excess}};
    r.passed = constant_dev < kConstantJacobian && chain_excess <= 0 && trunc_excess <= 0;
    return r;
}

double slice_gap(Context& ctx, const std::string& phi, int k) {
    ChartSpec spec;
    spec.center = Vec2(0.3, 0.6);
    const LeafState& U = ctx.leaf(phi, LeafSide::unstable, k);
    const ProductChart chart = make_chart(U, ctx.leaf(phi, LeafSide::stable, k), spec);
    const LeafState other = solve_leaf_state(ctx.cat, ctx.potential(phi),
                                             leaf_segment(ctx.cat, TorusPoint(0.35, 0.62), LeafType::s, 0.5), k);
    return slice_independence_gap(chart, U, 0.015, other);
}

CriterionResult slice_independence(Context& ctx) {
    CriterionResult r = start(5, "slice independence");
    double constant_gap = 0;
    for (const char* phi : {"zero", "const:0.1", "srb"})
        constant_gap = std::max(constant_gap, slice_gap(ctx, phi, 12));
    const double g12 = slice_gap(ctx, kTrig, 12);
    const double g16 = slice_gap(ctx, kTrig, 16);
    r.measured = {{"constant_gap", constant_gap}, {"trig_gap_k12", g12}, {"trig_gap_k16", g16}};
    r.passed = constant_gap <= kSliceConstant && g16 <= 0.5 * g12;
    return r;
}

CriterionResult equilibrium_identities(Context& ctx) {
    CriterionResult r = start(6, "equilibrium identity cases");
    const double tv_zero = tv_to_lebesgue(ctx.global("zero", 16));
    const double tv_srb = tv_to_lebesgue(ctx.global("srb", 16));
    CoverSpec cover;
    cover.resolution_k = 12;
    const double tv_skew = tv_to_lebesgue(assemble_global(ModelSystem::skew_product(), Potential::zero(), cover));
    const double inv = invariance_residual(ctx.global(kTrig, 16));
    r.measured = {{"tv_zero", tv_zero}, {"tv_srb", tv_srb}, {"tv_skew_zero", tv_skew}, {"trig_invariance", inv}};
    r.passed = tv_zero <= kLebesgueTV && tv_srb <= kLebesgueTV && tv_skew <= kLebesgueTV && inv < kInvariance;
    return r;
}

CriterionResult gibbs(Context& ctx) {
    CriterionResult r = start(7, "gibbs property");
    const GlobalState& g = ctx.global(kTrig, 16);
    double worst_slope = 0, c_eps = 0;
    for (Vec2 x : ctx.random_points("gibbs-points", 5)) {
        const GibbsReport rep = gibbs_ratio(g, TorusPoint::planar(x), kGibbsEpsilon, range(4, 14));
        worst_slope = std::max(worst_slope, std::fabs(rep.slope));
        c_eps = std::max(c_eps, rep.range);
    }
    r.measured = {{"epsilon", kGibbsEpsilon}, {"max_abs_K", worst_slope}, {"c_epsilon", c_eps}};
    r.passed = worst_slope < kGibbsSlope && c_eps <= kGibbsRangeBound;
    return r;
}

CriterionResult conditionals(Context& ctx) {
    CriterionResult r = start(8, "conditional characterization");
    const ConditionalReport rep = conditional_density_compare(ctx.global(kTrig, 16));
    bool halving = true;
    for (std::size_t i = 0; i < rep.deviation.size(); ++i) {
        r.measured.push_back({"deviation_" + format_double(rep.strip_widths[i]), rep.deviation[i]});
        if (i > 0 && rep.deviation[i] > 0.5 * rep.deviation[i - 1])
            halving = false;
    }
    const ConditionalReport srb = conditional_density_compare(ctx.global("srb", 16));
    const double arc = *std::max_element(srb.arc_deviation.begin(), srb.arc_deviation.end());
    r.measured.push_back({"srb_arc_deviation", arc});
    r.passed = rep.deviation.back() < kConditional && halving && arc < kConditional;
    if (!halving)
        r.note = "deviation does not halve under refinement";
    return r;
}

CriterionResult horocycle(Context& ctx) {
    CriterionResult r = start(9, "horocycle uniqueness shadow");
    const double t0 = now();
    const HoroFlow hf(ctx.cat);
    const Potential phi = ctx.potential(kTrig);
    ConformalOptions opts;
    opts.grid = 64;
    opts.resolution_k = 14;
    opts.T = 1e4;
    opts.seed.seed = derive_seed(ctx.seed, "horocycle-seed-a");

    const ConformalCandidate leaf = build_conformal_candidate(hf, phi, ConstructionRoute::leaf_product, opts);
    const double residual = conformality_residual(leaf, hf, {0.02, 0.05, 0.1}, 16, 8);

    SeedMeasure a = opts.seed, atom, b = opts.seed;
    atom.kind = SeedMeasure::atom;
    b.seed = derive_seed(ctx.seed, "horocycle-seed-b");
    const UniquenessReport uniq = uniqueness_gap(hf, phi, {a, atom, b}, opts);
    double route_gap = 0, horizon = 0;
    for (const auto& c : uniq.candidates) {
        route_gap = std::max(route_gap, total_variation(leaf.grid_masses, c.grid_masses));
        horizon = std::max(horizon, c.horizon_gap);
    }

    double equi = 0;
    for (Vec2 x : ctx.random_points("equidistribution", 4))
        equi = std::max(equi, equidistribution(hf, x, opts.T, default_trig_tests()));
    equi = std::max(equi, equidistribution(hf, atom.point, opts.T, default_trig_tests()));

    const double elapsed = now() - t0;
    r.measured = {{"conformality_residual", residual}, {"cross_route_gap", route_gap}, {"cross_seed_gap", uniq.gap},
                  {"horizon_gap", horizon}, {"equidistribution_error", equi}};
    r.passed = residual < kConformal && route_gap < kHorocycleGap && uniq.gap < kHorocycleGap &&
               equi < kEquidistribution && elapsed < kHorocycleRuntime;
    if (elapsed >= kHorocycleRuntime)
        r.note = "runtime limit exceeded";
    return r;
}

CriterionResult julienne_geometry(Context& ctx) {
    CriterionResult r = start(10, "julienne geometry");
    double extent_err = 0;
    for (const ModelSystem& sys : {ctx.cat, ModelSystem::skew_product()}) {
        JulienneSpec spec;
        spec.x = sys.dim() == 3 ? TorusPoint(0.3, 0.6, 0.1) : TorusPoint(0.3, 0.6);
        for (int n = 0; n <= 8; ++n) {
            spec.n = n;
            const JulienneRegion j = julienne(sys, spec, JulienneKind::scu);
            const double want = spec.epsilon * std::pow(sys.lambda(), -n);
            extent_err = std::max({extent_err, std::fabs(j.u_half - want) / want, std::fabs(j.s_half - want) / want});
            if (sys.dim() == 3)
                extent_err = std::max(extent_err, std::fabs(j.c_half - std::min(std::pow(spec.sigma, n), 0.5)));
        }
    }

    const GlobalState& g = ctx.global("zero", 16);
    const double target = std::pow(ctx.cat.lambda(), -2);
    double ratio_err = 0;
    JulienneSpec spec;
    double prev = julienne_measure(g, spec);
    for (int n = 1; n <= 8; ++n) {
        spec.n = n;
        const double m = julienne_measure(g, spec);
        ratio_err = std::max(ratio_err, std::fabs(m / prev / target - 1));
        prev = m;
    }

    const CellSet band = CellSet::band_x1(0, 0.5);
    spec.n = 6;
    spec.x = TorusPoint(0.25, 0.6);
    const double inside = density_ratio(g, band, spec);
    spec.x = TorusPoint(0.75, 0.6);
    const double outside = density_ratio(g, band, spec);

    r.measured = {{"extent_error", extent_err},
                  {"mass_ratio_error", ratio_err},
                  {"band_inside", inside},
                  {"band_outside", outside}};
    r.passed = extent_err <= kExtent && ratio_err <= kMassRatio && inside >= 1 - kBand && outside <= kBand;
    return r;
}

CriterionResult variational(Context& ctx) {
    CriterionResult r = start(11, "variational inequality");
    const std::size_t count = 100000;
    double worst = -1e300;
    for (const char* name : {"zero", kTrig}) {
        const Potential phi = ctx.potential(name);
        const double P_top = ctx.spanning(name).slope;
        std::vector<SampledMeasure> measures;
        for (Vec2 x : ctx.random_points("variational-orbits", 10))
            measures.push_back(SampledMeasure::orbit(ctx.cat, TorusPoint::planar(x), count));
        measures.push_back(SampledMeasure::lebesgue(ctx.cat, count, derive_seed(ctx.seed, "variational-lebesgue")));
        measures.push_back(SampledMeasure::atom(TorusPoint(0, 0), count));
        double top = -1e300;
        for (const auto& mu : measures) {
            const std::vector<TorusPoint> xs(mu.points.begin(), mu.points.begin() + 16);
            top = std::max(top, metric_pressure(ctx.cat, phi, mu, xs));
        }
        r.measured.push_back({"max_metric_pressure_" + tag(name), top});
        r.measured.push_back({"P_top_" + tag(name), P_top});
        worst = std::max(worst, top - P_top);
    }
    r.measured.push_back({"max_excess", worst});
    r.passed = worst <= kVariational;
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    using Fn = CriterionResult (*)(Context&);
    const Fn fns[kCriteria] = {pressure_cross_validation, constant_shift, quasi_invariance, jacobian_certificates,
                               slice_independence,        equilibrium_identities, gibbs,  conditionals,
                               horocycle,                 julienne_geometry,      variational};
    static const char* const kNames[kCriteria] = {
        "pressure cross-validation", "constant-shift identity", "quasi-invariance", "jacobian certificates",
        "slice independence", "equilibrium identity cases", "gibbs property", "conditional characterization",
        "horocycle uniqueness shadow", "julienne geometry", "variational inequality"};
    Context ctx(opts.seed);
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
            continue;
        const double t0 = now();
        CriterionResult r;
        try {
            r = fns[id - 1](ctx);
        } catch (const std::exception& e) {
            r = start(id, kNames[id - 1]);
            r.passed = false;
            r.note = std::string("error: ") + e.what();
        }
        r.id = id;
        r.seconds = now() - t0;
        if (opts.on_result)
            opts.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  " << r.id << " " << r.name;
    for (const auto& [k, v] : r.measured)
        os << "  " << k << "=" << format_double(v);
    if (!r.note.empty())
        os << "  (" << r.note << ")";
    return os.str();
}

nlohmann::json report_json(const std::vector<CriterionResult>& results, std::uint64_t seed) {
    nlohmann::json crit = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : r.measured)
            m[k] = v;
        crit.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"measured", m}, {"note", r.note}});
        all = all && r.passed;
    }
    return {{"seed", seed}, {"passed", all}, {"criteria", crit}};
}

std::string report_text(const std::vector<CriterionResult>& results) {
    std::string s;
    for (const auto& r : results)
        s += result_line(r) + "\n";
    return s;
}

}  // namespace thermo::app
