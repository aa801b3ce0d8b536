#include "commands.hpp"

#include "acceptance.hpp"
#include "serialize.hpp"

#include "thermo/horocycle.hpp"
#include "thermo/julienne.hpp"
#include "thermo/pressure.hpp"
#include "thermo/product_states.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>

namespace thermo::app {

namespace {

const std::vector<std::string> kCommands = {"pressure", "leafstate",  "equilibrium", "gibbs",
                                            "conditionals", "horocycle", "julienne", "verify-all"};

std::vector<int> n_range(int lo, int hi) {
    if (hi < lo + 1)
        throw ConfigError("n_max must be at least " + std::to_string(lo + 1));
    std::vector<int> v;
    for (int n = lo; n <= hi; ++n)
        v.push_back(n);
    return v;
}

CoverSpec cover_of(const ExperimentConfig& cfg) {
    CoverSpec c;
    c.resolution_k = cfg.k;
    c.leaf_tol = cfg.leaf_tol;
    c.N_trunc = cfg.N_trunc;
    c.grid = cfg.grid;
    return c;
}

int verdict(bool ok, std::ostream& out) {
    out << (ok ? "ok" : "tolerance check failed") << "\n";
    return ok ? kExitOk : kExitTolerance;
}

int cmd_pressure(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    const Potential phi = make_potential(cfg, sys);
    const double eps = cfg.epsilon.value_or(0.05);
    const PressureEstimate est = spanning_pressure(sys, phi, eps, n_range(4, cfg.n_max.value_or(12)));
    const LeafState U = solve_leaf_state(sys.base_system(), phi, default_unstable_window(sys), cfg.k, cfg.leaf_tol);

    json doc = document("pressure", cfg);
    doc["spanning"] = to_json(est);
    doc["slope"] = est.slope;
    doc["transfer_P"] = U.P();
    doc["transfer_residual"] = U.residual();
    doc["disagreement"] = std::fabs(est.slope - U.P());
    write_json(cfg.out / "pressure.json", doc);
    CsvTable csv({"n", "log_sum", "cardinality"});
    for (std::size_t i = 0; i < est.n_values.size(); ++i)
        csv.row({double(est.n_values[i]), est.log_sums[i], est.cardinalities[i]});
    csv.write(cfg.out / "pressure.csv");

    out << "slope " << format_double(est.slope) << "  transfer P " << format_double(U.P()) << "\n";
    return verdict(std::fabs(est.slope - U.P()) <= cfg.tol_pressure, out);
}

void leaf_csv(const LeafState& s, const std::filesystem::path& p) {
    const LeafDensity& d = s.density();
    CsvTable csv({"cell", "t_lo", "t_hi", "weight"});
    for (std::size_t i = 0; i < d.cells(); ++i)
        csv.row({double(i), d.cell_lo(i), d.cell_lo(i) + d.cell_length(), d.weights[i]});
    csv.write(p);
}

int cmd_leafstate(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    const ModelSystem base = sys.base_system();
    const Potential phi = make_potential(cfg, sys);
    const LeafState U = solve_leaf_state(base, phi, default_unstable_window(sys), cfg.k, cfg.leaf_tol);
    const LeafState S = solve_leaf_state(base, phi, default_stable_window(sys), cfg.k, cfg.leaf_tol);
    const double ru = quasi_invariance_residual(U), rs = quasi_invariance_residual(S);

    json doc = document("leafstate", cfg);
    doc["unstable"] = to_json(U);
    doc["stable"] = to_json(S);
    doc["quasi_invariance_residual"] = {{"unstable", ru}, {"stable", rs}};
    write_json(cfg.out / "leafstate.json", doc);
    leaf_csv(U, cfg.out / "leafstate_unstable.csv");
    leaf_csv(S, cfg.out / "leafstate_stable.csv");

    out << "P " << format_double(U.P()) << " / " << format_double(S.P()) << "  residual " << format_double(ru)
        << " / " << format_double(rs) << "\n";
    return verdict(std::max(ru, rs) < cfg.tol_residual, out);
}

GlobalState build_state(const ExperimentConfig& cfg, const ModelSystem& sys, const Potential& phi) {
    return assemble_global(sys, phi, cover_of(cfg));
}

void grid_csv(const std::vector<double>& masses, int g, const std::filesystem::path& p) {
    CsvTable csv({"i", "j", "mass"});
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            csv.row({double(i), double(j), masses[std::size_t(i) * g + j]});
    csv.write(p);
}

int cmd_equilibrium(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    const Potential phi = make_potential(cfg, sys);
    const GlobalState g = build_state(cfg, sys, phi);
    const double inv = invariance_residual(g);

    json doc = document("equilibrium", cfg);
    doc["state"] = to_json(g);
    doc["diagnostics"] = to_json(diagnostics(g));
    doc["diagnostics"]["invariance_residual"] = inv;
    write_json(cfg.out / "equilibrium.json", doc);
    grid_csv(g.grid_masses(), g.cover().grid, cfg.out / "equilibrium_grid.csv");

    out << "P " << format_double(g.P()) << "  invariance " << format_double(inv) << "  tv to Lebesgue "
        << format_double(tv_to_lebesgue(g)) << "\n";
    return verdict(inv < cfg.tol_invariance && g.overlap_discrepancy() <= g.cover().overlap_tol, out);
}

std::vector<Vec2> sample_points(std::uint64_t seed, const std::string& label, int count) {
    Rng rng(derive_seed(seed, label));
    std::vector<Vec2> v;
    for (int i = 0; i < count; ++i) {
        const double a = rng.uniform();
        v.emplace_back(a, rng.uniform());
    }
    return v;
}

int cmd_gibbs(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    if (sys.has_center())
        throw ConfigError("gibbs runs on planar systems only");
    const Potential phi = make_potential(cfg, sys);
    const GlobalState g = build_state(cfg, sys, phi);
    const double eps = cfg.epsilon.value_or(0.2);
    const std::vector<int> ns = n_range(4, cfg.n_max.value_or(14));

    json doc = document("gibbs", cfg);
    doc["epsilon"] = eps;
    doc["points"] = json::array();
    CsvTable csv({"point", "x1", "x2", "n", "r"});
    double worst = 0, c_eps = 0;
    int idx = 0;
    for (Vec2 x : sample_points(cfg.seed, "gibbs-points", 5)) {
        const GibbsReport rep = gibbs_ratio(g, TorusPoint::planar(x), eps, ns);
        for (std::size_t i = 0; i < ns.size(); ++i)
            csv.row({double(idx), x.x, x.y, double(ns[i]), rep.r[i]});
        doc["points"].push_back({{"x", {x.x, x.y}}, {"r", rep.r}, {"slope", rep.slope}, {"range", rep.range}});
        worst = std::max(worst, std::fabs(rep.slope));
        c_eps = std::max(c_eps, rep.range);
        ++idx;
    }
    doc["max_abs_slope"] = worst;
    doc["c_epsilon"] = c_eps;
    write_json(cfg.out / "gibbs.json", doc);
    csv.write(cfg.out / "gibbs.csv");

    out << "max |K| " << format_double(worst) << "  c(eps) " << format_double(c_eps) << "\n";
    return verdict(worst < cfg.tol_gibbs, out);
}

int cmd_conditionals(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    const Potential phi = make_potential(cfg, sys);
    const GlobalState g = build_state(cfg, sys, phi);
    const ConditionalReport rep = conditional_density_compare(g);

    json doc = document("conditionals", cfg);
    doc["strip_widths"] = rep.strip_widths;
    doc["deviation"] = rep.deviation;
    doc["arc_deviation"] = rep.arc_deviation;
    write_json(cfg.out / "conditionals.json", doc);
    CsvTable csv({"strip_width", "deviation", "arc_deviation"});
    for (std::size_t i = 0; i < rep.strip_widths.size(); ++i)
        csv.row({rep.strip_widths[i], rep.deviation[i], rep.arc_deviation[i]});
    csv.write(cfg.out / "conditionals.csv");

    out << "deviation at finest strip " << format_double(rep.deviation.back()) << "\n";
    return verdict(rep.deviation.back() < cfg.tol_conditional, out);
}

int cmd_horocycle(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    if (sys.has_center())
        throw ConfigError("horocycle runs on planar systems only");
    const Potential phi = make_potential(cfg, sys);
    const HoroFlow hf(sys);
    ConformalOptions opts;
    opts.grid = cfg.grid;
    opts.resolution_k = cfg.k;
    opts.T = cfg.T;
    opts.N_trunc = cfg.N_trunc;
    opts.seed.seed = derive_seed(cfg.seed, "horocycle-seed-a");

    const ConformalCandidate leaf = build_conformal_candidate(hf, phi, ConstructionRoute::leaf_product, opts);
    const double residual = conformality_residual(leaf, hf, {0.02, 0.05, 0.1}, 16, 8, cfg.N_trunc);
    SeedMeasure a = opts.seed, atom, b = opts.seed;
    atom.kind = SeedMeasure::atom;
    b.seed = derive_seed(cfg.seed, "horocycle-seed-b");
    const UniquenessReport uniq = uniqueness_gap(hf, phi, {a, atom, b}, opts);
    double route_gap = 0;
    for (const auto& c : uniq.candidates)
        route_gap = std::max(route_gap, total_variation(leaf.grid_masses, c.grid_masses));

    CsvTable equi({"T", "error"});
    double equi_err = 0;
    for (double T = 10; T <= cfg.T * 1.0000001; T *= 10) {
        const double e = equidistribution(hf, atom.point, T, default_trig_tests());
        equi.row({T, e});
        equi_err = e;
    }

    json doc = document("horocycle", cfg);
    doc["conformality_residual"] = residual;
    doc["cross_route_gap"] = route_gap;
    doc["cross_seed_gap"] = uniq.gap;
    doc["horizon_gaps"] = json::array();
    for (const auto& c : uniq.candidates)
        doc["horizon_gaps"].push_back(c.horizon_gap);
    doc["equidistribution_error"] = equi_err;
    write_json(cfg.out / "horocycle.json", doc);
    grid_csv(leaf.grid_masses, leaf.grid, cfg.out / "horocycle_grid.csv");
    equi.write(cfg.out / "equidistribution.csv");

    out << "conformality " << format_double(residual) << "  route gap " << format_double(route_gap)
        << "  seed gap " << format_double(uniq.gap) << "\n";
    return verdict(residual < cfg.tol_conformal && route_gap < cfg.tol_gap && uniq.gap < cfg.tol_gap, out);
}

int cmd_julienne(const ExperimentConfig& cfg, std::ostream& out) {
    const ModelSystem sys = make_system(cfg);
    const Potential phi = make_potential(cfg, sys);
    const GlobalState g = build_state(cfg, sys, phi);
    JulienneSpec spec;
    spec.epsilon = cfg.epsilon.value_or(0.1);
    spec.sigma = cfg.sigma;
    spec.x = sys.has_center() ? TorusPoint(0.25, 0.6, 0.1) : TorusPoint(0.25, 0.6);
    const CellSet band = CellSet::band_x1(0, 0.5);

    CsvTable csv({"n", "ratio", "mass", "u_half", "s_half", "c_half"});
    json rows = json::array();
    for (int n = 0; n <= cfg.n_max.value_or(6); ++n) {
        spec.n = n;
        const JulienneRegion r = julienne(sys, spec, JulienneKind::scu);
        const double ratio = density_ratio(g, band, spec);
        const double m = julienne_measure(g, spec);
        csv.row({double(n), ratio, m, r.u_half, r.s_half, r.c_half});
        rows.push_back({{"n", n}, {"ratio", ratio}, {"mass", m}, {"u_half", r.u_half}, {"s_half", r.s_half},
                        {"c_half", r.c_half}});
    }
    json doc = document("julienne", cfg);
    doc["set"] = "x1 in [0, 1/2)";
    doc["x"] = {0.25, 0.6};
    doc["trace"] = rows;
    write_json(cfg.out / "julienne.json", doc);
    csv.write(cfg.out / "julienne.csv");
    out << "density ratio at n=" << spec.n << ": " << format_double(rows.back()["ratio"].get<double>()) << "\n";
    return kExitOk;
}

int cmd_verify_all(const ExperimentConfig& cfg, std::ostream& out) {
    AcceptanceOptions opts;
    opts.seed = cfg.seed;
    opts.only = cfg.only;
    opts.on_result = [&out](const CriterionResult& r) {
        out << result_line(r) << "\n";
        out.flush();
    };
    const auto results = run_acceptance(opts);
    json doc = document("verify-all", cfg);
    doc["report"] = report_json(results, cfg.seed);
    write_json(cfg.out / "verify_all.json", doc);
    write_text(cfg.out / "verify_all.txt", report_text(results));
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    return ok ? kExitOk : kExitTolerance;
}

}  // namespace

int dispatch(const std::string& command, const ExperimentConfig& cfg, std::ostream& out) {
    validate(cfg);
    if (command == "pressure") return cmd_pressure(cfg, out);
    if (command == "leafstate") return cmd_leafstate(cfg, out);
    if (command == "equilibrium") return cmd_equilibrium(cfg, out);
    if (command == "gibbs") return cmd_gibbs(cfg, out);
    if (command == "conditionals") return cmd_conditionals(cfg, out);
    if (command == "horocycle") return cmd_horocycle(cfg, out);
    if (command == "julienne") return cmd_julienne(cfg, out);
    if (command == "verify-all") return cmd_verify_all(cfg, out);
    throw ConfigError("unknown subcommand '" + command + "'");
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibrium states of hyperbolic toral models", "thermo"};
    app.require_subcommand(1);

    struct Flags {
        std::optional<std::string> config, system, potential, only;
        std::optional<double> epsilon;
        std::optional<int> k, n_max;
        std::optional<std::uint64_t> seed;
        std::optional<std::string> out;
    } f;

    for (const auto& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", f.config, "key = value configuration file");
        sub->add_option("--system", f.system, "cat or skew");
        sub->add_option("--potential", f.potential, "zero, const:<c>, srb, cos:<a> or trig:<terms>");
        sub->add_option("--epsilon", f.epsilon, "scale parameter of the command");
        sub->add_option("--k", f.k, "leaf resolution (2^k cells)");
        sub->add_option("--n-max", f.n_max, "largest time step");
        sub->add_option("--seed", f.seed, "master seed");
        sub->add_option("--out", f.out, "output directory");
        if (name == "verify-all")
            sub->add_option("--only", f.only, "comma separated criterion numbers");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        ExperimentConfig cfg = f.config ? load_config(*f.config) : ExperimentConfig{};
        if (f.system) cfg.system = *f.system;
        if (f.potential) cfg.potential = *f.potential;
        if (f.epsilon) cfg.epsilon = *f.epsilon;
        if (f.k) cfg.k = *f.k;
        if (f.n_max) cfg.n_max = *f.n_max;
        if (f.seed) cfg.seed = *f.seed;
        if (f.out) cfg.out = *f.out;
        if (f.only) cfg.only = parse_int_list(*f.only);
        return dispatch(command, cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << command << " failed: " << e.what() << "\n";
        return kExitTolerance;
    }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("thermo");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run_command(int(argv.size()), argv.data(), out, err);
}

}  // namespace thermo::app
