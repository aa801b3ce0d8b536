#include "serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace thermo::app {

json to_json(const ExperimentConfig& c) {
    json j = {{"system", c.system},
              {"potential", c.potential},
              {"k", c.k},
              {"N_trunc", c.N_trunc},
              {"N_leaf", c.N_leaf},
              {"grid", c.grid},
              {"epsilon", c.epsilon ? json(*c.epsilon) : json(nullptr)},
              {"n_max", c.n_max ? json(*c.n_max) : json(nullptr)},
              {"sigma", c.sigma},
              {"T", c.T},
              {"seed", c.seed},
              {"only", c.only},
              {"leaf_tol", c.leaf_tol},
              {"tolerances",
               {{"residual", c.tol_residual},
                {"invariance", c.tol_invariance},
                {"gibbs", c.tol_gibbs},
                {"conditional", c.tol_conditional},
                {"conformal", c.tol_conformal},
                {"gap", c.tol_gap},
                {"pressure", c.tol_pressure}}}};
    return j;
}

json document(const std::string& command, const ExperimentConfig& cfg) {
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", to_json(cfg)}};
}

json to_json(const PressureEstimate& e) {
    return {{"epsilon", e.epsilon},         {"n_values", e.n_values}, {"log_sums", e.log_sums},
            {"cardinalities", e.cardinalities}, {"slope", e.slope},       {"intercept", e.intercept},
            {"slope_ci", e.slope_ci},       {"rms_residual", e.rms_residual}};
}

namespace {

LeafType parse_leaf_type(const std::string& s) {
    for (LeafType t : {LeafType::u, LeafType::s, LeafType::c, LeafType::cs, LeafType::cu})
        if (to_string(t) == s)
            return t;
    throw ConfigError("unknown leaf type '" + s + "'");
}

json point_json(const TorusPoint& p) {
    json a = json::array();
    for (int i = 0; i < p.dim(); ++i)
        a.push_back(p[i]);
    return a;
}

TorusPoint point_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() == 2)
        return TorusPoint(v[0], v[1]);
    if (v.size() == 3)
        return TorusPoint(v[0], v[1], v[2]);
    throw ConfigError("a point needs two or three coordinates");
}

}  // namespace

json to_json(const LeafSegment& w) {
    return {{"point", point_json(w.base_point())}, {"type", to_string(w.type())}, {"a", w.a()}, {"b", w.b()}};
}

LeafSegment segment_from_json(const ModelSystem& sys, const json& j) {
    return LeafSegment(sys, point_from_json(j.at("point")), parse_leaf_type(j.at("type").get<std::string>()),
                       j.at("a").get<double>(), j.at("b").get<double>());
}

json to_json(const LeafState& s) {
    return {{"side", s.side() == LeafSide::unstable ? "unstable" : "stable"},
            {"window", to_json(s.density().segment)},
            {"resolution_k", s.density().resolution_k},
            {"P", s.P()},
            {"iterations", s.iterations()},
            {"residual", s.residual()},
            {"weights", s.density().weights}};
}

LeafState leaf_state_from_json(const ModelSystem& sys, const Potential& phi, const json& j) {
    try {
        return LeafState::from_parts(sys, phi, segment_from_json(sys, j.at("window")), j.at("resolution_k").get<int>(),
                                     j.at("weights").get<std::vector<double>>(), j.at("P").get<double>(),
                                     j.at("iterations").get<int>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("leaf state: ") + e.what());
    }
}

json to_json(const CoverSpec& c) {
    return {{"resolution_k", c.resolution_k}, {"leaf_tol", c.leaf_tol}, {"spacing", c.spacing},
            {"nodes", c.nodes},               {"N_trunc", c.N_trunc},   {"grid", c.grid},
            {"overlap_tol", c.overlap_tol}};
}

CoverSpec cover_from_json(const json& j) {
    CoverSpec c;
    c.resolution_k = j.at("resolution_k").get<int>();
    c.leaf_tol = j.at("leaf_tol").get<double>();
    c.spacing = j.at("spacing").get<double>();
    c.nodes = j.at("nodes").get<int>();
    c.N_trunc = j.at("N_trunc").get<int>();
    c.grid = j.at("grid").get<int>();
    c.overlap_tol = j.at("overlap_tol").get<double>();
    return c;
}

json to_json(const GlobalState& g) {
    json j = {{"conformal", g.conformal()},
              {"stable", to_json(g.stable())},
              {"cover", to_json(g.cover())},
              {"normalization_c", g.normalization_c()},
              {"dim", g.dim()}};
    j["unstable"] = g.conformal() ? json(nullptr) : to_json(g.unstable());
    return j;
}

GlobalState global_state_from_json(const ModelSystem& sys, const Potential& phi, const json& j) {
    try {
        const ModelSystem base = sys.base_system();
        const CoverSpec cover = cover_from_json(j.at("cover"));
        const LeafState S = leaf_state_from_json(base, phi, j.at("stable"));
        const bool conformal = j.at("conformal").get<bool>();
        GlobalState g = conformal ? assemble_conformal(sys, S, cover)
                                  : assemble_global(sys, leaf_state_from_json(base, phi, j.at("unstable")), S, cover);
        return g.with_normalization(j.at("normalization_c").get<double>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("global state: ") + e.what());
    }
}

StateDiagnostics diagnostics(const GlobalState& g) {
    StateDiagnostics d;
    d.P = g.P();
    d.unstable_residual = g.conformal() ? 0.0 : g.unstable().residual();
    d.stable_residual = g.stable().residual();
    d.total_mass = g.total_mass();
    d.tv_to_lebesgue = tv_to_lebesgue(g);
    d.overlap_discrepancy = g.overlap_discrepancy();
    return d;
}

json to_json(const StateDiagnostics& d) {
    return {{"P", d.P},
            {"unstable_residual", d.unstable_residual},
            {"stable_residual", d.stable_residual},
            {"total_mass", d.total_mass},
            {"tv_to_lebesgue", d.tv_to_lebesgue},
            {"overlap_discrepancy", d.overlap_discrepancy}};
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + p.string());
    out << text;
}

void write_json(const std::filesystem::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in)
        throw ConfigError("cannot read " + p.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw PreconditionError("CsvTable: row width does not match the header");
    rows_.push_back(values);
    return *this;
}

std::string CsvTable::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << format_double(r[i]);
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::filesystem::path& p) const { write_text(p, str()); }

}  // namespace thermo::app
