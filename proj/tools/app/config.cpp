#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace thermo::app {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_as(const std::string& key, const std::string& v) {
    T out{};
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end)
        throw ConfigError("config: bad value '" + v + "' for " + key);
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string val = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (!out.emplace(key, val).second)
            throw ConfigError("config: duplicate key " + key);
    }
    return out;
}

void apply_key_values(ExperimentConfig& c, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "system") c.system = v;
        else if (k == "potential") c.potential = v;
        else if (k == "k") c.k = parse_as<int>(k, v);
        else if (k == "N_trunc") c.N_trunc = parse_as<int>(k, v);
        else if (k == "N_leaf") c.N_leaf = parse_as<int>(k, v);
        else if (k == "grid") c.grid = parse_as<int>(k, v);
        else if (k == "epsilon") c.epsilon = parse_as<double>(k, v);
        else if (k == "n_max") c.n_max = parse_as<int>(k, v);
        else if (k == "sigma") c.sigma = parse_as<double>(k, v);
        else if (k == "T") c.T = parse_as<double>(k, v);
        else if (k == "seed") c.seed = parse_as<std::uint64_t>(k, v);
        else if (k == "out") c.out = v;
        else if (k == "only") c.only = parse_int_list(v);
        else if (k == "leaf_tol") c.leaf_tol = parse_as<double>(k, v);
        else if (k == "tol_residual") c.tol_residual = parse_as<double>(k, v);
        else if (k == "tol_invariance") c.tol_invariance = parse_as<double>(k, v);
        else if (k == "tol_gibbs") c.tol_gibbs = parse_as<double>(k, v);
        else if (k == "tol_conditional") c.tol_conditional = parse_as<double>(k, v);
        else if (k == "tol_conformal") c.tol_conformal = parse_as<double>(k, v);
        else if (k == "tol_gap") c.tol_gap = parse_as<double>(k, v);
        else if (k == "tol_pressure") c.tol_pressure = parse_as<double>(k, v);
        else throw ConfigError("config: unknown key " + k);
    }
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot read config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig c;
    apply_key_values(c, parse_key_values(ss.str()));
    return c;
}

void validate(const ExperimentConfig& c) {
    if (c.system != "cat" && c.system != "skew")
        throw ConfigError("unknown system '" + c.system + "' (expected cat or skew)");
    if (c.k < 8 || c.k > 24)
        throw ConfigError("k must lie in [8, 24]");
    if (c.N_trunc < 1 || c.N_trunc > 200 || c.N_leaf < 1 || c.N_leaf > 200)
        throw ConfigError("N_trunc and N_leaf must lie in [1, 200]");
    if (c.grid < 4 || c.grid > 512)
        throw ConfigError("grid must lie in [4, 512]");
    if (c.epsilon && !(*c.epsilon > 0 && *c.epsilon <= 0.2))
        throw ConfigError("epsilon must lie in (0, 0.2]");
    if (c.n_max && (*c.n_max < 1 || *c.n_max > 40))
        throw ConfigError("n_max must lie in [1, 40]");
    if (!(c.sigma > 0 && c.sigma < 1))
        throw ConfigError("sigma must lie in (0, 1)");
    if (!(c.T > 0 && c.T <= 1e7))
        throw ConfigError("T must lie in (0, 1e7]");
    for (int id : c.only)
        if (id < 1 || id > 11)
            throw ConfigError("criteria are numbered 1 to 11");
    for (double t : {c.leaf_tol, c.tol_residual, c.tol_invariance, c.tol_gibbs, c.tol_conditional, c.tol_conformal,
                     c.tol_gap, c.tol_pressure})
        if (!(t > 0))
            throw ConfigError("tolerances must be positive");
}

ModelSystem make_system(const ExperimentConfig& c) {
    if (c.system == "cat")
        return ModelSystem::cat_map().with_series_order(c.N_leaf);
    if (c.system == "skew")
        return ModelSystem::skew_product().with_series_order(c.N_leaf);
    throw ConfigError("unknown system '" + c.system + "' (expected cat or skew)");
}

Potential make_potential(const ExperimentConfig& c, const ModelSystem& sys) {
    try {
        return Potential::parse(c.potential, sys);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        out.push_back(parse_as<int>("list", item));
    }
    return out;
}

}  // namespace thermo::app
