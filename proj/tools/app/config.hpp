#pragma once

#include "thermo/potential.hpp"
#include "thermo/torus.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace thermo::app {

/// Everything a run depends on. Unset optionals take per-command defaults.
struct ExperimentConfig {
    std::string system = "cat";
    std::string potential = "zero";
    int k = 16;
    int N_trunc = 60;
    int N_leaf = 60;  // series order of the leaf offsets
    int grid = 64;
    std::optional<double> epsilon;
    std::optional<int> n_max;
    double sigma = 0.5;
    double T = 1e4;
    std::uint64_t seed = 7;
    std::filesystem::path out = ".";
    std::vector<int> only;  // verify-all criteria; empty runs all

    double leaf_tol = 1e-8;
    double tol_residual = 1e-6;
    double tol_invariance = 1e-3;
    double tol_gibbs = 0.01;
    double tol_conditional = 5e-3;
    double tol_conformal = 5e-3;
    double tol_gap = 0.02;
    double tol_pressure = 0.02;
};

/// "key = value" lines; '#' starts a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text);
void apply_key_values(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv);
ExperimentConfig load_config(const std::filesystem::path& file);
void validate(const ExperimentConfig& cfg);

/// "cat" or "skew"
ModelSystem make_system(const ExperimentConfig& cfg);
Potential make_potential(const ExperimentConfig& cfg, const ModelSystem& sys);

std::vector<int> parse_int_list(const std::string& s);

}  // namespace thermo::app
