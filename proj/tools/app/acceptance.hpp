#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace thermo::app {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::vector<std::pair<std::string, double>> measured;
    std::string note;
    double seconds = 0;  // wall time; kept out of the report files
};

struct AcceptanceOptions {
    std::uint64_t seed = 7;
    std::vector<int> only;  // empty runs every criterion
    std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int kCriteria = 11;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// one line per criterion: "PASS  3 quasi-invariance  residual=... "
std::string result_line(const CriterionResult& r);
nlohmann::json report_json(const std::vector<CriterionResult>& results, std::uint64_t seed);
std::string report_text(const std::vector<CriterionResult>& results);

}  // namespace thermo::app
