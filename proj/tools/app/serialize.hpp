#pragma once

#include "config.hpp"

#include "thermo/horocycle.hpp"
#include "thermo/leaf_measures.hpp"
#include "thermo/pressure.hpp"
#include "thermo/product_states.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace thermo::app {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const ExperimentConfig& cfg);

/// document skeleton: schema_version, command, config
json document(const std::string& command, const ExperimentConfig& cfg);

json to_json(const PressureEstimate& e);

json to_json(const LeafSegment& w);
LeafSegment segment_from_json(const ModelSystem& sys, const json& j);

json to_json(const LeafState& s);
LeafState leaf_state_from_json(const ModelSystem& sys, const Potential& phi, const json& j);

json to_json(const CoverSpec& c);
CoverSpec cover_from_json(const json& j);

/// leaf states, cover and normalization; enough to rebuild the state exactly
json to_json(const GlobalState& g);
GlobalState global_state_from_json(const ModelSystem& sys, const Potential& phi, const json& j);

/// diagnostics compared by the round-trip check
struct StateDiagnostics {
    double P = 0;
    double unstable_residual = 0;
    double stable_residual = 0;
    double total_mass = 0;
    double tv_to_lebesgue = 0;
    double overlap_discrepancy = 0;
};
StateDiagnostics diagnostics(const GlobalState& g);
json to_json(const StateDiagnostics& d);

/// shortest text that reads back to the same double
std::string format_double(double v);

void write_text(const std::filesystem::path& p, const std::string& text);
void write_json(const std::filesystem::path& p, const json& j);
json read_json(const std::filesystem::path& p);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    CsvTable& row(const std::vector<double>& values);
    std::string str() const;
    void write(const std::filesystem::path& p) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace thermo::app
