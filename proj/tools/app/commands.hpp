#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace thermo::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitConfig = 2;

/// Parses argv, runs one subcommand and writes its artifacts under --out.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs a subcommand on an already merged configuration.
int dispatch(const std::string& command, const ExperimentConfig& cfg, std::ostream& out);

}  // namespace thermo::app
