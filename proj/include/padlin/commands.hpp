#pragma once

#include "padlin/config.hpp"

#include <string>
#include <vector>

namespace padlin {

// CLI entry points. Each writes CSV data plus a JSON metadata document into
// out_dir and returns the list of files written. Throws ConfigError for
// configuration problems and std::exception subclasses for model/runtime
// failures; the binary maps those to exit codes 1 and 2.
std::vector<std::string> run_trace_hpa(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_trace_pd(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_bounds(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_compare(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_simulate(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_psd(const ExperimentConfig& cfg, const std::string& out_dir);

std::vector<std::string> run_command(const std::string& command,
                                     const ExperimentConfig& cfg,
                                     const std::string& out_dir);

} // namespace padlin
