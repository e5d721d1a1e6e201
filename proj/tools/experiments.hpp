// SPDX-License-Identifier: Apache-2.0
//
// Experiment runners behind the command-line tool. Each takes a flat JSON object holding the
// scenario keys plus experiment keys, and returns CSV tables and a JSON summary.

#ifndef IRSMIMO_TOOLS_EXPERIMENTS_HPP
#define IRSMIMO_TOOLS_EXPERIMENTS_HPP

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace irsmimo::tools {

inline constexpr int schema_version = 1;

struct CsvTable
{
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
};

struct ExperimentReport
{
    std::string experiment;
    nlohmann::json config; // every resolved key; re-running from it reproduces the tables
    std::uint64_t seed = 0;
    nlohmann::json summary;
    std::vector<CsvTable> tables;
    double wall_clock_s = 0.0;
};

const std::vector<std::string> &experiment_names();

/// Throws ConfigError for unknown experiments, unknown keys and bad values, NumericalError when
/// a numerical routine fails.
ExperimentReport run_experiment(const std::string &name, const nlohmann::json &config, unsigned threads = 1);

/// Writes report.json and the tables into dir (created if needed).
void write_report(const ExperimentReport &report, const std::filesystem::path &dir);

std::string format_double(double x);

} // namespace irsmimo::tools

#endif
