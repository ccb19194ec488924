#pragma once

// Subcommands of the ringwave tool. Each one computes its outputs in memory
// (CSV curves, a JSON summary, gnuplot scripts for figure recipes); the
// caller writes them out together with a run manifest.

#include "ringwave/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ringwave {

struct CommandRequest {
    std::string name;    // subcommand
    std::string figure;  // figure recipe id for "figure": 4, 9, 10, 11, 12, 1c
    ScenarioConfig config;
    int threads = 1;

    // Per-command knobs; unset values come from the config.
    std::string mode = "divider";  // transient, freq-response, standing-wave
    std::optional<int> paths;
    std::optional<double> f_in;
    std::optional<double> p_in;
    std::optional<double> f_start;
    std::optional<double> f_stop;
    std::optional<int> points;
    std::optional<double> vp0;
};

struct OutputFile {
    std::string name;  // relative to the output directory
    std::string content;
};

struct CommandOutput {
    std::vector<OutputFile> files;
    std::string summary_json;  // also present in `files` as <name>.json
};

/// Subcommand names accepted by run_command.
const std::vector<std::string>& command_names();
const std::vector<std::string>& figure_ids();

/// Runs one subcommand. Throws ConfigError for an unknown name or figure and
/// propagates DomainError / NumericError from the analyses.
CommandOutput run_command(const CommandRequest& request);

struct RunInfo {
    std::vector<std::string> args;
    double wall_clock_s = 0.0;
};

/// Manifest document: tool, version, subcommand, args, resolved config, seed,
/// threads, wall-clock time and the output file list. Its "config" block can
/// be fed back as a config file.
std::string manifest_json(const CommandRequest& request, const CommandOutput& output, const RunInfo& info);

/// Writes every file, then manifest.json, each through a temporary file and a
/// rename so readers never see partial output.
void write_outputs(const std::filesystem::path& dir, const CommandOutput& output,
                   const std::string& manifest);

/// Shortest decimal text that reads back to the same double; "nan", "inf".
std::string format_number(double v);

}  // namespace ringwave
