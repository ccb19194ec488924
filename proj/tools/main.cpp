#include "ringwave/commands.hpp"
#include "ringwave/errors.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <iostream>
#include <map>

using namespace ringwave;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Knobs {
    std::string mode = "divider";
    std::string f_in, p_in, f_start, f_stop, vp0;
    int points = 0;
    int paths = -1;
    std::string figure;
};

std::optional<double> quantity(const std::string& text, const char* unit, const char* flag) {
    if (text.empty()) return std::nullopt;
    return parse_quantity(text, unit, flag);
}

}  // namespace

int main(int argc, char** argv) {
    auto logger = spdlog::stderr_color_mt("ringwave");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");

    CLI::App app{"Analysis and simulation of a varactor-loaded ring resonator"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "ringwave_out";
    std::uint64_t seed = 0;
    int threads = 1;
    bool verbose = false;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "scenario file (YAML or JSON, or a run manifest)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "localization seed (overrides the config)");
    app.add_option("--threads", threads, "worker threads")->envname("RINGWAVE_THREADS")->check(CLI::PositiveNumber);
    app.add_flag("--verbose", verbose, "debug logging");
    app.add_option("--set", sets, "override a config field, e.g. --set varactor.c0=3pF");

    Knobs k;
    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> help = {
        {"dispersion", "Bloch phase and attenuation of the loaded cell"},
        {"resonances", "impedance at node M and its zeros/poles"},
        {"standing-wave", "f and 2f standing-wave profiles and per-node pump swing"},
        {"bpf", "coupled-line filter image impedance and rejection"},
        {"transient", "one driven transient run with waveform output"},
        {"divider-sweep", "divider output against pump power, with threshold"},
        {"doubler-sweep", "doubler output against input power, with conversion loss"},
        {"freq-response", "output power against input frequency"},
        {"localize", "single- vs dual-band ranging phase-error variance"},
        {"calibrate", "fit the unloaded line to the calibration anchors"},
        {"figure", "canned recipe: 4, 9, 10, 11, 12 or 1c"},
    };
    for (const std::string& name : command_names()) subs[name] = app.add_subcommand(name, help.at(name));

    for (const char* name : {"dispersion", "resonances", "bpf"}) {
        subs[name]->add_option("--f-start", k.f_start, "first frequency (Hz, suffix allowed)");
        subs[name]->add_option("--f-stop", k.f_stop, "last frequency");
        subs[name]->add_option("--points", k.points, "samples")->check(CLI::Range(2, 1000000));
    }
    for (const char* name : {"standing-wave", "transient", "freq-response"}) {
        subs[name]->add_option("--mode", k.mode, "divider or doubler")
            ->check(CLI::IsMember({"divider", "doubler"}));
    }
    subs["standing-wave"]->add_option("--vp0", k.vp0, "pump amplitude at node M (V)");
    subs["standing-wave"]->add_option("--f-pump", k.f_in, "pump frequency");
    subs["standing-wave"]->add_option("--points", k.points, "profile samples")->check(CLI::Range(8, 1000000));
    for (const char* name : {"transient", "divider-sweep", "doubler-sweep"}) {
        subs[name]->add_option("--f-in", k.f_in, "input frequency");
    }
    subs["freq-response"]->add_option("--f-center", k.f_in, "center input frequency");
    for (const char* name : {"transient", "freq-response"}) {
        subs[name]->add_option("--p-in", k.p_in, "available input power (dBm)");
    }
    subs["localize"]->add_option("--paths", k.paths, "reflected paths per channel")->check(CLI::NonNegativeNumber);
    subs["figure"]->add_option("id", k.figure, "figure id")->required()->check(CLI::IsMember(figure_ids()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    CommandRequest req;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) req.name = name;
    }
    const auto started = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> defaults;
        req.config = config_path.empty() ? parse_config_text("", &defaults, sets)
                                         : parse_config_file(config_path, &defaults, sets);
        for (const auto& line : defaults) spdlog::info("default {}", line);
        if (*seed_opt) req.config.localization.seed = seed;
        req.threads = threads;
        req.figure = k.figure;
        req.mode = k.mode;
        if (k.paths >= 0) req.paths = k.paths;
        if (k.points > 0) req.points = k.points;
        req.f_in = quantity(k.f_in, "Hz", "--f-in");
        req.p_in = quantity(k.p_in, "dBm", "--p-in");
        req.f_start = quantity(k.f_start, "Hz", "--f-start");
        req.f_stop = quantity(k.f_stop, "Hz", "--f-stop");
        req.vp0 = quantity(k.vp0, "V", "--vp0");

        const CommandOutput output = run_command(req);
        RunInfo info;
        info.args.assign(argv + 1, argv + argc);
        info.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_outputs(out_dir, output, manifest_json(req, output, info));
        std::cout << output.summary_json;
        spdlog::debug("wrote {} files to {}", output.files.size() + 1, out_dir);
        return 0;
    } catch (const ConfigError& e) {
        spdlog::error("config: {}", e.what());
        return kExitUsage;
    } catch (const DomainError& e) {
        spdlog::error("domain: {}", e.what());
        return kExitUsage;
    } catch (const UnderdeterminedError& e) {
        spdlog::error("underdetermined: {}", e.what());
        return kExitUsage;
    } catch (const TopologyError& e) {
        spdlog::error("topology: {}", e.what());
        return kExitUsage;
    } catch (const NumericError& e) {
        spdlog::error("numeric: {}", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitNumeric;
    }
}
