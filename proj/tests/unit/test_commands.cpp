#include "ringwave/commands.hpp"
#include "ringwave/errors.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace ringwave;

namespace {

CommandOutput run(const std::string& name, const std::string& figure = {}) {
    CommandRequest req;
    req.name = name;
    req.figure = figure;
    req.config = parse_config_text("");
    return run_command(req);
}

const OutputFile* find(const CommandOutput& out, const std::string& name) {
    for (const auto& f : out.files) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

}  // namespace

TEST(Commands, ResonancesReportOneZeroAndOnePole) {
    const auto j = nlohmann::json::parse(run("resonances").summary_json);
    ASSERT_EQ(j["zeros"].size(), 1u);
    ASSERT_EQ(j["poles"].size(), 1u);
    EXPECT_NEAR(j["zeros"][0]["freq_hz"].get<double>() / 2.4e9, 1.0, 0.05);
    const double pole = j["poles"][0]["freq_hz"].get<double>();
    EXPECT_GT(pole, 4.0e9);
    EXPECT_LT(pole, 5.3e9);
}

TEST(Commands, LocalizeWithoutPathsIsExact) {
    CommandRequest req;
    req.name = "localize";
    req.paths = 0;
    req.config = parse_config_text("");
    const auto j = nlohmann::json::parse(run_command(req).summary_json);
    EXPECT_EQ(j["variance_single_band_rad2"].get<double>(), 0.0);
    EXPECT_EQ(j["variance_dual_band_rad2"].get<double>(), 0.0);
}

TEST(Commands, CsvOutputIsByteStable) {
    const CommandOutput a = run("dispersion");
    const CommandOutput b = run("dispersion");
    ASSERT_EQ(a.files.size(), b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) EXPECT_EQ(a.files[i].content, b.files[i].content);
    const OutputFile* csv = find(a, "dispersion.csv");
    ASSERT_NE(csv, nullptr);
    EXPECT_EQ(csv->content.substr(0, csv->content.find('\n')), "freq_hz,beta_d_rad,alpha_d_np,evanescent");
}

TEST(Commands, FigureRecipesEmitPlotScripts) {
    const CommandOutput out = run("figure", "4");
    EXPECT_NE(find(out, "figure4.csv"), nullptr);
    EXPECT_NE(find(out, "figure4.gp"), nullptr);
    EXPECT_NE(find(out, "figure4.json"), nullptr);
}

TEST(Commands, UnknownNamesAreConfigErrors) {
    EXPECT_THROW(run("warp"), ConfigError);
    EXPECT_THROW(run("figure", "99"), ConfigError);
}

TEST(Commands, ManifestCarriesReusableConfig) {
    CommandRequest req;
    req.name = "calibrate";
    req.config = parse_config_text("varactor: {c0: 2.5pF}");
    const CommandOutput out = run_command(req);
    const std::string manifest = manifest_json(req, out, {{"calibrate"}, 0.1});
    const auto j = nlohmann::json::parse(manifest);
    EXPECT_EQ(j["subcommand"], "calibrate");
    EXPECT_EQ(j["outputs"].size(), out.files.size());
    const ScenarioConfig again = parse_config_text(manifest);
    EXPECT_EQ(emit_config(again), emit_config(req.config));
    EXPECT_EQ(run_command({.name = "calibrate", .config = again}).summary_json, out.summary_json);
}

TEST(Commands, WriteOutputsPlacesEveryFile) {
    const auto dir = std::filesystem::temp_directory_path() / "ringwave_unit_out";
    std::filesystem::remove_all(dir);
    const CommandOutput out = run("bpf");
    write_outputs(dir, out, "{}\n");
    for (const auto& f : out.files) {
        std::ifstream in(dir / f.name);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        EXPECT_EQ(text, f.content) << f.name;
    }
    EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
    for (const auto& e : std::filesystem::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");
    std::filesystem::remove_all(dir);
}

TEST(Commands, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(std::stod(format_number(2.4e9 / 7.0)), 2.4e9 / 7.0);
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-INFINITY), "-inf");
}
