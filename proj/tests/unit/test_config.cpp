#include "ringwave/config.hpp"
#include "ringwave/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ringwave;

namespace {

std::string field_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
    try {
        parse_config_text(text, nullptr, overrides);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

bool has_line(const std::vector<std::string>& lines, const std::string& prefix) {
    return std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST(Config, MinimalFileAppliesAndReportsDefaults) {
    std::vector<std::string> defaults;
    const ScenarioConfig c = parse_config_text("varactor:\n  c0: 3 pF\n", &defaults);
    EXPECT_DOUBLE_EQ(c.ring.cell.varactor.c0, 3e-12);
    EXPECT_DOUBLE_EQ(c.ring.cell.varactor.vj, 0.7);
    EXPECT_TRUE(has_line(defaults, "varactor.vj = 0.7"));
    EXPECT_TRUE(has_line(defaults, "varactor.m = 0.5"));
    EXPECT_TRUE(has_line(defaults, "varactor.r_s = 0.5"));
    EXPECT_FALSE(has_line(defaults, "varactor.c0"));
    EXPECT_TRUE(c.line_from_anchors);
}

TEST(Config, NegativeCapacitanceNamesField) {
    EXPECT_EQ(field_of("varactor:\n  c0: -2.67e-12\n"), "varactor.c0");
}

TEST(Config, UnknownKeysRejectedWithPath) {
    EXPECT_EQ(field_of("varactor:\n  cj0: 1\n"), "varactor.cj0");
    EXPECT_EQ(field_of("bogus:\n  x: 1\n"), "bogus");
    EXPECT_EQ(field_of("line:\n  anchors:\n    beta: 1\n"), "line.anchors.beta");
}

TEST(Config, UnitSuffixes) {
    EXPECT_DOUBLE_EQ(parse_quantity("2.67 pF", "F", "x"), 2.67e-12);
    EXPECT_DOUBLE_EQ(parse_quantity("4.8GHz", "Hz", "x"), 4.8e9);
    EXPECT_DOUBLE_EQ(parse_quantity("4 mm", "m", "x"), 4e-3);
    EXPECT_DOUBLE_EQ(parse_quantity("0.5 nH", "H", "x"), 0.5e-9);
    EXPECT_DOUBLE_EQ(parse_quantity("50 ohm", "ohm", "x"), 50.0);
    EXPECT_DOUBLE_EQ(parse_quantity("20 ns", "s", "x"), 20e-9);
    EXPECT_DOUBLE_EQ(parse_quantity("-3 dBm", "dBm", "x"), -3.0);
    EXPECT_DOUBLE_EQ(parse_quantity("1e-9", "H", "x"), 1e-9);
    EXPECT_THROW(parse_quantity("2 nF", "H", "x"), ConfigError);
    EXPECT_THROW(parse_quantity("3 mdBm", "dBm", "x"), ConfigError);
    EXPECT_THROW(parse_quantity("3 V", "", "x"), ConfigError);
    EXPECT_THROW(parse_quantity("fast", "Hz", "x"), ConfigError);
}

TEST(Config, ExplicitLineDisablesAnchors) {
    const ScenarioConfig c = parse_config_text("line:\n  z0: 30\n  eps_eff: 8\n");
    EXPECT_FALSE(c.line_from_anchors);
    EXPECT_DOUBLE_EQ(c.resolved_ring().cell.line.z0, 30.0);
    EXPECT_EQ(field_of("line:\n  z0: 30\n"), "line.eps_eff");
    EXPECT_EQ(field_of("line:\n  z0: 30\n  eps_eff: 8\n  anchors:\n    beta_d: 1\n"), "line.anchors");
}

TEST(Config, AnchorsCalibrateTheLine) {
    const ScenarioConfig c = parse_config_text("");
    const RingSpec r = c.resolved_ring();
    EXPECT_NEAR(r.cell.line.z0, 25.2669, 1e-3);
    EXPECT_NEAR(r.cell.line.eps_eff, 10.0656, 1e-3);
}

TEST(Config, EmitRoundTripsExactly) {
    ScenarioConfig c = parse_config_text(
        "varactor: {c0: 2.67pF, m: 0.47, r_s: 0.7}\n"
        "ring: {n_cells: 5, node_d: 5, d: 3.3mm}\n"
        "ports: {l1: 2.2nH, return_l: 0.4nH, z_ref: 50}\n"
        "sim: {cycles: 640, lossless: true}\n"
        "localization: {seed: 18446744073709551615, n_paths: 6}\n");
    c.ring.cell.varactor.vj = 0.1 + 0.2;  // not representable in short decimal
    const ScenarioConfig d = parse_config_text(emit_config(c));
    EXPECT_EQ(emit_config(d), emit_config(c));
    EXPECT_EQ(d.ring.cell.varactor.vj, c.ring.cell.varactor.vj);
    EXPECT_EQ(d.localization.seed, 18446744073709551615ULL);
    EXPECT_EQ(d.ring.n_cells, 5);
    EXPECT_TRUE(d.sim.lossless);
    EXPECT_EQ(config_json(d), config_json(c));
}

TEST(Config, JsonAndManifestInputs) {
    const ScenarioConfig c = parse_config_text(R"({"varactor": {"c0": 2e-12}, "ring": {"n_cells": 4, "node_d": 4}})");
    EXPECT_DOUBLE_EQ(c.ring.cell.varactor.c0, 2e-12);
    const std::string manifest = "{\"manifest_version\": 1, \"tool\": \"ringwave\", \"config\": " + config_json(c) + "}";
    const ScenarioConfig m = parse_config_text(manifest);
    EXPECT_EQ(emit_config(m), emit_config(c));
}

TEST(Config, OverridesApplyOnTop) {
    const ScenarioConfig c = parse_config_text("varactor: {c0: 2pF}\n", nullptr, {"varactor.c0=3pF", "ring.n_cells=4",
                                                                             "ring.node_d=4", "line.anchors.f_cutoff=5.5GHz"});
    EXPECT_DOUBLE_EQ(c.ring.cell.varactor.c0, 3e-12);
    EXPECT_EQ(c.ring.n_cells, 4);
    EXPECT_DOUBLE_EQ(c.anchors.f_cutoff, 5.5e9);
    EXPECT_EQ(field_of("", {"varactor.nope=1"}), "varactor.nope");
}

TEST(Config, TypeErrors) {
    EXPECT_EQ(field_of("ring: {n_cells: 3.5}"), "ring.n_cells");
    EXPECT_EQ(field_of("sim: {lossless: maybe}"), "sim.lossless");
    EXPECT_EQ(field_of("varactor: 3"), "varactor");
    EXPECT_EQ(field_of("ring: {node_d: 9}"), "ring.node_d");
    EXPECT_EQ(field_of("sim: {steps_per_cycle: 32}"), "sim.steps_per_cycle");
}

TEST(Config, MalformedYaml) {
    EXPECT_THROW(parse_config_text("varactor: [c0: 1"), ConfigError);
    EXPECT_THROW(parse_config_file("/nonexistent/ringwave.yaml"), ConfigError);
}
