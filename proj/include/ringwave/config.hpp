#pragma once

// Scenario files: a YAML document (JSON is accepted too) with one block per
// model area. Every field is optional; absent fields take the defaults below
// and are reported back so a run log shows the full resolved scenario.
//
// Numbers may carry a unit suffix ("2.67 pF", "4 mm", "4.8 GHz", "50 ohm").
// The suffix must match the field's unit; values are stored in SI.

#include "ringwave/calibration.hpp"
#include "ringwave/coupler.hpp"
#include "ringwave/experiments.hpp"
#include "ringwave/localization.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ringwave {

struct DriveSettings {
    double divider_f_in = 4.8e9;
    double doubler_f_in = 2.4e9;
    double divider_p_start = -4.0;   // dBm
    double divider_p_stop = 24.0;
    double divider_p_step = 0.5;
    double doubler_p_start = -20.0;
    double doubler_p_stop = 10.0;
    double doubler_p_step = 2.0;
    double response_span = 400e6;    // Hz
    int response_points = 21;
    double response_p_low = 2.0;     // dBm, the two drives compared in a divider response
    double response_p_high = 4.0;
    double doubler_response_p = 0.0;
};

struct LocalizationSettings {
    double f_base = 2.4e9;
    int n_paths = 4;
    int max_paths = 8;
    int trials = 10000;
    std::uint64_t seed = 1;
    ChannelModel channel;
};

struct ScenarioConfig {
    RingSpec ring;
    /// When true the line's z0 / eps_eff come from calibrate_line(anchors);
    /// otherwise ring.cell.line is used as given.
    bool line_from_anchors = true;
    CalibrationAnchors anchors;
    PortPair ports;
    CoupledLineSpec coupler;
    double coupler_stopband_db = 40.0;
    SimSettings sim;
    DriveSettings drive;
    LocalizationSettings localization;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
    /// The ring with its line calibrated when line_from_anchors is set.
    RingSpec resolved_ring() const;
};

/// Parses a quantity with an optional unit suffix. `unit` is the base symbol
/// the field expects ("F", "H", "Hz", "m", "ohm", "V", "s", "dBm", "dB",
/// "rad") or empty for a plain number. ConfigError(field) on mismatch.
double parse_quantity(std::string_view text, std::string_view unit, const std::string& field);

/// Reads a scenario from YAML/JSON text. Unknown keys are rejected with their
/// dotted path. A run manifest is accepted too: its "config" block is used.
/// Each default that was applied is appended to `defaults` as "path = value".
/// `overrides` are "block.key=value" items applied on top of the text.
ScenarioConfig parse_config_text(const std::string& text, std::vector<std::string>* defaults = nullptr,
                                 const std::vector<std::string>& overrides = {});

/// As parse_config_text, reading `path`. ConfigError("", ...) when the file
/// cannot be read.
ScenarioConfig parse_config_file(const std::string& path, std::vector<std::string>* defaults = nullptr,
                                 const std::vector<std::string>& overrides = {});

/// Full YAML rendering of every field; parse_config_text(emit_config(c))
/// reproduces c exactly.
std::string emit_config(const ScenarioConfig& config);

/// Same content as emit_config, as a JSON document.
std::string config_json(const ScenarioConfig& config);

}  // namespace ringwave
