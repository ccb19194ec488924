#include "ringwave/config.hpp"
#include "ringwave/errors.hpp"

#include <yaml-cpp/yaml.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace ringwave {

namespace {

enum class Kind { real, integer, u64, boolean };

struct Field {
    std::string block;  // "varactor", "line.anchors", ...
    std::string key;
    Kind kind = Kind::real;
    std::string unit;
    double* real = nullptr;
    int* integer = nullptr;
    std::uint64_t* u64 = nullptr;
    bool* boolean = nullptr;

    std::string path() const { return block + "." + key; }
};

Field real(std::string block, std::string key, std::string unit, double& v) {
    Field f{std::move(block), std::move(key), Kind::real, std::move(unit)};
    f.real = &v;
    return f;
}

Field integer(std::string block, std::string key, int& v) {
    Field f{std::move(block), std::move(key), Kind::integer, ""};
    f.integer = &v;
    return f;
}

Field u64(std::string block, std::string key, std::uint64_t& v) {
    Field f{std::move(block), std::move(key), Kind::u64, ""};
    f.u64 = &v;
    return f;
}

Field boolean(std::string block, std::string key, bool& v) {
    Field f{std::move(block), std::move(key), Kind::boolean, ""};
    f.boolean = &v;
    return f;
}

const std::array<const char*, 8> kBlocks = {"varactor", "line", "ring", "ports",
                                            "coupler", "sim", "drive", "localization"};

// Every configurable field, in emission order.
std::vector<Field> field_table(ScenarioConfig& c) {
    Varactor& var = c.ring.cell.varactor;
    LineSpec& line = c.ring.cell.line;
    PortNetwork& pm = c.ports.doubler;
    PortNetwork& pd = c.ports.divider;
    SimSettings& sim = c.sim;
    DriveSettings& dr = c.drive;
    LocalizationSettings& loc = c.localization;
    return {
        real("varactor", "c0", "F", var.c0),
        real("varactor", "vj", "V", var.vj),
        real("varactor", "m", "", var.m),
        real("varactor", "v_bias", "V", var.v_bias),
        real("varactor", "r_s", "ohm", var.r_s),

        real("line", "z0", "ohm", line.z0),
        real("line", "eps_eff", "", line.eps_eff),
        real("line", "alpha", "", line.alpha),
        real("line", "alpha_ref_freq", "Hz", line.alpha_ref_freq),
        real("line.anchors", "beta_d", "rad", c.anchors.beta_d),
        real("line.anchors", "f_beta", "Hz", c.anchors.f_beta),
        real("line.anchors", "f_cutoff", "Hz", c.anchors.f_cutoff),

        integer("ring", "n_cells", c.ring.n_cells),
        real("ring", "d", "m", c.ring.cell.d),
        integer("ring", "node_m", c.ring.node_m),
        integer("ring", "node_d", c.ring.node_d),

        real("ports", "l1", "H", pm.l1),
        real("ports", "c1", "F", pm.c1),
        real("ports", "l2", "H", pd.l2),
        real("ports", "l3", "H", pd.l3),
        real("ports", "return_l", "H", pm.return_l),
        real("ports", "return_f", "Hz", pm.return_f),
        real("ports", "z_ref", "ohm", pm.z_ref),
        real("ports", "inductor_q", "", pm.inductor_q),
        real("ports", "q_ref_freq", "Hz", pm.q_ref_freq),

        real("coupler", "z_even", "ohm", c.coupler.z_even),
        real("coupler", "z_odd", "ohm", c.coupler.z_odd),
        real("coupler", "f_design", "Hz", c.coupler.f_design),
        real("coupler", "stopband_db", "dB", c.coupler_stopband_db),

        integer("sim", "steps_per_cycle", sim.steps_per_cycle),
        integer("sim", "cycles", sim.cycles),
        real("sim", "newton_tol", "", sim.newton_tol),
        real("sim", "seed_voltage", "V", sim.seed_voltage),
        integer("sim", "segments_per_half_cell", sim.segments_per_half_cell),
        real("sim", "floor_dbm", "dBm", sim.floor_dbm),
        real("sim", "detect_margin_db", "dB", sim.detect_margin_db),
        real("sim", "source_resistance", "ohm", sim.source_resistance),
        boolean("sim", "lossless", sim.lossless),

        real("drive", "divider_f_in", "Hz", dr.divider_f_in),
        real("drive", "doubler_f_in", "Hz", dr.doubler_f_in),
        real("drive", "divider_p_start", "dBm", dr.divider_p_start),
        real("drive", "divider_p_stop", "dBm", dr.divider_p_stop),
        real("drive", "divider_p_step", "dB", dr.divider_p_step),
        real("drive", "doubler_p_start", "dBm", dr.doubler_p_start),
        real("drive", "doubler_p_stop", "dBm", dr.doubler_p_stop),
        real("drive", "doubler_p_step", "dB", dr.doubler_p_step),
        real("drive", "response_span", "Hz", dr.response_span),
        integer("drive", "response_points", dr.response_points),
        real("drive", "response_p_low", "dBm", dr.response_p_low),
        real("drive", "response_p_high", "dBm", dr.response_p_high),
        real("drive", "doubler_response_p", "dBm", dr.doubler_response_p),

        real("localization", "f_base", "Hz", loc.f_base),
        integer("localization", "n_paths", loc.n_paths),
        integer("localization", "max_paths", loc.max_paths),
        integer("localization", "trials", loc.trials),
        u64("localization", "seed", loc.seed),
        real("localization", "distance", "m", loc.channel.distance),
        real("localization", "max_excess_delay", "s", loc.channel.max_excess_delay),
        real("localization", "max_gain", "", loc.channel.max_gain),
    };
}

bool is_line_value(const Field& f) { return f.block == "line" && (f.key == "z0" || f.key == "eps_eff"); }
bool is_anchor(const Field& f) { return f.block == "line.anchors"; }

// Fields that do not apply to the config as resolved.
bool inactive(const Field& f, const ScenarioConfig& c) {
    return c.line_from_anchors ? is_line_value(f) : is_anchor(f);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string format_value(const Field& f) {
    switch (f.kind) {
    case Kind::real: return format_double(*f.real);
    case Kind::integer: return std::to_string(*f.integer);
    case Kind::u64: return std::to_string(*f.u64);
    case Kind::boolean: return *f.boolean ? "true" : "false";
    }
    return {};
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_integral(const std::string& text, const std::string& field) {
    const std::string_view t = trim(text);
    T value{};
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw ConfigError(field, "expects an integer, got '" + text + "'");
    }
    return value;
}

void assign(const Field& f, const YAML::Node& node) {
    if (!node.IsScalar()) throw ConfigError(f.path(), "expects a scalar value");
    const std::string text = node.Scalar();
    switch (f.kind) {
    case Kind::real:
        *f.real = parse_quantity(text, f.unit, f.path());
        break;
    case Kind::integer:
        *f.integer = parse_integral<int>(text, f.path());
        break;
    case Kind::u64:
        *f.u64 = parse_integral<std::uint64_t>(text, f.path());
        break;
    case Kind::boolean:
        if (text == "true") {
            *f.boolean = true;
        } else if (text == "false") {
            *f.boolean = false;
        } else {
            throw ConfigError(f.path(), "expects true or false, got '" + text + "'");
        }
        break;
    }
}

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

}  // namespace

double parse_quantity(std::string_view text, std::string_view unit, const std::string& field) {
    const std::string_view t = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{}) throw ConfigError(field, "expects a number, got '" + std::string(text) + "'");
    const std::string_view suffix = trim(t.substr(res.ptr - t.data()));
    if (suffix.empty()) return value;
    if (unit.empty()) throw ConfigError(field, "takes a plain number, got unit '" + std::string(suffix) + "'");

    static const std::map<std::string, double, std::less<>> prefixes = {
        {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6}, {"\xC2\xB5", 1e-6},
        {"m", 1e-3},  {"k", 1e3},   {"M", 1e6},  {"G", 1e9},  {"T", 1e12}};
    std::vector<std::string_view> symbols{unit};
    if (unit == "ohm") symbols = {"ohm", "Ohm", "\xCE\xA9"};
    const bool prefixable = unit != "dB" && unit != "dBm" && unit != "rad";
    for (const std::string_view sym : symbols) {
        if (suffix.size() < sym.size() || suffix.substr(suffix.size() - sym.size()) != sym) continue;
        const std::string_view prefix = suffix.substr(0, suffix.size() - sym.size());
        if (prefix.empty()) return value;
        if (!prefixable) break;
        const auto it = prefixes.find(prefix);
        if (it != prefixes.end()) return value * it->second;
    }
    throw ConfigError(field, "unit '" + std::string(suffix) + "' does not fit (expects " + std::string(unit) + ")");
}

void ScenarioConfig::validate() const {
    const Varactor& var = ring.cell.varactor;
    require(var.c0 >= 0.0, "varactor.c0", "must be >= 0");
    require(var.vj > 0.0, "varactor.vj", "must be > 0");
    require(var.m >= 0.0 && var.m < 1.5, "varactor.m", "must lie in [0, 1.5)");
    require(var.v_bias >= 0.0, "varactor.v_bias", "must be >= 0 (reverse bias)");
    require(var.r_s >= 0.0, "varactor.r_s", "must be >= 0");
    if (line_from_anchors) {
        require(anchors.beta_d > 0.0 && anchors.beta_d < constants::pi, "line.anchors.beta_d", "must lie in (0, pi)");
        require(anchors.f_beta > 0.0, "line.anchors.f_beta", "must be > 0");
        require(anchors.f_cutoff > anchors.f_beta, "line.anchors.f_cutoff", "must exceed f_beta");
    } else {
        require(ring.cell.line.z0 > 0.0, "line.z0", "must be > 0");
        require(ring.cell.line.eps_eff >= 1.0, "line.eps_eff", "must be >= 1");
    }
    require(ring.cell.line.alpha >= 0.0, "line.alpha", "must be >= 0");
    require(ring.cell.line.alpha_ref_freq > 0.0, "line.alpha_ref_freq", "must be > 0");
    require(ring.n_cells >= 1, "ring.n_cells", "must be >= 1");
    require(ring.cell.d > 0.0, "ring.d", "must be > 0");
    require(ring.node_m >= 0 && ring.node_m < ring.station_count(), "ring.node_m", "must be a ring station");
    require(ring.node_d >= 0 && ring.node_d < ring.station_count(), "ring.node_d", "must be a ring station");
    require(ring.node_m != ring.node_d, "ring.node_d", "must differ from node_m");
    require(ports.doubler.l1 > 0.0, "ports.l1", "must be > 0");
    require(ports.doubler.c1 > 0.0, "ports.c1", "must be > 0");
    require(ports.divider.l2 > 0.0, "ports.l2", "must be > 0");
    require(ports.divider.l3 > 0.0, "ports.l3", "must be > 0");
    require(ports.doubler.return_l >= 0.0, "ports.return_l", "must be >= 0");
    require(ports.doubler.return_f > 0.0, "ports.return_f", "must be > 0");
    require(ports.doubler.z_ref > 0.0, "ports.z_ref", "must be > 0");
    require(coupler.z_even > coupler.z_odd && coupler.z_odd > 0.0, "coupler.z_odd", "need z_even > z_odd > 0");
    require(coupler.f_design > 0.0, "coupler.f_design", "must be > 0");
    require(coupler_stopband_db > 0.0, "coupler.stopband_db", "must be > 0");
    require(sim.steps_per_cycle >= 64, "sim.steps_per_cycle", "must be >= 64");
    require(sim.cycles >= 200, "sim.cycles", "must be >= 200");
    require(sim.newton_tol > 0.0 && sim.newton_tol < 1e-3, "sim.newton_tol", "must lie in (0, 1e-3)");
    require(sim.seed_voltage >= 0.0, "sim.seed_voltage", "must be >= 0");
    require(sim.segments_per_half_cell >= 1, "sim.segments_per_half_cell", "must be >= 1");
    require(sim.detect_margin_db > 0.0, "sim.detect_margin_db", "must be > 0");
    require(sim.source_resistance >= 0.0, "sim.source_resistance", "must be >= 0");
    require(drive.divider_f_in > 0.0, "drive.divider_f_in", "must be > 0");
    require(drive.doubler_f_in > 0.0, "drive.doubler_f_in", "must be > 0");
    require(drive.divider_p_step > 0.0, "drive.divider_p_step", "must be > 0");
    require(drive.divider_p_stop >= drive.divider_p_start, "drive.divider_p_stop", "must be >= divider_p_start");
    require(drive.doubler_p_step > 0.0, "drive.doubler_p_step", "must be > 0");
    require(drive.doubler_p_stop >= drive.doubler_p_start, "drive.doubler_p_stop", "must be >= doubler_p_start");
    require(drive.response_span >= 0.0, "drive.response_span", "must be >= 0");
    require(drive.response_points >= 11, "drive.response_points", "must be >= 11");
    require(localization.f_base > 0.0, "localization.f_base", "must be > 0");
    require(localization.n_paths >= 0, "localization.n_paths", "must be >= 0");
    require(localization.max_paths >= 0, "localization.max_paths", "must be >= 0");
    require(localization.trials >= 1000, "localization.trials", "must be >= 1000");
    require(localization.channel.distance > 0.0, "localization.distance", "must be > 0");
    require(localization.channel.max_excess_delay > 0.0, "localization.max_excess_delay", "must be > 0");
    require(localization.channel.max_gain >= 0.0, "localization.max_gain", "must be >= 0");
}

RingSpec ScenarioConfig::resolved_ring() const {
    RingSpec out = ring;
    if (line_from_anchors) {
        LineSpec fitted = calibrate_line(anchors, ring.cell.varactor.c0, ring.cell.d);
        fitted.alpha = ring.cell.line.alpha;
        fitted.alpha_ref_freq = ring.cell.line.alpha_ref_freq;
        out.cell.line = fitted;
    }
    out.validate();
    return out;
}

ScenarioConfig parse_config_text(const std::string& text, std::vector<std::string>* defaults,
                                 const std::vector<std::string>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("", std::string("malformed config: ") + e.what());
    }
    if (root.IsMap() && root["manifest_version"]) {
        const YAML::Node inner = root["config"];
        if (!inner) throw ConfigError("config", "manifest has no config block");
        root.reset(inner);
    }
    if (!root.IsNull() && !root.IsMap()) throw ConfigError("", "config must be a mapping of blocks");
    if (root.IsNull() && !overrides.empty()) root = YAML::Node(YAML::NodeType::Map);
    for (const std::string& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError(item, "override must look like block.key=value");
        const std::string path = std::string(trim(std::string_view(item).substr(0, eq)));
        YAML::Node cur(root);
        std::size_t start = 0;
        for (;;) {
            const auto dot = path.find('.', start);
            const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty()) throw ConfigError(path, "malformed override path");
            if (dot == std::string::npos) {
                cur[part] = std::string(trim(std::string_view(item).substr(eq + 1)));
                break;
            }
            if (!cur[part]) cur[part] = YAML::Node(YAML::NodeType::Map);
            if (!cur[part].IsMap()) throw ConfigError(path, "override path crosses a scalar");
            YAML::Node next = cur[part];
            cur.reset(next);
            start = dot + 1;
        }
    }

    ScenarioConfig cfg;
    std::vector<Field> fields = field_table(cfg);
    std::map<std::string, bool> seen;
    auto find = [&](const std::string& block, const std::string& key) -> const Field* {
        for (const Field& f : fields) {
            if (f.block == block && f.key == key) return &f;
        }
        return nullptr;
    };
    auto read_block = [&](const std::string& block, const YAML::Node& node, auto& self) -> void {
        if (!node.IsMap()) throw ConfigError(block, "expects a mapping");
        for (const auto& kv : node) {
            const std::string key = kv.first.as<std::string>();
            if (block == "line" && key == "anchors") {
                self("line.anchors", kv.second, self);
                continue;
            }
            const Field* f = find(block, key);
            if (f == nullptr) throw ConfigError(block + "." + key, "unknown key");
            assign(*f, kv.second);
            seen[f->path()] = true;
        }
    };
    if (root.IsMap()) {
        for (const auto& kv : root) {
            const std::string block = kv.first.as<std::string>();
            if (std::find(kBlocks.begin(), kBlocks.end(), block) == kBlocks.end()) {
                throw ConfigError(block, "unknown key");
            }
            read_block(block, kv.second, read_block);
        }
    }

    const bool has_z0 = seen.count("line.z0") > 0;
    const bool has_eps = seen.count("line.eps_eff") > 0;
    if (has_z0 != has_eps) throw ConfigError(has_z0 ? "line.eps_eff" : "line.z0", "z0 and eps_eff go together");
    bool has_anchor = false;
    for (const auto& [path, _] : seen) has_anchor = has_anchor || path.rfind("line.anchors.", 0) == 0;
    if (has_z0 && has_anchor) throw ConfigError("line.anchors", "give either z0/eps_eff or anchors, not both");
    cfg.line_from_anchors = !has_z0;

    // Reference impedance and inductor Q apply to both ports.
    cfg.ports.divider.z_ref = cfg.ports.doubler.z_ref;
    cfg.ports.divider.inductor_q = cfg.ports.doubler.inductor_q;
    cfg.ports.divider.q_ref_freq = cfg.ports.doubler.q_ref_freq;

    if (defaults != nullptr) {
        for (const Field& f : fields) {
            if (seen.count(f.path()) || inactive(f, cfg)) continue;
            defaults->push_back(f.path() + " = " + format_value(f) + (f.unit.empty() ? "" : " " + f.unit));
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path, std::vector<std::string>* defaults,
                                 const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), defaults, overrides);
}

std::string emit_config(const ScenarioConfig& config) {
    ScenarioConfig copy = config;
    const std::vector<Field> fields = field_table(copy);
    YAML::Emitter out;
    out << YAML::BeginMap;
    for (const char* block : kBlocks) {
        out << YAML::Key << block << YAML::Value << YAML::BeginMap;
        bool in_anchors = false;
        for (const Field& f : fields) {
            const bool anchor = is_anchor(f);
            if (f.block != block && !(anchor && std::string(block) == "line")) continue;
            if (inactive(f, copy)) continue;
            if (anchor && !in_anchors) {
                out << YAML::Key << "anchors" << YAML::Value << YAML::BeginMap;
                in_anchors = true;
            }
            out << YAML::Key << f.key << YAML::Value << format_value(f);
        }
        if (in_anchors) out << YAML::EndMap;
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string config_json(const ScenarioConfig& config) {
    ScenarioConfig copy = config;
    const std::vector<Field> fields = field_table(copy);
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    for (const Field& f : fields) {
        if (inactive(f, copy)) continue;
        nlohmann::ordered_json& block =
            is_anchor(f) ? root["line"]["anchors"] : root[f.block];
        switch (f.kind) {
        case Kind::real: block[f.key] = *f.real; break;
        case Kind::integer: block[f.key] = *f.integer; break;
        case Kind::u64: block[f.key] = *f.u64; break;
        case Kind::boolean: block[f.key] = *f.boolean; break;
        }
    }
    return root.dump(2);
}

}  // namespace ringwave
