#include "ringwave/commands.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"
#include "ringwave/parametric.hpp"
#include "ringwave/ring.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ringwave {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kTool = "ringwave";

// Accumulates a CSV table with one header row.
class Csv {
public:
    explicit Csv(std::initializer_list<std::string> header) {
        bool first = true;
        for (const auto& h : header) {
            text_ += first ? h : "," + h;
            first = false;
        }
        text_ += "\n";
    }
    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) text_ += ",";
            text_ += format_number(v);
            first = false;
        }
        text_ += "\n";
    }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

DriveMode drive_mode(const std::string& mode) {
    if (mode == "divider") return DriveMode::divider;
    if (mode == "doubler") return DriveMode::doubler;
    throw ConfigError("mode", "expects divider or doubler, got '" + mode + "'");
}

struct Context {
    const CommandRequest& req;
    RingSpec ring;
    SimSettings sim;
    CommandOutput out;
    json summary = json::object();

    explicit Context(const CommandRequest& r) : req(r), ring(r.config.resolved_ring()), sim(r.config.sim) {
        sim.threads = std::max(1, r.threads);
    }
    void add(std::string name, std::string content) { out.files.push_back({std::move(name), std::move(content)}); }
};

std::string gnuplot(const std::string& stem, const std::string& xlabel, const std::string& ylabel,
                    const std::vector<std::string>& series) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << stem << ".png'\n"
       << "set key autotitle columnhead\n"
       << "set grid\n"
       << "set xlabel '" << xlabel << "'\n"
       << "set ylabel '" << ylabel << "'\n"
       << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) gp << (i ? ", \\\n     " : "") << series[i];
    gp << "\n";
    return gp.str();
}

// Impedance at node M and the resonance list.
void impedance_scan(Context& ctx, const std::string& stem, double f_lo, double f_hi, int points) {
    Csv csv({"freq_hz", "re_z_ohm", "im_z_ohm", "abs_z_ohm"});
    for (double f : linspace(f_lo, f_hi, points)) {
        const cplx z = ring_input_impedance(f, ctx.ring);
        csv.row({f, z.real(), z.imag(), std::abs(z)});
    }
    ctx.add(stem + ".csv", csv.str());

    json zeros = json::array();
    json poles = json::array();
    for (const Resonance& r : find_resonances(ctx.ring, f_lo, f_hi)) {
        json item = {{"freq_hz", r.freq}, {"q", nullable(r.q_estimate)}};
        (r.kind == ResonanceKind::zero ? zeros : poles).push_back(item);
    }
    ctx.summary["n_cells"] = ctx.ring.n_cells;
    ctx.summary["f_lo_hz"] = f_lo;
    ctx.summary["f_hi_hz"] = f_hi;
    ctx.summary["zeros"] = zeros;
    ctx.summary["poles"] = poles;
}

void cmd_dispersion(Context& ctx) {
    const double fc = cutoff_frequency(ctx.ring.cell);
    const double f_lo = ctx.req.f_start.value_or(10e6);
    const double f_hi = ctx.req.f_stop.value_or(std::min(8e9, 1.2 * fc));
    Csv csv({"freq_hz", "beta_d_rad", "alpha_d_np", "evanescent"});
    for (double f : linspace(f_lo, f_hi, ctx.req.points.value_or(600))) {
        const LoadedPhase ph = loaded_phase(f, ctx.ring.cell);
        csv.row({f, ph.beta_d, ph.alpha_d, ph.evanescent ? 1.0 : 0.0});
    }
    ctx.add("dispersion.csv", csv.str());
    ctx.summary["f_cutoff_hz"] = fc;
    ctx.summary["z0_ohm"] = ctx.ring.cell.line.z0;
    ctx.summary["eps_eff"] = ctx.ring.cell.line.eps_eff;
}

void cmd_resonances(Context& ctx) {
    impedance_scan(ctx, "impedance", ctx.req.f_start.value_or(0.5e9), ctx.req.f_stop.value_or(6e9),
                   ctx.req.points.value_or(1101));
}

void cmd_standing_wave(Context& ctx) {
    const Mode mode = drive_mode(ctx.req.mode) == DriveMode::divider ? Mode::divider : Mode::doubler;
    const double vp0 = ctx.req.vp0.value_or(1.0);
    const double f_pump = ctx.req.f_in.value_or(ctx.req.config.drive.divider_f_in);
    const PumpState pump = make_pump_state(ctx.ring, vp0, f_pump);
    const StandingWaveProfile prof = standing_wave_profile(mode, ctx.ring, pump, ctx.req.points.value_or(201));
    Csv csv({"x_m", "tone_f", "tone_2f"});
    for (std::size_t i = 0; i < prof.x.size(); ++i) csv.row({prof.x[i], prof.tone_f[i], prof.tone_2f[i]});
    ctx.add("standing_wave.csv", csv.str());

    const TaylorCoeffs tc = taylor_coefficients(ctx.ring.cell.varactor);
    json nodes = json::array();
    for (int n = 1; n <= ctx.ring.n_cells; ++n) {
        const double amp = node_pump_amplitude(n, pump);
        nodes.push_back({{"node", n},
                         {"pump_amplitude_v", amp},
                         {"ratio_to_vp0", vp0 > 0.0 ? amp / vp0 : 0.0},
                         {"negative_resistance_ohm", nullable(node_negative_resistance(n, pump, tc))}});
    }
    ctx.summary["mode"] = ctx.req.mode;
    ctx.summary["f_pump_hz"] = f_pump;
    ctx.summary["v_p0"] = vp0;
    ctx.summary["beta1_d"] = prof.beta1_d;
    ctx.summary["beta2_d"] = prof.beta2_d;
    ctx.summary["nodes"] = nodes;
}

void cmd_bpf(Context& ctx) {
    const CoupledLineSpec& spec = ctx.req.config.coupler;
    const double stop = ctx.req.config.coupler_stopband_db;
    const double z_ref = ctx.req.config.ports.doubler.z_ref;
    Csv csv({"freq_hz", "theta_rad", "rejection_db", "re_z_image_ohm", "im_z_image_ohm"});
    const double f_lo = ctx.req.f_start.value_or(0.05 * spec.f_design);
    const double f_hi = ctx.req.f_stop.value_or(2.5 * spec.f_design);
    for (double f : linspace(f_lo, f_hi, ctx.req.points.value_or(491))) {
        const double theta = spec.theta_at(f);
        const double wrapped = std::fmod(theta, constants::pi);
        cplx zi{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        if (wrapped > 1e-9 && wrapped < constants::pi - 1e-9) zi = image_impedances(wrapped, spec).z_i;
        csv.row({f, theta, rejection_estimate(f, spec, z_ref, stop), zi.real(), zi.imag()});
    }
    ctx.add("bpf.csv", csv.str());
    const PassbandEdges edges = passband_edges(spec);
    const double to_f = spec.f_design / (0.5 * constants::pi);
    ctx.summary["theta_lo_rad"] = edges.theta_lo;
    ctx.summary["theta_hi_rad"] = edges.theta_hi;
    ctx.summary["f_lo_hz"] = edges.theta_lo * to_f;
    ctx.summary["f_hi_hz"] = edges.theta_hi * to_f;
    ctx.summary["rejection_at_2f_db"] = rejection_estimate(2.0 * spec.f_design, spec, z_ref, stop);
}

json point_json(const OperatingPoint& p) {
    return {{"f_in_hz", p.f_in},
            {"p_in_dbm", p.p_in_dbm},
            {"f_out_hz", p.f_out},
            {"p_out_dbm", nullable(p.p_out_dbm)},
            {"p_feedthrough_dbm", nullable(p.p_feedthrough_dbm)},
            {"noise_floor_dbm", nullable(p.noise_floor_dbm)},
            {"detected", p.detected}};
}

double default_f_in(const Context& ctx, DriveMode mode) {
    const DriveSettings& d = ctx.req.config.drive;
    return ctx.req.f_in.value_or(mode == DriveMode::divider ? d.divider_f_in : d.doubler_f_in);
}

void cmd_transient(Context& ctx) {
    const DriveMode mode = drive_mode(ctx.req.mode);
    const double f_in = default_f_in(ctx, mode);
    const double p_in = ctx.req.p_in.value_or(0.0);
    TimeSeries ts;
    const OperatingPoint op = run_point(ctx.ring, ctx.req.config.ports, mode, f_in, p_in, ctx.sim, &ts);
    ts.names = {"v_out", "v_in"};
    std::ostringstream csv;
    write_csv(ts, csv);
    ctx.add("waveform.csv", csv.str());
    ctx.summary["mode"] = ctx.req.mode;
    ctx.summary["point"] = point_json(op);
}

std::string sweep_csv(const SweepResult& s) {
    Csv csv({"p_in_dbm", "p_out_dbm", "p_feedthrough_dbm", "noise_floor_dbm", "detected", "conversion_loss_db"});
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const OperatingPoint& p = s.points[i];
        csv.row({p.p_in_dbm, p.p_out_dbm, p.p_feedthrough_dbm, p.noise_floor_dbm, p.detected ? 1.0 : 0.0,
                 s.conversion_loss_db[i]});
    }
    return csv.str();
}

SweepResult run_divider_sweep(Context& ctx, const std::string& stem) {
    const DriveSettings& d = ctx.req.config.drive;
    const double f_in = default_f_in(ctx, DriveMode::divider);
    const SweepResult s = divider_sweep(ctx.ring, ctx.req.config.ports, f_in,
                                        power_grid(d.divider_p_start, d.divider_p_stop, d.divider_p_step), ctx.sim);
    ctx.add(stem + ".csv", sweep_csv(s));
    ctx.summary["f_in_hz"] = f_in;
    ctx.summary["p_th_dbm"] = s.p_th_dbm ? json(*s.p_th_dbm) : json(nullptr);
    ctx.summary["p_th_uncertainty_db"] = s.p_th_uncertainty_db;
    ctx.summary["p_sat_dbm"] = nullable(s.p_sat_dbm);
    return s;
}

SweepResult run_doubler_sweep(Context& ctx, const std::string& stem) {
    const DriveSettings& d = ctx.req.config.drive;
    const double f_in = default_f_in(ctx, DriveMode::doubler);
    const SweepResult s = doubler_sweep(ctx.ring, ctx.req.config.ports, f_in,
                                        power_grid(d.doubler_p_start, d.doubler_p_stop, d.doubler_p_step), ctx.sim);
    ctx.add(stem + ".csv", sweep_csv(s));
    double cl0 = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (std::abs(s.points[i].p_in_dbm) < 1e-9) cl0 = s.conversion_loss_db[i];
    }
    ctx.summary["f_in_hz"] = f_in;
    ctx.summary["small_signal_slope_db_per_db"] = nullable(output_slope(s, -20.0, -10.0));
    ctx.summary["conversion_loss_0dbm_db"] = nullable(cl0);
    ctx.summary["p_sat_dbm"] = nullable(s.p_sat_dbm);
    return s;
}

FrequencyResponse run_response(Context& ctx, DriveMode mode, double p_in, const std::string& stem) {
    const DriveSettings& d = ctx.req.config.drive;
    const double center = default_f_in(ctx, mode);
    const FrequencyResponse r = frequency_response(ctx.ring, ctx.req.config.ports, mode, p_in, center,
                                                   d.response_span, d.response_points, ctx.sim);
    Csv csv({"f_in_hz", "f_out_hz", "p_out_dbm", "p_feedthrough_dbm", "noise_floor_dbm", "detected"});
    for (const OperatingPoint& p : r.points) {
        csv.row({p.f_in, p.f_out, p.p_out_dbm, p.p_feedthrough_dbm, p.noise_floor_dbm, p.detected ? 1.0 : 0.0});
    }
    ctx.add(stem + ".csv", csv.str());
    return r;
}

json response_json(const FrequencyResponse& r, double p_in) {
    return {{"p_in_dbm", p_in},
            {"bandwidth_hz", r.bandwidth_hz},
            {"f_peak_hz", r.f_peak},
            {"p_peak_dbm", nullable(r.p_peak_dbm)}};
}

void cmd_freq_response(Context& ctx) {
    const DriveMode mode = drive_mode(ctx.req.mode);
    const DriveSettings& d = ctx.req.config.drive;
    const double p_in = ctx.req.p_in.value_or(mode == DriveMode::divider ? d.response_p_high : d.doubler_response_p);
    const FrequencyResponse r = run_response(ctx, mode, p_in, "response");
    ctx.summary["mode"] = ctx.req.mode;
    ctx.summary["response"] = response_json(r, p_in);
}

void cmd_localize(Context& ctx) {
    const LocalizationSettings& loc = ctx.req.config.localization;
    const int n_paths = ctx.req.paths.value_or(loc.n_paths);
    const VarianceResult v =
        monte_carlo_variance(loc.f_base, n_paths, loc.trials, loc.seed, loc.channel, ctx.sim.threads);
    ctx.summary["f_base_hz"] = loc.f_base;
    ctx.summary["n_paths"] = n_paths;
    ctx.summary["trials"] = loc.trials;
    ctx.summary["seed"] = loc.seed;
    ctx.summary["variance_single_band_rad2"] = v.single_band;
    ctx.summary["variance_dual_band_rad2"] = v.dual_band;
}

void cmd_calibrate(Context& ctx) {
    const ScenarioConfig& cfg = ctx.req.config;
    UnitCell lossless = ctx.ring.cell;
    lossless.varactor.r_s = 0.0;
    lossless.line.alpha = 0.0;
    ctx.summary["from_anchors"] = cfg.line_from_anchors;
    ctx.summary["z0_ohm"] = lossless.line.z0;
    ctx.summary["eps_eff"] = lossless.line.eps_eff;
    ctx.summary["beta_d_at_f_beta_rad"] = loaded_phase(cfg.anchors.f_beta, lossless).beta_d;
    ctx.summary["f_cutoff_hz"] = cutoff_frequency(lossless);
    ctx.summary["target_beta_d_rad"] = cfg.anchors.beta_d;
    ctx.summary["target_f_beta_hz"] = cfg.anchors.f_beta;
    ctx.summary["target_f_cutoff_hz"] = cfg.anchors.f_cutoff;
}

void cmd_figure(Context& ctx) {
    const std::string& id = ctx.req.figure;
    const DriveSettings& d = ctx.req.config.drive;
    const std::string stem = "figure" + id;
    ctx.summary["figure"] = id;
    if (id == "4") {
        impedance_scan(ctx, stem, 0.5e9, 6e9, 1101);
        ctx.add(stem + ".gp", gnuplot(stem, "frequency (Hz)", "Z_in at node M (ohm)",
                                      {"'" + stem + ".csv' using 1:3 with lines", "'' using 1:2 with lines"}));
    } else if (id == "9") {
        run_divider_sweep(ctx, stem);
        ctx.add(stem + ".gp", gnuplot(stem, "input power (dBm)", "output power (dBm)",
                                      {"'" + stem + ".csv' using 1:2 with linespoints",
                                       "'' using 1:3 with linespoints"}));
    } else if (id == "10") {
        const std::string lo = stem + "_low";
        const std::string hi = stem + "_high";
        const FrequencyResponse r_lo = run_response(ctx, DriveMode::divider, d.response_p_low, lo);
        const FrequencyResponse r_hi = run_response(ctx, DriveMode::divider, d.response_p_high, hi);
        ctx.summary["low"] = response_json(r_lo, d.response_p_low);
        ctx.summary["high"] = response_json(r_hi, d.response_p_high);
        ctx.summary["bandwidth_grows_with_drive"] = r_hi.bandwidth_hz > r_lo.bandwidth_hz;
        ctx.add(stem + ".gp", gnuplot(stem, "input frequency (Hz)", "output power at f_in/2 (dBm)",
                                      {"'" + lo + ".csv' using 1:3 with linespoints title 'P_in = " +
                                           format_number(d.response_p_low) + " dBm'",
                                       "'" + hi + ".csv' using 1:3 with linespoints title 'P_in = " +
                                           format_number(d.response_p_high) + " dBm'"}));
    } else if (id == "11") {
        run_doubler_sweep(ctx, stem);
        ctx.add(stem + ".gp", gnuplot(stem, "input power (dBm)", "power (dBm)",
                                      {"'" + stem + ".csv' using 1:2 with linespoints",
                                       "'' using 1:6 with linespoints axes x1y2"}));
    } else if (id == "12") {
        const FrequencyResponse r = run_response(ctx, DriveMode::doubler, d.doubler_response_p, stem);
        ctx.summary["response"] = response_json(r, d.doubler_response_p);
        ctx.add(stem + ".gp", gnuplot(stem, "input frequency (Hz)", "output power at 2 f_in (dBm)",
                                      {"'" + stem + ".csv' using 1:3 with linespoints"}));
    } else if (id == "1c") {
        const LocalizationSettings& loc = ctx.req.config.localization;
        Csv csv({"n_paths", "variance_single_band_rad2", "variance_dual_band_rad2"});
        json rows = json::array();
        for (int n = 0; n <= loc.max_paths; ++n) {
            const VarianceResult v =
                monte_carlo_variance(loc.f_base, n, loc.trials, loc.seed, loc.channel, ctx.sim.threads);
            csv.row({static_cast<double>(n), v.single_band, v.dual_band});
            rows.push_back({{"n_paths", n}, {"single_band", v.single_band}, {"dual_band", v.dual_band}});
        }
        ctx.add(stem + ".csv", csv.str());
        ctx.summary["trials"] = loc.trials;
        ctx.summary["seed"] = loc.seed;
        ctx.summary["variance"] = rows;
        ctx.add(stem + ".gp", gnuplot(stem, "number of reflected paths", "phase error variance (rad^2)",
                                      {"'" + stem + ".csv' using 1:2 with linespoints",
                                       "'' using 1:3 with linespoints"}));
    } else {
        throw ConfigError("figure", "unknown figure '" + id + "'");
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "dispersion",    "resonances",    "standing-wave", "bpf",       "transient", "divider-sweep",
        "doubler-sweep", "freq-response", "localize",      "calibrate", "figure"};
    return names;
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"4", "9", "10", "11", "12", "1c"};
    return ids;
}

CommandOutput run_command(const CommandRequest& request) {
    Context ctx(request);
    const std::string& n = request.name;
    spdlog::debug("running {}{}", n, n == "figure" ? " " + request.figure : "");
    if (n == "dispersion") {
        cmd_dispersion(ctx);
    } else if (n == "resonances") {
        cmd_resonances(ctx);
    } else if (n == "standing-wave") {
        cmd_standing_wave(ctx);
    } else if (n == "bpf") {
        cmd_bpf(ctx);
    } else if (n == "transient") {
        cmd_transient(ctx);
    } else if (n == "divider-sweep") {
        run_divider_sweep(ctx, "divider_sweep");
    } else if (n == "doubler-sweep") {
        run_doubler_sweep(ctx, "doubler_sweep");
    } else if (n == "freq-response") {
        cmd_freq_response(ctx);
    } else if (n == "localize") {
        cmd_localize(ctx);
    } else if (n == "calibrate") {
        cmd_calibrate(ctx);
    } else if (n == "figure") {
        cmd_figure(ctx);
    } else {
        throw ConfigError("subcommand", "unknown subcommand '" + n + "'");
    }
    const std::string stem = n == "figure" ? "figure" + request.figure : n;
    ctx.out.summary_json = ctx.summary.dump(2) + "\n";
    ctx.out.files.push_back({stem + ".json", ctx.out.summary_json});
    return std::move(ctx.out);
}

std::string manifest_json(const CommandRequest& request, const CommandOutput& output, const RunInfo& info) {
    json m;
    m["manifest_version"] = 1;
    m["tool"] = kTool;
    m["version"] = RINGWAVE_VERSION;
    m["subcommand"] = request.name;
    if (request.name == "figure") m["figure"] = request.figure;
    m["args"] = info.args;
    m["config"] = json::parse(config_json(request.config));
    m["seed"] = request.config.localization.seed;
    m["threads"] = request.threads;
    m["wall_clock_s"] = info.wall_clock_s;
    json files = json::array();
    for (const OutputFile& f : output.files) files.push_back(f.name);
    m["outputs"] = files;
    return m.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& dir, const CommandOutput& output, const std::string& manifest) {
    std::filesystem::create_directories(dir);
    for (const OutputFile& f : output.files) write_atomic(dir / f.name, f.content);
    write_atomic(dir / "manifest.json", manifest);
}

}  // namespace ringwave
