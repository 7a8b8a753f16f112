#include "hessplit/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hessplit/error.hpp"
#include "hessplit/numfmt.hpp"
#include "hessplit/report.hpp"

namespace hessplit {

namespace {

using nlohmann::json;

struct InputOptions {
    std::string path;
    std::string site_id;
    std::string category_hint;
    bool clamp_negative = false;
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool required = true) {
    auto* opt = cmd->add_option("input", in.path, "profile CSV with header timestamp,power_kw");
    if (required) opt->required();
    cmd->add_option("--site-id", in.site_id, "site identifier (default: file stem)");
    cmd->add_option("--category-hint", in.category_hint, "PS, WDG, UPS, VI or Unknown");
    cmd->add_flag("--clamp-negative", in.clamp_negative, "replace negative power with 0 instead of failing");
}

LoadProfile read_input(const InputOptions& in) {
    CsvSpec spec;
    spec.site_id = in.site_id.empty() ? std::filesystem::path(in.path).stem().string() : in.site_id;
    if (!in.category_hint.empty()) spec.category_hint = category_from_string(in.category_hint);
    spec.clamp_negative = in.clamp_negative;
    return parse_profile_file(in.path, spec);
}

RunConfig resolve_config(const std::string& explicit_path) {
    if (!explicit_path.empty()) return load_run_config(explicit_path);
    if (const char* env = std::getenv("HESSPLIT_CONFIG"); env != nullptr && *env != '\0') {
        return load_run_config(env);
    }
    return {};
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
    return f;
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << j.dump(2) << '\n';
    } else {
        auto f = open_output(path);
        f << j.dump(2) << '\n';
    }
}

void check_dispatch_invariants(const DispatchResult& r, const DeviceParams& dev) {
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
        const auto& s = r.steps[t];
        const double residual = s.p_load_kw - (s.p_grid_kw + s.p_sc_kw + s.p_vrfb_kw);
        if (!(std::abs(residual) <= 1e-9 * std::max(1.0, s.p_load_kw))) {
            throw Error(ErrorCode::InvariantViolation, "power balance broken at step " + std::to_string(t));
        }
        if (s.soc_sc_kwh < 0.0 || s.soc_sc_kwh > dev.sc_energy_kwh || s.soc_vrfb_kwh < 0.0 ||
            s.soc_vrfb_kwh > dev.vrfb_energy_kwh) {
            throw Error(ErrorCode::InvariantViolation, "SoC out of bounds at step " + std::to_string(t));
        }
    }
}

struct RangeSpec {
    double lo, hi, step;
};

RangeSpec parse_range(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) throw Error(ErrorCode::InvalidRange, "range must be lo:hi:step, got '" + text + "'");
    auto lo = parse_double(std::string_view(text).substr(0, a));
    auto hi = parse_double(std::string_view(text).substr(a + 1, b - a - 1));
    auto step = parse_double(std::string_view(text).substr(b + 1));
    if (!lo || !hi || !step) throw Error(ErrorCode::InvalidRange, "range must be lo:hi:step, got '" + text + "'");
    if (!(*lo > 0.0 && *lo <= *hi && *hi < 1.0 && *step > 0.0)) {
        throw Error(ErrorCode::InvalidRange, "range needs 0 < lo <= hi < 1 and step > 0, got '" + text + "'");
    }
    return {*lo, *hi, *step};
}

std::vector<double> expand_range(const RangeSpec& r) {
    const auto count = static_cast<std::size_t>(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        // Snap to 12 decimals so 0.5 + 3 * 0.1 prints as 0.8.
        out.push_back(std::round((r.lo + static_cast<double>(k) * r.step) * 1e12) / 1e12);
    }
    return out;
}

int cmd_analyze(const InputOptions& in, const std::string& manifest, const AnalysisOptions& opts,
                const std::string& out_path, const std::string& load_csv, const std::string& deriv_csv,
                std::ostream& out, std::ostream& err) {
    if (!manifest.empty()) {
        const auto entries = load_catalog(manifest);
        std::vector<std::future<AnalysisReport>> jobs;
        for (const auto& e : entries) {
            jobs.push_back(std::async(std::launch::async, [e, &opts] {
                CsvSpec spec;
                spec.site_id = e.site_id;
                spec.category_hint = e.category_hint;
                return analyze_profile(parse_profile_file(e.path, spec), opts);
            }));
        }
        json reports = json::array();
        for (auto& j : jobs) {
            auto r = j.get();
            for (const auto& w : r.warnings) err << "warning: " << r.site_id << ": " << w << '\n';
            reports.push_back(r);
        }
        emit_json(reports, out_path, out);
        return kExitOk;
    }
    if (in.path.empty()) throw Error(ErrorCode::InvalidArgument, "analyze needs an input CSV or --manifest");

    const auto report = analyze_profile(read_input(in), opts);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    if (!load_csv.empty()) {
        auto f = open_output(load_csv);
        write_histogram_csv(f, report.load_histogram);
    }
    if (!deriv_csv.empty() && report.derivative_histogram) {
        auto f = open_output(deriv_csv);
        write_histogram_csv(f, *report.derivative_histogram);
    }
    emit_json(report, out_path, out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid storage load-profile classification and SC/VRFB dispatch simulation", "hessplit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "classify a load profile and write a JSON report");
    InputOptions analyze_in;
    AnalysisOptions analyze_opts;
    std::string analyze_out, manifest, load_csv, deriv_csv;
    add_input_options(analyze, analyze_in, false);
    analyze->add_option("--manifest", manifest, "JSON catalog of profiles to analyze in parallel");
    analyze->add_option("--bins", analyze_opts.load_bins, "load histogram bins")->check(CLI::Range(10, 100000));
    analyze->add_option("--deriv-bins", analyze_opts.derivative_bins, "derivative histogram bins")
        ->check(CLI::Range(3, 100001));
    analyze->add_option("--tail-level", analyze_opts.tail_level, "normalized derivative tail level")
        ->check(CLI::Range(0.0, 1.0));
    analyze->add_option("--out,-o", analyze_out, "report path (default stdout)");
    analyze->add_option("--load-hist-csv", load_csv, "write the load histogram as CSV");
    analyze->add_option("--deriv-hist-csv", deriv_csv, "write the derivative histogram as CSV");

    // dispatch
    auto* dispatch_cmd = app.add_subcommand("dispatch", "simulate the SC/VRFB/grid power split");
    InputOptions dispatch_in;
    std::string dispatch_config, trace_path, summary_path;
    add_input_options(dispatch_cmd, dispatch_in);
    dispatch_cmd->add_option("--config,-c", dispatch_config, "JSON with EmsConfig and DeviceParams fields");
    dispatch_cmd->add_option("--trace", trace_path, "per-step trace CSV")->required();
    dispatch_cmd->add_option("--summary", summary_path, "summary JSON path (default stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "dispatch once per SC threshold");
    InputOptions sweep_in;
    std::string sweep_config, range_text, sweep_out, sweep_mode;
    add_input_options(sweep_cmd, sweep_in);
    sweep_cmd->add_option("--range", range_text, "thresholds lo:hi:step")->required();
    sweep_cmd->add_option("--config,-c", sweep_config, "JSON with EmsConfig and DeviceParams fields");
    sweep_cmd->add_option("--mode", sweep_mode, "threshold-only or threshold-or-derivative");
    sweep_cmd->add_option("--out,-o", sweep_out, "sweep CSV path (default stdout)");

    // ups
    auto* ups_cmd = app.add_subcommand("ups", "check an outage window against storage power and energy");
    InputOptions ups_in;
    std::string ups_config, ups_out, demand_out;
    double outage_start = 0.0, outage_duration = 0.0;
    std::optional<double> vrfb_power, vrfb_energy, sc_power, sc_energy, soc;
    add_input_options(ups_cmd, ups_in);
    ups_cmd->add_option("--start", outage_start, "outage start, seconds from the first sample")->required();
    ups_cmd->add_option("--duration", outage_duration, "outage duration in seconds")->required();
    ups_cmd->add_option("--config,-c", ups_config, "JSON with DeviceParams fields");
    ups_cmd->add_option("--vrfb-power", vrfb_power, "VRFB power limit, kW");
    ups_cmd->add_option("--vrfb-energy", vrfb_energy, "VRFB capacity, kWh");
    ups_cmd->add_option("--sc-power", sc_power, "SC power limit, kW");
    ups_cmd->add_option("--sc-energy", sc_energy, "SC capacity, kWh");
    ups_cmd->add_option("--soc", soc, "initial SoC fraction for both devices");
    ups_cmd->add_option("--demand-out", demand_out, "write the storage demand profile CSV");
    ups_cmd->add_option("--out,-o", ups_out, "feasibility JSON path (default stdout)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic profile");
    SynthSpec spec;
    std::string kind_text, synth_out, events_out;
    synth_cmd->add_option("kind", kind_text, "municipal, machine or ev-park")->required();
    synth_cmd->add_option("--days", spec.days, "days to generate")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", spec.seed, "RNG seed");
    synth_cmd->add_option("--dt", spec.dt, "sample interval in seconds (<= 10)");
    synth_cmd->add_option("--t0", spec.t0, "epoch seconds of the first sample");
    synth_cmd->add_option("--peak-kw", spec.peak_kw, "kW of the realized maximum (municipal, machine)");
    synth_cmd->add_option("--site-id", spec.site_id, "site identifier");
    synth_cmd->add_option("--base-pu", spec.municipal.base_pu, "municipal base plateau");
    synth_cmd->add_option("--peak-pu", spec.municipal.peak_pu, "municipal evening peak");
    synth_cmd->add_option("--noise-sigma", spec.municipal.noise_sigma, "municipal noise sigma");
    synth_cmd->add_option("--step-events", spec.municipal.step_events, "municipal isolated steps");
    synth_cmd->add_option("--duty-cycle", spec.machine.duty_cycle, "machine off fraction");
    synth_cmd->add_option("--on-level", spec.machine.on_level, "machine running level");
    synth_cmd->add_option("--spike-level", spec.machine.switch_spike_level, "machine switch-on spike level");
    synth_cmd->add_option("--spike-duration", spec.machine.spike_duration_s, "machine spike duration, s");
    synth_cmd->add_option("--arrival-rate", spec.ev_park.arrival_rate_per_h, "EV arrivals per hour");
    synth_cmd->add_option("--charge-power", spec.ev_park.charge_power_kw, "EV charging power, kW");
    synth_cmd->add_option("--mean-session", spec.ev_park.mean_session_s, "EV mean full-power hold, s");
    synth_cmd->add_option("--taper-duration", spec.ev_park.taper_duration_s, "EV taper duration, s");
    synth_cmd->add_option("--out,-o", synth_out, "profile CSV path")->required();
    synth_cmd->add_option("--events", events_out, "event log JSON path (default <out>.events.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*analyze) {
            return cmd_analyze(analyze_in, manifest, analyze_opts, analyze_out, load_csv, deriv_csv, out, err);
        }
        if (*dispatch_cmd) {
            const auto cfg = resolve_config(dispatch_config);
            const auto profile = read_input(dispatch_in);
            const auto np = normalize(profile);
            const auto result = dispatch(np, cfg.ems, cfg.devices);
            check_dispatch_invariants(result, cfg.devices);
            {
                auto f = open_output(trace_path);
                write_dispatch_trace_csv(f, result);
            }
            RunConfig echo = cfg;
            echo.ems.recharge_threshold = result.recharge_threshold;
            json summary{{"site_id", profile.site_id()},
                         {"tool_version", kToolVersion},
                         {"input_hash", profile_fingerprint(profile)},
                         {"base_power_kw", np.base_power_kw},
                         {"steps", result.steps.size()},
                         {"config", echo},
                         {"summary", result.summary}};
            emit_json(summary, summary_path, out);
            return kExitOk;
        }
        if (*sweep_cmd) {
            auto cfg = resolve_config(sweep_config);
            if (!sweep_mode.empty()) cfg.ems.sc_engage_mode = engage_mode_from_string(sweep_mode);
            const auto thresholds = expand_range(parse_range(range_text));
            const auto np = normalize(read_input(sweep_in));
            const auto rows = threshold_sweep(np, thresholds, cfg.ems, cfg.devices);
            if (sweep_out.empty() || sweep_out == "-") {
                write_sweep_csv(out, rows);
            } else {
                auto f = open_output(sweep_out);
                write_sweep_csv(f, rows);
            }
            return kExitOk;
        }
        if (*ups_cmd) {
            auto dev = resolve_config(ups_config).devices;
            if (vrfb_power) dev.vrfb_power_kw = *vrfb_power;
            if (vrfb_energy) dev.vrfb_energy_kwh = *vrfb_energy;
            if (sc_power) dev.sc_power_kw = *sc_power;
            if (sc_energy) dev.sc_energy_kwh = *sc_energy;
            if (soc) dev.vrfb_initial_soc = dev.sc_initial_soc = *soc;
            const auto profile = read_input(ups_in);
            const auto scenario = make_ups_scenario(profile, outage_start, outage_duration, dev);
            if (!demand_out.empty()) {
                auto f = open_output(demand_out);
                write_profile_csv(f, scenario.hess_demand);
            }
            json result{{"site_id", profile.site_id()},
                        {"input_hash", profile_fingerprint(profile)},
                        {"outage_start_s", outage_start},
                        {"outage_duration_s", outage_duration},
                        {"first_sample", scenario.first_sample},
                        {"end_sample", scenario.end_sample},
                        {"feasibility", scenario.feasibility}};
            emit_json(result, ups_out, out);
            return kExitOk;
        }
        if (*synth_cmd) {
            spec.kind = synth_kind_from_string(kind_text);
            const auto generated = generate(spec);
            {
                auto f = open_output(synth_out);
                write_profile_csv(f, generated.profile);
            }
            json log{{"kind", to_string(spec.kind)},
                     {"seed", spec.seed},
                     {"days", spec.days},
                     {"dt", spec.dt},
                     {"samples", generated.profile.size()},
                     {"events", generated.events}};
            emit_json(log, events_out.empty() ? synth_out + ".events.json" : events_out, out);
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::InvariantViolation ? kExitInternalError : kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
    return kExitInputError;
}

}  // namespace hessplit
