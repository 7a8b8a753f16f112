#include "hessplit/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hessplit/error.hpp"

namespace hessplit {

using nlohmann::json;

AnalysisReport analyze_profile(const LoadProfile& profile, const AnalysisOptions& options) {
    AnalysisReport r;
    r.site_id = profile.site_id();
    r.input_hash = profile_fingerprint(profile);
    r.sample_count = profile.size();
    r.dt = profile.dt();
    r.config = options;
    r.resolution = validate_resolution(profile);

    const auto np = normalize(profile);
    r.base_power_kw = np.base_power_kw;
    r.metrics = compute_metrics(np, options.load_bins);
    r.load_histogram = histogram(np.pu, {options.load_bins, std::pair{0.0, 1.0}, false});

    if (r.resolution.vrfb_only) {
        r.warnings.push_back("vrfb_only: " + r.resolution.reason + "; SC analysis skipped");
    } else {
        const auto d = derivative(np);
        r.derivative_histogram = histogram(d.normalized, {options.derivative_bins, std::nullopt, true});
        r.symmetry = symmetry_report(*r.derivative_histogram, d.normalized, options.tail_level);
    }
    if (r.metrics.base_load_degenerate) {
        r.warnings.push_back("DegenerateBaseLoad: no samples below the SC band; base load reported as 1.0");
    }
    r.classification =
        classify(r.metrics, r.symmetry, r.load_histogram, profile.category_hint(), options.classifier);
    return r;
}

std::string profile_fingerprint(const LoadProfile& profile) {
    std::ostringstream csv;
    write_profile_csv(csv, profile);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : csv.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    RunConfig c;
    auto& e = c.ems;
    auto& d = c.devices;
    const std::pair<const char*, double*> numbers[] = {
        {"sc_threshold", &e.sc_threshold},
        {"derivative_threshold", &e.derivative_threshold},
        {"vrfb_power_kw", &d.vrfb_power_kw},
        {"vrfb_energy_kwh", &d.vrfb_energy_kwh},
        {"vrfb_ramp_kw_per_s", &d.vrfb_ramp_kw_per_s},
        {"vrfb_recharge_kw", &d.vrfb_recharge_kw},
        {"vrfb_initial_soc", &d.vrfb_initial_soc},
        {"vrfb_efficiency", &d.vrfb_efficiency},
        {"sc_power_kw", &d.sc_power_kw},
        {"sc_energy_kwh", &d.sc_energy_kwh},
        {"sc_recharge_kw", &d.sc_recharge_kw},
        {"sc_initial_soc", &d.sc_initial_soc},
        {"sc_efficiency", &d.sc_efficiency},
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "recharge_threshold") {
            if (value.is_null()) {
                e.recharge_threshold.reset();
            } else if (value.is_number()) {
                e.recharge_threshold = value.get<double>();
            } else {
                throw Error(ErrorCode::InvalidConfig, "recharge_threshold must be a number or null");
            }
            continue;
        }
        if (key == "sc_engage_mode") {
            if (!value.is_string()) throw Error(ErrorCode::InvalidConfig, "sc_engage_mode must be a string");
            e.sc_engage_mode = engage_mode_from_string(value.get<std::string>());
            continue;
        }
        bool known = false;
        for (const auto& [name, slot] : numbers) {
            if (key == name) {
                if (!value.is_number()) throw Error(ErrorCode::InvalidConfig, key + " must be a number");
                *slot = value.get<double>();
                known = true;
                break;
            }
        }
        if (!known) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
    validate(c.ems);
    validate(c.devices);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::InvalidConfig, "config " + path.string() + ": " + ex.what());
    }
    return run_config_from_json(j);
}

void to_json(json& j, const ResolutionVerdict& v) {
    j = json{{"sc_suitable", v.sc_suitable}, {"ups_usable", v.ups_usable}, {"vrfb_only", v.vrfb_only},
             {"reason", v.reason}};
}

void from_json(const json& j, ResolutionVerdict& v) {
    j.at("sc_suitable").get_to(v.sc_suitable);
    j.at("ups_usable").get_to(v.ups_usable);
    j.at("vrfb_only").get_to(v.vrfb_only);
    j.at("reason").get_to(v.reason);
}

void to_json(json& j, const ProfileMetrics& m) {
    j = json{{"sample_count", m.sample_count},
             {"load_factor", m.load_factor},
             {"base_load_pu", m.base_load_pu},
             {"base_load_degenerate", m.base_load_degenerate},
             {"peak_count", m.peak_count},
             {"mean_peak_duration_s", m.mean_peak_duration_s},
             {"energy_above_base_pu_h", m.energy_above_base_pu_h}};
}

void from_json(const json& j, ProfileMetrics& m) {
    j.at("sample_count").get_to(m.sample_count);
    j.at("load_factor").get_to(m.load_factor);
    j.at("base_load_pu").get_to(m.base_load_pu);
    j.at("base_load_degenerate").get_to(m.base_load_degenerate);
    j.at("peak_count").get_to(m.peak_count);
    j.at("mean_peak_duration_s").get_to(m.mean_peak_duration_s);
    j.at("energy_above_base_pu_h").get_to(m.energy_above_base_pu_h);
}

void to_json(json& j, const Histogram& h) {
    j = json{{"edges", h.edges}, {"counts", h.counts}, {"total", h.total}, {"symmetric", h.symmetric}};
}

void from_json(const json& j, Histogram& h) {
    j.at("edges").get_to(h.edges);
    j.at("counts").get_to(h.counts);
    j.at("total").get_to(h.total);
    j.at("symmetric").get_to(h.symmetric);
}

void to_json(json& j, const SymmetryReport& s) {
    j = json{{"sample_count", s.sample_count},
             {"symmetry_index", s.symmetry_index},
             {"tail_level", s.tail_level},
             {"positive_tail_mass", s.positive_tail_mass},
             {"negative_tail_mass", s.negative_tail_mass},
             {"probe_level", s.probe_level},
             {"probe_positive_tail_mass", s.probe_positive_tail_mass},
             {"probe_negative_tail_mass", s.probe_negative_tail_mass}};
}

void from_json(const json& j, SymmetryReport& s) {
    j.at("sample_count").get_to(s.sample_count);
    j.at("symmetry_index").get_to(s.symmetry_index);
    j.at("tail_level").get_to(s.tail_level);
    j.at("positive_tail_mass").get_to(s.positive_tail_mass);
    j.at("negative_tail_mass").get_to(s.negative_tail_mass);
    j.at("probe_level").get_to(s.probe_level);
    j.at("probe_positive_tail_mass").get_to(s.probe_positive_tail_mass);
    j.at("probe_negative_tail_mass").get_to(s.probe_negative_tail_mass);
}

void to_json(json& j, const ClassificationReport& c) {
    j = json{{"category", to_string(c.category)},
             {"hess_compliant", c.hess_compliant},
             {"sc_relevance", to_string(c.sc_relevance)},
             {"vrfb_relevance", to_string(c.vrfb_relevance)},
             {"rationale", c.rationale}};
}

void from_json(const json& j, ClassificationReport& c) {
    c.category = category_from_string(j.at("category").get<std::string>());
    j.at("hess_compliant").get_to(c.hess_compliant);
    c.sc_relevance = relevance_from_string(j.at("sc_relevance").get<std::string>());
    c.vrfb_relevance = relevance_from_string(j.at("vrfb_relevance").get<std::string>());
    j.at("rationale").get_to(c.rationale);
}

void to_json(json& j, const ClassifierConfig& c) {
    j = json{{"symmetric_index_min", c.symmetric_index_min}, {"isolated_tail_max", c.isolated_tail_max},
             {"asymmetry_ratio", c.asymmetry_ratio},         {"bimodal_mass_min", c.bimodal_mass_min},
             {"switching_tail_min", c.switching_tail_min},   {"wdg_base_load_min", c.wdg_base_load_min}};
}

void from_json(const json& j, ClassifierConfig& c) {
    j.at("symmetric_index_min").get_to(c.symmetric_index_min);
    j.at("isolated_tail_max").get_to(c.isolated_tail_max);
    j.at("asymmetry_ratio").get_to(c.asymmetry_ratio);
    j.at("bimodal_mass_min").get_to(c.bimodal_mass_min);
    j.at("switching_tail_min").get_to(c.switching_tail_min);
    j.at("wdg_base_load_min").get_to(c.wdg_base_load_min);
}

void to_json(json& j, const AnalysisOptions& o) {
    j = json{{"load_bins", o.load_bins},
             {"derivative_bins", o.derivative_bins},
             {"tail_level", o.tail_level},
             {"classifier", o.classifier}};
}

void from_json(const json& j, AnalysisOptions& o) {
    j.at("load_bins").get_to(o.load_bins);
    j.at("derivative_bins").get_to(o.derivative_bins);
    j.at("tail_level").get_to(o.tail_level);
    j.at("classifier").get_to(o.classifier);
}

void to_json(json& j, const AnalysisReport& r) {
    j = json{{"site_id", r.site_id},
             {"tool_version", r.tool_version},
             {"input_hash", r.input_hash},
             {"sample_count", r.sample_count},
             {"dt", r.dt},
             {"base_power_kw", r.base_power_kw},
             {"resolution", r.resolution},
             {"metrics", r.metrics},
             {"load_histogram", r.load_histogram},
             {"derivative_histogram", r.derivative_histogram ? json(*r.derivative_histogram) : json(nullptr)},
             {"symmetry", r.symmetry ? json(*r.symmetry) : json(nullptr)},
             {"classification", r.classification},
             {"config", r.config},
             {"warnings", r.warnings}};
}

void from_json(const json& j, AnalysisReport& r) {
    j.at("site_id").get_to(r.site_id);
    j.at("tool_version").get_to(r.tool_version);
    j.at("input_hash").get_to(r.input_hash);
    j.at("sample_count").get_to(r.sample_count);
    j.at("dt").get_to(r.dt);
    j.at("base_power_kw").get_to(r.base_power_kw);
    j.at("resolution").get_to(r.resolution);
    j.at("metrics").get_to(r.metrics);
    j.at("load_histogram").get_to(r.load_histogram);
    if (j.at("derivative_histogram").is_null()) {
        r.derivative_histogram.reset();
    } else {
        r.derivative_histogram = j.at("derivative_histogram").get<Histogram>();
    }
    if (j.at("symmetry").is_null()) {
        r.symmetry.reset();
    } else {
        r.symmetry = j.at("symmetry").get<SymmetryReport>();
    }
    j.at("classification").get_to(r.classification);
    j.at("config").get_to(r.config);
    j.at("warnings").get_to(r.warnings);
}

void to_json(json& j, const RunConfig& c) {
    const auto& e = c.ems;
    const auto& d = c.devices;
    j = json{{"sc_threshold", e.sc_threshold},
             {"derivative_threshold", e.derivative_threshold},
             {"recharge_threshold", e.recharge_threshold ? json(*e.recharge_threshold) : json(nullptr)},
             {"sc_engage_mode", to_string(e.sc_engage_mode)},
             {"vrfb_power_kw", d.vrfb_power_kw},
             {"vrfb_energy_kwh", d.vrfb_energy_kwh},
             {"vrfb_ramp_kw_per_s", d.vrfb_ramp_kw_per_s},
             {"vrfb_recharge_kw", d.vrfb_recharge_kw},
             {"vrfb_initial_soc", d.vrfb_initial_soc},
             {"vrfb_efficiency", d.vrfb_efficiency},
             {"sc_power_kw", d.sc_power_kw},
             {"sc_energy_kwh", d.sc_energy_kwh},
             {"sc_recharge_kw", d.sc_recharge_kw},
             {"sc_initial_soc", d.sc_initial_soc},
             {"sc_efficiency", d.sc_efficiency}};
}

void to_json(json& j, const UtilizationStats& u) {
    j = json{{"sc_engaged_fraction", u.sc_engaged_fraction},
             {"sc_energy_share", u.sc_energy_share},
             {"vrfb_energy_share", u.vrfb_energy_share},
             {"grid_peak_kw", u.grid_peak_kw},
             {"grid_peak_reduction_fraction", u.grid_peak_reduction_fraction}};
}

void to_json(json& j, const UpsFeasibility& f) {
    j = json{{"feasible", f.feasible},
             {"limiting", to_string(f.limiting)},
             {"max_power_kw", f.max_power_kw},
             {"energy_kwh", f.energy_kwh},
             {"available_power_kw", f.available_power_kw},
             {"available_energy_kwh", f.available_energy_kwh}};
}

void to_json(json& j, const SynthEvent& e) {
    j = json{{"type", e.type}, {"start_s", e.start_s}, {"duration_s", e.duration_s}, {"level", e.level}};
    if (e.type == "session") j["taper_s"] = e.taper_s;
}

}  // namespace hessplit
