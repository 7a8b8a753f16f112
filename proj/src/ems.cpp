#include "hessplit/ems.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include "hessplit/error.hpp"
#include "hessplit/numfmt.hpp"
#include "hessplit/transient.hpp"

namespace hessplit {

namespace {

constexpr double kSocFullToleranceKwh = 1e-9;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

double soc_after(double soc, double p_kw, double dt, double eff, double capacity) {
    const double energy = p_kw * dt / 3600.0;
    const double next = p_kw > 0.0 ? soc - energy / eff : soc - energy * eff;
    return std::clamp(next, 0.0, capacity);
}

}  // namespace

std::string_view to_string(EngageMode m) {
    return m == EngageMode::ThresholdOnly ? "ThresholdOnly" : "ThresholdOrDerivative";
}

EngageMode engage_mode_from_string(std::string_view s) {
    if (s == "ThresholdOnly" || s == "threshold-only") return EngageMode::ThresholdOnly;
    if (s == "ThresholdOrDerivative" || s == "threshold-or-derivative") return EngageMode::ThresholdOrDerivative;
    throw Error(ErrorCode::InvalidConfig, "unknown sc_engage_mode '" + std::string(s) + "'");
}

std::string_view to_string(UpsLimit l) {
    switch (l) {
    case UpsLimit::None: return "None";
    case UpsLimit::Power: return "Power";
    case UpsLimit::Energy: return "Energy";
    }
    return "None";
}

void validate(const EmsConfig& cfg) {
    require(cfg.sc_threshold > 0.0 && cfg.sc_threshold < 1.0, "sc_threshold must lie in (0, 1)");
    require(cfg.derivative_threshold > 0.0 && cfg.derivative_threshold <= 1.0,
            "derivative_threshold must lie in (0, 1]");
    if (cfg.recharge_threshold) {
        require(*cfg.recharge_threshold >= 0.0 && *cfg.recharge_threshold < cfg.sc_threshold,
                "recharge_threshold must lie in [0, sc_threshold)");
    }
}

void validate(const DeviceParams& dev) {
    for (double v : {dev.vrfb_power_kw, dev.vrfb_energy_kwh, dev.vrfb_ramp_kw_per_s, dev.vrfb_recharge_kw,
                     dev.sc_power_kw, dev.sc_energy_kwh, dev.sc_recharge_kw}) {
        require(std::isfinite(v), "device limits must be finite");
    }
    require(dev.vrfb_power_kw > 0.0 && dev.vrfb_energy_kwh > 0.0 && dev.vrfb_ramp_kw_per_s > 0.0 &&
                dev.vrfb_recharge_kw > 0.0,
            "VRFB power, energy, ramp and recharge power must be positive");
    require(dev.sc_power_kw > 0.0 && dev.sc_energy_kwh > 0.0 && dev.sc_recharge_kw > 0.0,
            "SC power, energy and recharge power must be positive");
    require(dev.vrfb_initial_soc >= 0.0 && dev.vrfb_initial_soc <= 1.0 && dev.sc_initial_soc >= 0.0 &&
                dev.sc_initial_soc <= 1.0,
            "initial SoC fractions must lie in [0, 1]");
    require(dev.vrfb_efficiency > 0.0 && dev.vrfb_efficiency <= 1.0 && dev.sc_efficiency > 0.0 &&
                dev.sc_efficiency <= 1.0,
            "efficiencies must lie in (0, 1]");
}

FlagSeries compute_flags(const NormalizedProfile& np, const EmsConfig& cfg) {
    FlagSeries f;
    f.flag_sc.reserve(np.size());
    f.flag_vrfb.reserve(np.size());
    for (double v : np.pu) {
        f.flag_sc.push_back(v > cfg.sc_threshold);
        f.flag_vrfb.push_back(v <= cfg.sc_threshold);
    }
    return f;
}

double resolve_recharge_threshold(const NormalizedProfile& np, const EmsConfig& cfg) {
    if (cfg.recharge_threshold) return *cfg.recharge_threshold;
    if (np.size() < kDefaultLoadBins) {
        throw Error(ErrorCode::InvalidConfig, "recharge_threshold must be set for profiles shorter than " +
                                                  std::to_string(kDefaultLoadBins) + " samples");
    }
    const auto base = base_load_estimate(np, kDefaultLoadBins, cfg.sc_threshold);
    // Degenerate: nothing below the SC band, so there is no base load to recharge under.
    return base.degenerate ? 0.0 : base.value_pu;
}

DispatchResult dispatch(const NormalizedProfile& np, const EmsConfig& cfg, const DeviceParams& dev) {
    validate(cfg);
    validate(dev);
    if (!validate_resolution(np.dt).sc_suitable) {
        throw Error(ErrorCode::IncompatibleResolution,
                    "SC dispatch needs dt <= 10 s, profile has " + format_double(np.dt) + " s");
    }
    if (np.size() < 2) throw Error(ErrorCode::TooFewSamples, "dispatch needs at least 2 samples");

    DispatchResult result;
    const double rt = resolve_recharge_threshold(np, cfg);
    result.recharge_threshold = rt;

    const double p_max = np.base_power_kw;
    const double dt = np.dt;
    const double sc_threshold_kw = cfg.sc_threshold * p_max;
    const double recharge_kw = rt * p_max;
    const double ramp_step = dev.vrfb_ramp_kw_per_s * dt;
    const bool use_derivative = cfg.sc_engage_mode == EngageMode::ThresholdOrDerivative;
    const auto deriv = derivative(np);

    double soc_sc = dev.sc_energy_kwh * dev.sc_initial_soc;
    double soc_vrfb = dev.vrfb_energy_kwh * dev.vrfb_initial_soc;
    double prev_vrfb = 0.0;

    double load_energy = 0.0, sc_energy = 0.0, vrfb_energy = 0.0;
    double load_peak = 0.0, grid_peak = -std::numeric_limits<double>::infinity();
    std::size_t engaged_count = 0;

    result.steps.reserve(np.size());
    for (std::size_t t = 0; t < np.size(); ++t) {
        DispatchStep s;
        s.t = np.t0 + static_cast<double>(t) * dt;
        const double pu = np.pu[t];
        const double load = pu * p_max;
        s.p_load_kw = load;
        s.flag_sc = pu > cfg.sc_threshold;
        const double d = t + 1 < np.size() ? deriv.normalized[t] : 0.0;
        s.engaged_sc = s.flag_sc || (use_derivative && std::abs(d) > cfg.derivative_threshold);

        double p_sc = 0.0;
        if (s.engaged_sc) {
            const double excess = load - sc_threshold_kw;
            if (excess > 0.0) {
                const double sc_available = soc_sc * dev.sc_efficiency * 3600.0 / dt;
                p_sc = std::min({excess, dev.sc_power_kw, sc_available});
            }
        }

        double vrfb_target = 0.0;
        if (pu < rt) {
            const bool sc_full = soc_sc >= dev.sc_energy_kwh - kSocFullToleranceKwh;
            if (!sc_full) {
                const double headroom = (dev.sc_energy_kwh - soc_sc) / dev.sc_efficiency * 3600.0 / dt;
                p_sc = -std::min({dev.sc_recharge_kw, dev.sc_power_kw, headroom});
            } else {
                vrfb_target = -std::min(dev.vrfb_recharge_kw, dev.vrfb_power_kw);
            }
        } else {
            vrfb_target = std::max(load - p_sc - recharge_kw, 0.0);
        }

        double p_vrfb = std::clamp(vrfb_target, prev_vrfb - ramp_step, prev_vrfb + ramp_step);
        p_vrfb = std::clamp(p_vrfb, -dev.vrfb_power_kw, dev.vrfb_power_kw);
        const double discharge_cap =
            std::min(soc_vrfb * dev.vrfb_efficiency * 3600.0 / dt, std::max(load - std::max(p_sc, 0.0), 0.0));
        const double charge_cap = -((dev.vrfb_energy_kwh - soc_vrfb) / dev.vrfb_efficiency * 3600.0 / dt);
        p_vrfb = std::clamp(p_vrfb, std::min(charge_cap, 0.0), std::max(discharge_cap, 0.0));
        s.ramp_override = std::abs(p_vrfb - prev_vrfb) > ramp_step;

        s.p_sc_kw = p_sc;
        s.p_vrfb_kw = p_vrfb;
        s.p_grid_kw = load - p_sc - p_vrfb;

        soc_sc = soc_after(soc_sc, p_sc, dt, dev.sc_efficiency, dev.sc_energy_kwh);
        soc_vrfb = soc_after(soc_vrfb, p_vrfb, dt, dev.vrfb_efficiency, dev.vrfb_energy_kwh);
        s.soc_sc_kwh = soc_sc;
        s.soc_vrfb_kwh = soc_vrfb;
        prev_vrfb = p_vrfb;

        load_energy += load;
        sc_energy += std::max(p_sc, 0.0);
        vrfb_energy += std::max(p_vrfb, 0.0);
        load_peak = std::max(load_peak, load);
        grid_peak = std::max(grid_peak, s.p_grid_kw);
        engaged_count += s.engaged_sc ? 1 : 0;
        result.steps.push_back(s);
    }

    auto& u = result.summary;
    u.sc_engaged_fraction = static_cast<double>(engaged_count) / static_cast<double>(np.size());
    u.sc_energy_share = load_energy > 0.0 ? sc_energy / load_energy : 0.0;
    u.vrfb_energy_share = load_energy > 0.0 ? vrfb_energy / load_energy : 0.0;
    u.grid_peak_kw = grid_peak;
    u.grid_peak_reduction_fraction = load_peak > 0.0 ? (load_peak - grid_peak) / load_peak : 0.0;
    return result;
}

std::vector<SweepRow> threshold_sweep(const NormalizedProfile& np, std::span<const double> thresholds,
                                      const EmsConfig& tmpl, const DeviceParams& dev) {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0 && thresholds[i] < 1.0)) {
            throw Error(ErrorCode::InvalidRange, "sweep thresholds must lie in (0, 1)");
        }
        if (i > 0 && thresholds[i] < thresholds[i - 1]) {
            throw Error(ErrorCode::InvalidRange, "sweep thresholds must be sorted ascending");
        }
    }
    std::vector<std::future<UtilizationStats>> jobs;
    jobs.reserve(thresholds.size());
    for (double th : thresholds) {
        EmsConfig cfg = tmpl;
        cfg.sc_threshold = th;
        jobs.push_back(std::async(std::launch::async, [&np, cfg, &dev] { return dispatch(np, cfg, dev).summary; }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i) rows.push_back({thresholds[i], jobs[i].get()});
    return rows;
}

UpsScenario make_ups_scenario(const LoadProfile& profile, double outage_start_s, double duration_s,
                              const DeviceParams& dev) {
    validate(dev);
    if (!validate_resolution(profile).ups_usable) {
        throw Error(ErrorCode::ResolutionTooCoarse,
                    "UPS scenarios need dt < 30 s, profile has " + format_double(profile.dt()) + " s");
    }
    if (!(outage_start_s >= 0.0) || !(duration_s > 0.0) ||
        outage_start_s + duration_s > profile.span_seconds() * (1.0 + 1e-12)) {
        throw Error(ErrorCode::WindowOutOfRange, "outage [" + format_double(outage_start_s) + ", " +
                                                     format_double(outage_start_s + duration_s) +
                                                     ") s lies outside the profile span of " +
                                                     format_double(profile.span_seconds()) + " s");
    }
    const double dt = profile.dt();
    const auto first = static_cast<std::size_t>(std::ceil(outage_start_s / dt - 1e-9));
    const auto end = std::min(profile.size(),
                              static_cast<std::size_t>(std::ceil((outage_start_s + duration_s) / dt - 1e-9)));
    if (end <= first) throw Error(ErrorCode::WindowOutOfRange, "outage window contains no samples");

    const auto samples = profile.samples();
    std::vector<double> demand(samples.size(), 0.0);
    double peak = 0.0, sum = 0.0;
    for (std::size_t i = first; i < end; ++i) {
        demand[i] = samples[i];
        peak = std::max(peak, samples[i]);
        sum += samples[i];
    }

    UpsFeasibility f;
    f.max_power_kw = peak;
    f.energy_kwh = sum * dt / 3600.0;
    f.available_power_kw = dev.vrfb_power_kw + dev.sc_power_kw;
    f.available_energy_kwh = dev.vrfb_energy_kwh * dev.vrfb_initial_soc + dev.sc_energy_kwh * dev.sc_initial_soc;
    if (f.max_power_kw > f.available_power_kw) {
        f.limiting = UpsLimit::Power;
    } else if (f.energy_kwh > f.available_energy_kwh) {
        f.limiting = UpsLimit::Energy;
    }
    f.feasible = f.limiting == UpsLimit::None;

    return UpsScenario{LoadProfile(profile.site_id() + ":ups", profile.t0(), dt, std::move(demand),
                                   Category::UPS),
                       f, first, end};
}

void write_dispatch_trace_csv(std::ostream& out, const DispatchResult& r) {
    out << "t,p_load_kw,p_grid_kw,p_sc_kw,p_vrfb_kw,soc_sc_kwh,soc_vrfb_kwh,flag_sc\n";
    for (const auto& s : r.steps) {
        out << format_double(s.t) << ',' << format_double(s.p_load_kw) << ',' << format_double(s.p_grid_kw) << ','
            << format_double(s.p_sc_kw) << ',' << format_double(s.p_vrfb_kw) << ',' << format_double(s.soc_sc_kwh)
            << ',' << format_double(s.soc_vrfb_kwh) << ',' << (s.flag_sc ? 1 : 0) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "threshold,sc_engaged_fraction,sc_energy_share,vrfb_energy_share,grid_peak_kw\n";
    for (const auto& r : rows) {
        out << format_double(r.threshold) << ',' << format_double(r.stats.sc_engaged_fraction) << ','
            << format_double(r.stats.sc_energy_share) << ',' << format_double(r.stats.vrfb_energy_share) << ','
            << format_double(r.stats.grid_peak_kw) << '\n';
    }
}

}  // namespace hessplit
