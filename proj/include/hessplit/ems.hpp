#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hessplit/ingest.hpp"
#include "hessplit/metrics.hpp"

namespace hessplit {

enum class EngageMode { ThresholdOnly, ThresholdOrDerivative };

std::string_view to_string(EngageMode m);
EngageMode engage_mode_from_string(std::string_view s);

struct EmsConfig {
    /// SC serves load above this fraction of P_max.
    double sc_threshold = 0.8;
    /// Normalized-derivative magnitude above which the SC engages in
    /// ThresholdOrDerivative mode.
    double derivative_threshold = 0.5;
    /// Below this per-unit load the devices recharge; the VRFB serves the
    /// band above it. Unset means "use the estimated base load".
    std::optional<double> recharge_threshold;
    EngageMode sc_engage_mode = EngageMode::ThresholdOrDerivative;

    bool operator==(const EmsConfig&) const = default;
};

/// Defaults size the VRFB like a 5 kW / 10 kWh lab demonstrator and the SC
/// for ~36 s at full power.
struct DeviceParams {
    double vrfb_power_kw = 5.0;
    double vrfb_energy_kwh = 10.0;
    double vrfb_ramp_kw_per_s = 2.5;
    double vrfb_recharge_kw = 2.5;
    double vrfb_initial_soc = 1.0;
    double vrfb_efficiency = 1.0;  ///< one-way, applied on charge and discharge

    double sc_power_kw = 5.0;
    double sc_energy_kwh = 0.05;
    double sc_recharge_kw = 2.5;
    double sc_initial_soc = 1.0;
    double sc_efficiency = 1.0;

    bool operator==(const DeviceParams&) const = default;
};

void validate(const EmsConfig& cfg);
void validate(const DeviceParams& dev);

struct FlagSeries {
    std::vector<bool> flag_sc;
    std::vector<bool> flag_vrfb;

    bool operator==(const FlagSeries&) const = default;
};

/// flag_sc[t] = pu[t] > sc_threshold, flag_vrfb[t] = pu[t] <= sc_threshold.
FlagSeries compute_flags(const NormalizedProfile& np, const EmsConfig& cfg);

/// One dispatch interval. Device powers are positive when discharging.
struct DispatchStep {
    double t = 0.0;
    double p_load_kw = 0.0;
    double p_grid_kw = 0.0;
    double p_sc_kw = 0.0;
    double p_vrfb_kw = 0.0;
    double soc_sc_kwh = 0.0;    ///< after this step
    double soc_vrfb_kwh = 0.0;  ///< after this step
    bool flag_sc = false;
    bool engaged_sc = false;
    /// The VRFB ramp limit yielded to its SoC or no-export bound this step.
    bool ramp_override = false;

    bool operator==(const DispatchStep&) const = default;
};

struct UtilizationStats {
    double sc_engaged_fraction = 0.0;
    double sc_energy_share = 0.0;    ///< SC discharge energy / load energy
    double vrfb_energy_share = 0.0;  ///< VRFB discharge energy / load energy
    double grid_peak_kw = 0.0;
    double grid_peak_reduction_fraction = 0.0;

    bool operator==(const UtilizationStats&) const = default;
};

struct DispatchResult {
    std::vector<DispatchStep> steps;
    UtilizationStats summary;
    double recharge_threshold = 0.0;  ///< the value actually used
};

/// Sequential SC / VRFB / grid power split with SoC accounting.
///
/// Per step: the SC engages on flag_sc (or, in ThresholdOrDerivative mode,
/// on |normalized derivative| above the derivative threshold) and serves the
/// load above sc_threshold * P_max within its power and SoC. The VRFB serves
/// what remains above recharge_threshold * P_max within power, ramp and SoC,
/// and never exports. The grid is the slack. While pu < recharge_threshold
/// the SC recharges first, then the VRFB.
DispatchResult dispatch(const NormalizedProfile& np, const EmsConfig& cfg, const DeviceParams& dev = {});

/// Resolves an unset recharge threshold to the base-load estimate.
double resolve_recharge_threshold(const NormalizedProfile& np, const EmsConfig& cfg);

struct SweepRow {
    double threshold = 0.0;
    UtilizationStats stats;

    bool operator==(const SweepRow&) const = default;
};

/// One dispatch per threshold, rows in input order. Rows are computed in parallel.
std::vector<SweepRow> threshold_sweep(const NormalizedProfile& np, std::span<const double> thresholds,
                                      const EmsConfig& tmpl, const DeviceParams& dev = {});

enum class UpsLimit { None, Power, Energy };

std::string_view to_string(UpsLimit l);

struct UpsFeasibility {
    bool feasible = false;
    UpsLimit limiting = UpsLimit::None;
    double max_power_kw = 0.0;
    double energy_kwh = 0.0;
    double available_power_kw = 0.0;
    double available_energy_kwh = 0.0;

    bool operator==(const UpsFeasibility&) const = default;
};

struct UpsScenario {
    LoadProfile hess_demand;
    UpsFeasibility feasibility;
    std::size_t first_sample = 0;
    std::size_t end_sample = 0;  ///< one past the last outage sample
};

/// Grid outage: demand on the storage is zero outside
/// [outage_start_s, outage_start_s + duration_s) and the full load inside.
/// Power is checked before energy, so limiting reports Power when both fail.
UpsScenario make_ups_scenario(const LoadProfile& profile, double outage_start_s, double duration_s,
                              const DeviceParams& dev = {});

void write_dispatch_trace_csv(std::ostream& out, const DispatchResult& r);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace hessplit
