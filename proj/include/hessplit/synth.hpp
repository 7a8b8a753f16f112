#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hessplit/ingest.hpp"

namespace hessplit {

enum class SynthKind { Municipal, Machine, EvPark };

std::string_view to_string(SynthKind k);
SynthKind synth_kind_from_string(std::string_view s);

/// Mixed residential district: a base plateau, an evening bump, slow
/// correlated noise and a few isolated load steps at night.
struct MunicipalParams {
    double base_pu = 0.5;
    double peak_pu = 1.0;
    double noise_sigma = 0.01;
    double noise_tau_s = 300.0;
    double peak_hour = 19.0;
    double peak_width_h = 8.0;
    int step_events = 3;
    double step_height_min = 0.18;
    double step_height_max = 0.25;
    double step_duration_min_s = 300.0;
    double step_duration_max_s = 1800.0;
};

/// Single machine cycling between off and on with a switch-on spike.
struct MachineParams {
    double duty_cycle = 0.5;  ///< fraction of each cycle spent off
    double on_level = 0.92;
    double switch_spike_level = 1.0;
    double spike_duration_s = 3.0;
    double cycle_min_s = 60.0;
    double cycle_max_s = 300.0;
    double noise_sigma = 0.005;
};

/// Charging park with Poisson arrivals. Each session starts at full power,
/// holds, then tapers linearly to zero.
struct EvParkParams {
    double arrival_rate_per_h = 2.0;
    double charge_power_kw = 22.0;
    double min_power_fraction = 0.5;  ///< per-vehicle power drawn from [fraction, 1] * charge_power_kw
    double mean_session_s = 1800.0;
    double taper_duration_s = 600.0;
    /// When non-empty, replaces the Poisson arrivals (seconds from start).
    std::vector<double> fixed_arrivals_s;
};

struct SynthSpec {
    SynthKind kind = SynthKind::Municipal;
    int days = 1;
    double dt = 1.0;
    std::uint64_t seed = 0;
    double t0 = 0.0;
    /// kW that the realized maximum maps to (municipal and machine only; EV
    /// profiles are emitted in native kW so the event log reconstructs them).
    double peak_kw = 100.0;
    std::string site_id;
    MunicipalParams municipal;
    MachineParams machine;
    EvParkParams ev_park;
};

struct SynthEvent {
    std::string type;       ///< "step", "on" or "session"
    double start_s = 0.0;   ///< seconds from t0, on the sample grid
    double duration_s = 0.0;
    double level = 0.0;     ///< step height (pu), on level (pu) or session power (kW)
    double taper_s = 0.0;   ///< sessions only

    bool operator==(const SynthEvent&) const = default;
};

struct SynthOutput {
    LoadProfile profile;
    std::vector<SynthEvent> events;
};

SynthOutput gen_municipal(const SynthSpec& spec);
SynthOutput gen_machine(const SynthSpec& spec);
SynthOutput gen_ev_park(const SynthSpec& spec);

/// Dispatches on spec.kind.
SynthOutput generate(const SynthSpec& spec);

/// Contribution of one charging session at time t (seconds from t0).
double session_power_at(const SynthEvent& session, double t);

}  // namespace hessplit
