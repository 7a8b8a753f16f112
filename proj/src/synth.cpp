#include "hessplit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hessplit/error.hpp"

namespace hessplit {

namespace {

constexpr double kSecondsPerDay = 86400.0;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

bool is_level(double v) { return v >= 0.0 && v <= 1.0; }

std::size_t sample_count(const SynthSpec& spec) {
    require(spec.days >= 1, "days must be >= 1");
    require(spec.dt > 0.0 && spec.dt <= 10.0, "dt must lie in (0, 10] s so the output resolves SC transients");
    require(spec.peak_kw > 0.0, "peak_kw must be positive");
    return static_cast<std::size_t>(std::floor(spec.days * kSecondsPerDay / spec.dt));
}

std::string default_site(const SynthSpec& spec) {
    return spec.site_id.empty() ? "synth-" + std::string(to_string(spec.kind)) : spec.site_id;
}

// Scales a pre-normalized shape so its realized maximum becomes peak_kw.
std::vector<double> to_kw(std::vector<double> shape, double peak_kw) {
    const double m = *std::max_element(shape.begin(), shape.end());
    if (m > 0.0) {
        for (double& v : shape) v = v / m * peak_kw;
    }
    return shape;
}

std::size_t to_steps(double seconds, double dt) {
    return static_cast<std::size_t>(std::llround(seconds / dt));
}

}  // namespace

std::string_view to_string(SynthKind k) {
    switch (k) {
    case SynthKind::Municipal: return "municipal";
    case SynthKind::Machine: return "machine";
    case SynthKind::EvPark: return "ev-park";
    }
    return "municipal";
}

SynthKind synth_kind_from_string(std::string_view s) {
    if (s == "municipal") return SynthKind::Municipal;
    if (s == "machine") return SynthKind::Machine;
    if (s == "ev-park" || s == "ev_park" || s == "evpark") return SynthKind::EvPark;
    throw Error(ErrorCode::InvalidSpec, "unknown synth kind '" + std::string(s) + "'");
}

SynthOutput gen_municipal(const SynthSpec& spec) {
    require(spec.kind == SynthKind::Municipal, "gen_municipal needs kind municipal");
    const auto& p = spec.municipal;
    require(is_level(p.base_pu) && is_level(p.peak_pu) && p.base_pu <= p.peak_pu,
            "municipal levels must satisfy 0 <= base_pu <= peak_pu <= 1");
    require(p.noise_sigma >= 0.0 && p.noise_tau_s > 0.0, "noise sigma must be >= 0 and tau > 0");
    require(p.peak_width_h > 0.0 && p.peak_width_h <= 24.0, "peak width must lie in (0, 24] h");
    require(p.step_events >= 0, "step_events must be >= 0");
    require(is_level(p.step_height_min) && is_level(p.step_height_max) && p.step_height_min <= p.step_height_max,
            "step heights must be ordered levels");
    require(p.step_duration_min_s > 0.0 && p.step_duration_min_s <= p.step_duration_max_s &&
                p.step_duration_max_s <= 3.0 * 3600.0,
            "step durations must be ordered, positive and at most 3 h");

    const std::size_t n = sample_count(spec);
    const double dt = spec.dt;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> amplitude(static_cast<std::size_t>(spec.days));
    for (double& a : amplitude) a = (p.peak_pu - p.base_pu) * (0.85 + 0.15 * unit(rng));

    const double width_s = p.peak_width_h * 3600.0;
    const double bump_start_s = p.peak_hour * 3600.0 - width_s / 2.0;
    const double phi = std::exp(-dt / p.noise_tau_s);
    const double innovation = p.noise_sigma * std::sqrt(1.0 - phi * phi);

    std::vector<double> shape(n);
    double noise = p.noise_sigma * gauss(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const auto day = static_cast<std::size_t>(t / kSecondsPerDay);
        double phase = std::fmod(t, kSecondsPerDay) - bump_start_s;
        if (phase < 0.0) phase += kSecondsPerDay;
        double bump = 0.0;
        if (phase < width_s) bump = amplitude[day] * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * phase / width_s));
        shape[i] = p.base_pu + bump + noise;
        noise = phi * noise + innovation * gauss(rng);
    }

    // Isolated night-time steps (01:00-05:00), away from the evening peak,
    // spread over distinct days where possible.
    std::vector<SynthEvent> events;
    for (int k = 0; k < p.step_events; ++k) {
        const int day = spec.days >= p.step_events ? (k * spec.days) / p.step_events
                                                   : static_cast<int>(unit(rng) * spec.days) % spec.days;
        const double start = day * kSecondsPerDay + 3600.0 * (1.0 + 4.0 * unit(rng));
        const double duration =
            p.step_duration_min_s + (p.step_duration_max_s - p.step_duration_min_s) * unit(rng);
        const double height = p.step_height_min + (p.step_height_max - p.step_height_min) * unit(rng);
        const std::size_t first = to_steps(start, dt);
        const std::size_t len = std::max<std::size_t>(1, to_steps(duration, dt));
        for (std::size_t i = first; i < std::min(n, first + len); ++i) shape[i] += height;
        events.push_back({"step", static_cast<double>(first) * dt, static_cast<double>(len) * dt, height, 0.0});
    }
    for (double& v : shape) v = std::max(v, 0.0);

    return {LoadProfile(default_site(spec), spec.t0, dt, to_kw(std::move(shape), spec.peak_kw), Category::WDG),
            std::move(events)};
}

SynthOutput gen_machine(const SynthSpec& spec) {
    require(spec.kind == SynthKind::Machine, "gen_machine needs kind machine");
    const auto& p = spec.machine;
    require(is_level(p.duty_cycle), "duty_cycle must lie in [0, 1]");
    require(is_level(p.on_level) && is_level(p.switch_spike_level) && p.on_level <= p.switch_spike_level,
            "machine levels must satisfy 0 <= on_level <= switch_spike_level <= 1");
    require(p.spike_duration_s >= 0.0 && p.noise_sigma >= 0.0, "spike duration and noise must be >= 0");
    require(p.cycle_min_s > 0.0 && p.cycle_min_s <= p.cycle_max_s, "cycle lengths must be ordered and positive");

    const std::size_t n = sample_count(spec);
    const double dt = spec.dt;
    std::mt19937_64 rng(spec.seed);
    const auto min_len = std::max<std::size_t>(2, to_steps(p.cycle_min_s, dt));
    const auto max_len = std::max(min_len, to_steps(p.cycle_max_s, dt));
    std::uniform_int_distribution<std::size_t> cycle_len(min_len, max_len);
    std::normal_distribution<double> gauss(0.0, p.noise_sigma > 0.0 ? p.noise_sigma : 1.0);
    const std::size_t spike_len = to_steps(p.spike_duration_s, dt);

    std::vector<double> shape(n, 0.0);
    std::vector<SynthEvent> events;
    std::size_t i = 0;
    while (i < n) {
        const std::size_t len = cycle_len(rng);
        const auto off = static_cast<std::size_t>(std::llround(static_cast<double>(len) * p.duty_cycle));
        const std::size_t on = len - off;
        i += off;
        if (on == 0 || i >= n) continue;
        const std::size_t end = std::min(n, i + on);
        events.push_back({"on", static_cast<double>(i) * dt, static_cast<double>(end - i) * dt, p.on_level, 0.0});
        for (std::size_t k = i; k < end; ++k) {
            if (k - i < spike_len) {
                shape[k] = p.switch_spike_level;
            } else {
                const double jitter = p.noise_sigma > 0.0 ? gauss(rng) : 0.0;
                shape[k] = std::clamp(p.on_level + jitter, 0.0, p.switch_spike_level);
            }
        }
        i = end;
    }

    return {LoadProfile(default_site(spec), spec.t0, dt, to_kw(std::move(shape), spec.peak_kw), Category::PS),
            std::move(events)};
}

double session_power_at(const SynthEvent& s, double t) {
    const double hold_end = s.start_s + s.duration_s;
    if (t < s.start_s) return 0.0;
    if (t < hold_end) return s.level;
    if (t < hold_end + s.taper_s) return s.level * (1.0 - (t - hold_end) / s.taper_s);
    return 0.0;
}

SynthOutput gen_ev_park(const SynthSpec& spec) {
    require(spec.kind == SynthKind::EvPark, "gen_ev_park needs kind ev-park");
    const auto& p = spec.ev_park;
    require(p.arrival_rate_per_h >= 0.0, "arrival rate must be >= 0");
    require(p.charge_power_kw > 0.0, "charge power must be positive");
    require(p.min_power_fraction > 0.0 && p.min_power_fraction <= 1.0, "min_power_fraction must lie in (0, 1]");
    require(p.mean_session_s > 0.0 && p.taper_duration_s > 0.0, "session and taper durations must be positive");

    const std::size_t n = sample_count(spec);
    const double dt = spec.dt;
    const double horizon = static_cast<double>(n) * dt;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> hold(1.0 / p.mean_session_s);

    std::vector<double> arrivals = p.fixed_arrivals_s;
    if (arrivals.empty() && p.arrival_rate_per_h > 0.0) {
        std::exponential_distribution<double> gap(p.arrival_rate_per_h / 3600.0);
        for (double t = gap(rng); t < horizon; t += gap(rng)) arrivals.push_back(t);
    }
    std::sort(arrivals.begin(), arrivals.end());

    std::vector<SynthEvent> sessions;
    for (double a : arrivals) {
        require(a >= 0.0 && a < horizon, "fixed arrivals must lie within the profile span");
        // Starts snap to the grid so each arrival is a single-sample step.
        const double start = std::ceil(a / dt) * dt;
        if (start >= horizon) continue;
        const double power = p.charge_power_kw * (p.min_power_fraction + (1.0 - p.min_power_fraction) * unit(rng));
        const double duration = std::max(dt, std::round(hold(rng) / dt) * dt);
        sessions.push_back({"session", start, duration, power, p.taper_duration_s});
    }

    std::vector<double> load(n, 0.0);
    for (const auto& s : sessions) {
        const auto first = static_cast<std::size_t>(std::llround(s.start_s / dt));
        const double stop = s.start_s + s.duration_s + s.taper_s;
        for (std::size_t i = first; i < n && static_cast<double>(i) * dt < stop; ++i) {
            load[i] += session_power_at(s, static_cast<double>(i) * dt);
        }
    }

    return {LoadProfile(default_site(spec), spec.t0, dt, std::move(load), Category::PS), std::move(sessions)};
}

SynthOutput generate(const SynthSpec& spec) {
    switch (spec.kind) {
    case SynthKind::Municipal: return gen_municipal(spec);
    case SynthKind::Machine: return gen_machine(spec);
    case SynthKind::EvPark: return gen_ev_park(spec);
    }
    throw Error(ErrorCode::InvalidSpec, "unknown synth kind");
}

}  // namespace hessplit
