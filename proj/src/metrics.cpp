#include "hessplit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hessplit/error.hpp"
#include "hessplit/numfmt.hpp"

namespace hessplit {

NormalizedProfile normalize(const LoadProfile& profile) {
    const auto samples = profile.samples();
    const double p_max = *std::max_element(samples.begin(), samples.end());
    if (!(p_max > 0.0)) {
        throw Error(ErrorCode::AllZeroProfile, "profile '" + profile.site_id() + "' has maximum power 0");
    }
    NormalizedProfile np;
    np.site_id = profile.site_id();
    np.base_power_kw = p_max;
    np.dt = profile.dt();
    np.t0 = profile.t0();
    np.pu.reserve(samples.size());
    for (double p : samples) np.pu.push_back(p / p_max);
    return np;
}

double load_factor(const NormalizedProfile& np) {
    if (np.pu.empty()) return 0.0;
    double sum = 0.0;
    for (double v : np.pu) sum += v;
    return sum / static_cast<double>(np.pu.size());
}

BaseLoadEstimate base_load_estimate(const NormalizedProfile& np, std::size_t bins, double cutoff) {
    if (bins < 10) throw Error(ErrorCode::InvalidArgument, "base load estimate needs at least 10 bins");
    if (np.pu.size() < bins) {
        throw Error(ErrorCode::InvalidArgument, "base load estimate needs at least as many samples as bins (" +
                                                    std::to_string(bins) + ")");
    }
    std::vector<std::size_t> counts(bins, 0);
    const double nb = static_cast<double>(bins);
    for (double v : np.pu) {
        auto idx = static_cast<std::size_t>(std::floor(v * nb));
        counts[std::min(idx, bins - 1)] += 1;
    }
    std::size_t best = bins;
    std::size_t best_count = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double center = (static_cast<double>(b) + 0.5) / nb;
        if (!(center < cutoff)) break;
        if (counts[b] > best_count) {
            best = b;
            best_count = counts[b];
        }
    }
    if (best == bins) return {1.0, true};
    return {(static_cast<double>(best) + 0.5) / nb, false};
}

PeakStats peak_stats(const NormalizedProfile& np, double level) {
    if (!(level >= 0.0 && level < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "peak level must lie in [0, 1), got " + format_double(level));
    }
    PeakStats s;
    std::size_t run_samples = 0;
    bool in_peak = false;
    double excess = 0.0;
    for (double v : np.pu) {
        if (v > level) {
            if (!in_peak) ++s.peak_count;
            in_peak = true;
            ++run_samples;
            excess += v - level;
        } else {
            in_peak = false;
        }
    }
    if (s.peak_count > 0) {
        s.mean_peak_duration_s = static_cast<double>(run_samples) * np.dt / static_cast<double>(s.peak_count);
    }
    s.energy_above_level_pu_h = excess * np.dt / 3600.0;
    return s;
}

ProfileMetrics compute_metrics(const NormalizedProfile& np, std::size_t bins) {
    ProfileMetrics m;
    m.sample_count = np.size();
    m.load_factor = load_factor(np);
    // Too short for a histogram mode: reported like the degenerate case.
    const auto base = np.size() < 10 ? BaseLoadEstimate{1.0, true} : base_load_estimate(np, std::min(bins, np.size()));
    m.base_load_pu = base.value_pu;
    m.base_load_degenerate = base.degenerate;
    if (!base.degenerate) {
        const auto peaks = peak_stats(np, base.value_pu);
        m.peak_count = peaks.peak_count;
        m.mean_peak_duration_s = peaks.mean_peak_duration_s;
        m.energy_above_base_pu_h = peaks.energy_above_level_pu_h;
    }
    return m;
}

}  // namespace hessplit
