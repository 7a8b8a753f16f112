#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hessplit/ingest.hpp"

namespace hessplit {

/// Profile scaled by its own maximum: pu = P / P_max, so max(pu) == 1 exactly.
struct NormalizedProfile {
    std::string site_id;
    double base_power_kw = 0.0;
    double dt = 1.0;
    double t0 = 0.0;
    std::vector<double> pu;

    std::size_t size() const noexcept { return pu.size(); }
    double to_kw(double per_unit) const noexcept { return per_unit * base_power_kw; }

    bool operator==(const NormalizedProfile&) const = default;
};

NormalizedProfile normalize(const LoadProfile& profile);

/// Mean over max; equals mean(pu) for a normalized profile.
double load_factor(const NormalizedProfile& np);

inline constexpr std::size_t kDefaultLoadBins = 100;
inline constexpr double kDefaultScThreshold = 0.8;

struct BaseLoadEstimate {
    double value_pu = 1.0;
    /// No sample fell below the cutoff; value_pu is reported as 1.0.
    bool degenerate = false;

    bool operator==(const BaseLoadEstimate&) const = default;
};

/// Mode of the load histogram over [0,1], restricted to bins whose center lies
/// below `cutoff` (the SC operating band starts there). Ties go to the lower bin.
BaseLoadEstimate base_load_estimate(const NormalizedProfile& np, std::size_t bins = kDefaultLoadBins,
                                    double cutoff = kDefaultScThreshold);

struct PeakStats {
    std::size_t peak_count = 0;
    double mean_peak_duration_s = 0.0;
    double energy_above_level_pu_h = 0.0;

    bool operator==(const PeakStats&) const = default;
};

/// A peak is a maximal run of samples with pu strictly above `level`.
PeakStats peak_stats(const NormalizedProfile& np, double level);

struct ProfileMetrics {
    std::size_t sample_count = 0;
    double load_factor = 0.0;
    double base_load_pu = 0.0;
    bool base_load_degenerate = false;
    std::size_t peak_count = 0;
    double mean_peak_duration_s = 0.0;
    double energy_above_base_pu_h = 0.0;

    bool operator==(const ProfileMetrics&) const = default;
};

/// Scalar summary; peaks are counted above the estimated base load.
ProfileMetrics compute_metrics(const NormalizedProfile& np, std::size_t bins = kDefaultLoadBins);

}  // namespace hessplit
