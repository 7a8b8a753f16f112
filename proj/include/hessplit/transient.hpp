#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hessplit/metrics.hpp"

namespace hessplit {

/// Forward-difference time derivative of a normalized profile.
struct DerivativeSeries {
    std::vector<double> raw;         ///< pu per second, length n-1
    std::vector<double> normalized;  ///< raw / max|raw|, in [-1, 1]
    double dt = 1.0;
    double max_abs_raw = 0.0;

    bool operator==(const DerivativeSeries&) const = default;
};

DerivativeSeries derivative(const NormalizedProfile& np);

struct HistogramSpec {
    std::size_t bins = 100;
    std::optional<std::pair<double, double>> range;
    /// Range forced to [-m, m] with m = max|value|; an even bin count is
    /// bumped to the next odd one so a bin is centered on zero.
    bool symmetric = false;
};

inline constexpr std::size_t kDefaultDerivativeBins = 101;

struct Histogram {
    std::vector<double> edges;  ///< bins + 1 monotone boundaries
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    bool symmetric = false;

    std::size_t bins() const noexcept { return counts.size(); }
    double center(std::size_t b) const noexcept { return 0.5 * (edges[b] + edges[b + 1]); }

    bool operator==(const Histogram&) const = default;
};

/// Equal-width histogram. Values on an interior edge go to the upper bin;
/// for symmetric histograms they go to the bin farther from zero so that the
/// binning commutes with x -> -x.
Histogram histogram(std::span<const double> values, const HistogramSpec& spec);

/// `bin_lo,bin_hi,count` rows with a header line.
void write_histogram_csv(std::ostream& out, const Histogram& h);

inline constexpr double kDefaultTailLevel = 0.5;
inline constexpr double kProbeTailLevel = 0.1;

struct SymmetryReport {
    std::size_t sample_count = 0;
    double symmetry_index = 1.0;
    double tail_level = kDefaultTailLevel;
    double positive_tail_mass = 0.0;
    double negative_tail_mass = 0.0;
    double probe_level = kProbeTailLevel;
    double probe_positive_tail_mass = 0.0;
    double probe_negative_tail_mass = 0.0;

    double tail_mass() const noexcept { return positive_tail_mass + negative_tail_mass; }

    bool operator==(const SymmetryReport&) const = default;
};

/// Mirror-pair imbalance of a symmetric histogram, plus the fraction of
/// `values` strictly beyond +tail_level and -tail_level.
SymmetryReport symmetry_report(const Histogram& h, std::span<const double> values,
                               double tail_level = kDefaultTailLevel);

}  // namespace hessplit
