#include "hessplit/transient.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hessplit/error.hpp"
#include "hessplit/numfmt.hpp"

namespace hessplit {

DerivativeSeries derivative(const NormalizedProfile& np) {
    if (np.pu.size() < 2) throw Error(ErrorCode::TooFewSamples, "derivative needs at least 2 samples");
    DerivativeSeries d;
    d.dt = np.dt;
    const std::size_t n = np.pu.size() - 1;
    d.raw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.raw[i] = (np.pu[i + 1] - np.pu[i]) / np.dt;
        d.max_abs_raw = std::max(d.max_abs_raw, std::abs(d.raw[i]));
    }
    d.normalized.assign(n, 0.0);
    if (d.max_abs_raw > 0.0) {
        for (std::size_t i = 0; i < n; ++i) d.normalized[i] = d.raw[i] / d.max_abs_raw;
    }
    return d;
}

namespace {

Histogram symmetric_histogram(std::span<const double> values, std::size_t bins) {
    if (bins % 2 == 0) ++bins;
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    if (m == 0.0) m = 1.0;

    // Positive interior edges; the negative ones are exact negations.
    const std::size_t center = (bins - 1) / 2;
    std::vector<double> pos_edges(center);
    for (std::size_t j = 0; j < center; ++j) {
        pos_edges[j] = m * static_cast<double>(2 * j + 1) / static_cast<double>(bins);
    }

    Histogram h;
    h.symmetric = true;
    h.edges.reserve(bins + 1);
    h.edges.push_back(-m);
    for (std::size_t j = center; j-- > 0;) h.edges.push_back(-pos_edges[j]);
    for (double e : pos_edges) h.edges.push_back(e);
    h.edges.push_back(m);

    h.counts.assign(bins, 0);
    for (double v : values) {
        const auto ring = static_cast<std::size_t>(
            std::upper_bound(pos_edges.begin(), pos_edges.end(), std::abs(v)) - pos_edges.begin());
        const std::size_t b = v > 0.0 ? center + ring : center - ring;
        h.counts[b] += 1;
    }
    h.total = values.size();
    return h;
}

}  // namespace

Histogram histogram(std::span<const double> values, const HistogramSpec& spec) {
    if (values.empty()) throw Error(ErrorCode::EmptyValues, "histogram of an empty sequence");
    if (spec.bins < 2) throw Error(ErrorCode::InvalidArgument, "histogram needs at least 2 bins");
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "histogram input contains non-finite value");
    }
    if (spec.symmetric) return symmetric_histogram(values, spec.bins);

    double lo, hi;
    if (spec.range) {
        std::tie(lo, hi) = *spec.range;
        if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "histogram range must satisfy lo < hi");
    } else {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        lo = *mn;
        hi = *mx;
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }

    const std::size_t bins = spec.bins;
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k < bins; ++k) {
        h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
    }
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);

    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double v : values) {
        if (v < lo || v > hi) {
            throw Error(ErrorCode::InvalidArgument,
                        "value " + format_double(v) + " outside histogram range [" + format_double(lo) + ", " +
                            format_double(hi) + "]");
        }
        auto idx = static_cast<std::size_t>(std::clamp((v - lo) * scale, 0.0, static_cast<double>(bins - 1)));
        while (idx + 1 < bins && v >= h.edges[idx + 1]) ++idx;
        while (idx > 0 && v < h.edges[idx]) --idx;
        h.counts[idx] += 1;
    }
    h.total = values.size();
    return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.bins(); ++b) {
        out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    }
}

SymmetryReport symmetry_report(const Histogram& h, std::span<const double> values, double tail_level) {
    if (!h.symmetric || h.bins() % 2 == 0) {
        throw Error(ErrorCode::NotSymmetricHistogram, "symmetry report requires a symmetric histogram");
    }
    if (values.size() != h.total) {
        throw Error(ErrorCode::InconsistentInputs, "values do not match the histogram total");
    }
    if (!(tail_level >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tail level must be non-negative");

    SymmetryReport r;
    r.sample_count = h.total;
    r.tail_level = tail_level;
    const double total = static_cast<double>(h.total);
    const std::size_t center = (h.bins() - 1) / 2;

    // The central bin pairs with itself: zero imbalance, double weight.
    double imbalance = 0.0;
    double weight = 2.0 * static_cast<double>(h.counts[center]) / total;
    for (std::size_t k = 1; k <= center; ++k) {
        const double f_pos = static_cast<double>(h.counts[center + k]) / total;
        const double f_neg = static_cast<double>(h.counts[center - k]) / total;
        imbalance += std::abs(f_pos - f_neg);
        weight += f_pos + f_neg;
    }
    r.symmetry_index = weight > 0.0 ? 1.0 - imbalance / weight : 1.0;

    std::size_t pos = 0, neg = 0, probe_pos = 0, probe_neg = 0;
    for (double v : values) {
        if (v > tail_level) ++pos;
        if (v < -tail_level) ++neg;
        if (v > r.probe_level) ++probe_pos;
        if (v < -r.probe_level) ++probe_neg;
    }
    r.positive_tail_mass = static_cast<double>(pos) / total;
    r.negative_tail_mass = static_cast<double>(neg) / total;
    r.probe_positive_tail_mass = static_cast<double>(probe_pos) / total;
    r.probe_negative_tail_mass = static_cast<double>(probe_neg) / total;
    return r;
}

}  // namespace hessplit
