#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hessplit/ingest.hpp"
#include "hessplit/metrics.hpp"
#include "hessplit/transient.hpp"

namespace hessplit {

enum class Relevance { Low = 0, Medium = 1, High = 2 };

std::string_view to_string(Relevance r);
Relevance relevance_from_string(std::string_view s);

/// Rule thresholds, calibrated once against the municipal, machine and
/// EV-park generators and frozen here.
struct ClassifierConfig {
    double symmetric_index_min = 0.8;   ///< R2
    double isolated_tail_max = 0.05;    ///< R2: tail mass below this
    double asymmetry_ratio = 2.0;       ///< R3: dominant tail > ratio * the other tail
    double bimodal_mass_min = 0.15;     ///< R1: mass in [0,0.1) and in [0.9,1] each above this
    double switching_tail_min = 0.005;  ///< R1: derivative tail mass at least this
    double wdg_base_load_min = 0.3;     ///< category inference without a hint

    bool operator==(const ClassifierConfig&) const = default;
};

struct ClassificationReport {
    Category category = Category::Unknown;
    bool hess_compliant = false;
    Relevance sc_relevance = Relevance::Low;
    Relevance vrfb_relevance = Relevance::Low;
    std::vector<std::string> rationale;

    bool operator==(const ClassificationReport&) const = default;
};

/// Fraction of the load histogram's mass in [0, 0.1) and in [0.9, 1].
struct BimodalMass {
    double low = 0.0;
    double high = 0.0;
};
BimodalMass bimodal_mass(const Histogram& load_hist);

/// Rule-based verdict. `sym` is absent for profiles too coarse for SC
/// analysis; the SC rules are then skipped.
///
///  R1  load bimodal near 0 and 1 and switching transients -> SC High
///  R2  symmetric derivative with few large jumps          -> SC Low
///  R3  one derivative tail > 2x the other                 -> SC >= Medium
///  R4  energy above base load                              -> VRFB >= Medium
///  R5  compliant iff SC or VRFB relevance >= Medium
///
/// VI is only ever taken from the hint.
ClassificationReport classify(const ProfileMetrics& metrics, const std::optional<SymmetryReport>& sym,
                              const Histogram& load_hist, std::optional<Category> hint = std::nullopt,
                              const ClassifierConfig& cfg = {});

}  // namespace hessplit
