#include "hessplit/classify.hpp"

#include <algorithm>
#include <sstream>

#include "hessplit/error.hpp"

namespace hessplit {

namespace {

std::string fmt3(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

std::string_view to_string(Relevance r) {
    switch (r) {
    case Relevance::Low: return "Low";
    case Relevance::Medium: return "Medium";
    case Relevance::High: return "High";
    }
    return "Low";
}

Relevance relevance_from_string(std::string_view s) {
    if (s == "Low") return Relevance::Low;
    if (s == "Medium") return Relevance::Medium;
    if (s == "High") return Relevance::High;
    throw Error(ErrorCode::InvalidArgument, "unknown relevance '" + std::string(s) + "'");
}

BimodalMass bimodal_mass(const Histogram& load_hist) {
    BimodalMass m;
    if (load_hist.total == 0) return m;
    std::size_t low = 0, high = 0;
    for (std::size_t b = 0; b < load_hist.bins(); ++b) {
        const double c = load_hist.center(b);
        if (c < 0.1) low += load_hist.counts[b];
        if (c >= 0.9) high += load_hist.counts[b];
    }
    m.low = static_cast<double>(low) / static_cast<double>(load_hist.total);
    m.high = static_cast<double>(high) / static_cast<double>(load_hist.total);
    return m;
}

ClassificationReport classify(const ProfileMetrics& metrics, const std::optional<SymmetryReport>& sym,
                              const Histogram& load_hist, std::optional<Category> hint,
                              const ClassifierConfig& cfg) {
    if (metrics.sample_count != load_hist.total) {
        throw Error(ErrorCode::InconsistentInputs, "metrics cover " + std::to_string(metrics.sample_count) +
                                                       " samples, load histogram " +
                                                       std::to_string(load_hist.total));
    }
    if (sym && sym->sample_count + 1 != load_hist.total) {
        throw Error(ErrorCode::InconsistentInputs, "derivative summary covers " + std::to_string(sym->sample_count) +
                                                       " steps, expected " + std::to_string(load_hist.total - 1));
    }

    ClassificationReport r;
    auto& why = r.rationale;
    bool asymmetric = false;
    bool bimodal_switching = false;

    if (!sym) {
        why.push_back("SC rules skipped: resolution too coarse for supercapacitor timescales -> SC Low");
    } else {
        const auto mass = bimodal_mass(load_hist);
        const double tail = sym->tail_mass();
        if (mass.low > cfg.bimodal_mass_min && mass.high > cfg.bimodal_mass_min && tail >= cfg.switching_tail_min) {
            bimodal_switching = true;
            r.sc_relevance = Relevance::High;
            why.push_back("R1: load bimodal (" + fmt3(mass.low) + " below 0.1 pu, " + fmt3(mass.high) +
                          " at or above 0.9 pu) with derivative tail mass " + fmt3(tail) +
                          ": on/off switching load -> SC High");
        }
        if (!bimodal_switching && sym->symmetry_index >= cfg.symmetric_index_min && tail < cfg.isolated_tail_max) {
            why.push_back("R2: derivative symmetric (index " + fmt3(sym->symmetry_index) + ") with tail mass " +
                          fmt3(tail) + ": only isolated large jumps -> SC Low unless raised below");
        }
        const double pos = sym->positive_tail_mass;
        const double neg = sym->negative_tail_mass;
        if (std::max(pos, neg) > cfg.asymmetry_ratio * std::min(pos, neg)) {
            asymmetric = true;
            r.sc_relevance = std::max(r.sc_relevance, Relevance::Medium);
            const bool rising = pos > neg;
            why.push_back(std::string("R3: ") + (rising ? "positive" : "negative") + " derivative tail " +
                          fmt3(std::max(pos, neg)) + " exceeds " + fmt3(cfg.asymmetry_ratio) + "x " +
                          (rising ? "negative" : "positive") + " tail " + fmt3(std::min(pos, neg)) +
                          (rising ? ": abrupt-start arrivals" : ": abrupt load drops") + " -> SC >= Medium");
        }
        if (r.sc_relevance == Relevance::Low && why.empty()) {
            why.push_back("SC: no rule raised relevance -> SC Low");
        }
    }

    if (metrics.energy_above_base_pu_h > 0.0) {
        r.vrfb_relevance = Relevance::Medium;
        why.push_back("R4: " + fmt3(metrics.energy_above_base_pu_h) +
                      " pu-h above base load: energy shifting -> VRFB >= Medium");
    } else {
        why.push_back("R4: no energy above base load -> VRFB Low");
    }

    r.hess_compliant = r.sc_relevance >= Relevance::Medium || r.vrfb_relevance >= Relevance::Medium;
    why.push_back(std::string("R5: ") + (r.hess_compliant ? "HESS-compliant" : "not HESS-compliant") +
                  " (SC " + std::string(to_string(r.sc_relevance)) + ", VRFB " +
                  std::string(to_string(r.vrfb_relevance)) + ")");

    if (hint) {
        r.category = *hint;
        why.push_back("category " + std::string(to_string(*hint)) + " taken from hint");
    } else if (!r.hess_compliant) {
        r.category = Category::Unknown;
        why.push_back("category Unknown: no hint and not HESS-compliant");
    } else if (metrics.base_load_pu >= cfg.wdg_base_load_min && !asymmetric && !bimodal_switching) {
        r.category = Category::WDG;
        why.push_back("category WDG: persistent base load " + fmt3(metrics.base_load_pu) +
                      " pu with balanced transients (aggregated consumers)");
    } else {
        r.category = Category::PS;
        why.push_back("category PS: peaky load over a low base load " + fmt3(metrics.base_load_pu) + " pu");
    }
    return r;
}

}  // namespace hessplit
