#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hessplit/classify.hpp"
#include "hessplit/ems.hpp"
#include "hessplit/ingest.hpp"
#include "hessplit/metrics.hpp"
#include "hessplit/synth.hpp"
#include "hessplit/transient.hpp"

namespace hessplit {

inline constexpr const char* kToolVersion = "0.1.0";

struct AnalysisOptions {
    std::size_t load_bins = kDefaultLoadBins;
    std::size_t derivative_bins = kDefaultDerivativeBins;
    double tail_level = kDefaultTailLevel;
    ClassifierConfig classifier;

    bool operator==(const AnalysisOptions&) const = default;
};

struct AnalysisReport {
    std::string site_id;
    std::string tool_version = kToolVersion;
    std::string input_hash;  ///< FNV-1a 64 of the canonical profile CSV
    std::size_t sample_count = 0;
    double dt = 0.0;
    double base_power_kw = 0.0;
    ResolutionVerdict resolution;
    ProfileMetrics metrics;
    Histogram load_histogram;
    std::optional<Histogram> derivative_histogram;  ///< absent when the profile is battery-only
    std::optional<SymmetryReport> symmetry;
    ClassificationReport classification;
    AnalysisOptions config;
    std::vector<std::string> warnings;

    bool operator==(const AnalysisReport&) const = default;
};

/// validate -> normalize -> metrics -> derivative -> histograms -> symmetry -> classify.
/// Profiles coarser than 10 s skip the derivative stage and carry a warning.
AnalysisReport analyze_profile(const LoadProfile& profile, const AnalysisOptions& options = {});

std::string profile_fingerprint(const LoadProfile& profile);

/// Dispatch/sweep/UPS settings read from a flat JSON object whose keys are the
/// EmsConfig and DeviceParams field names.
struct RunConfig {
    EmsConfig ems;
    DeviceParams devices;

    bool operator==(const RunConfig&) const = default;
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const ResolutionVerdict& v);
void from_json(const nlohmann::json& j, ResolutionVerdict& v);
void to_json(nlohmann::json& j, const ProfileMetrics& m);
void from_json(const nlohmann::json& j, ProfileMetrics& m);
void to_json(nlohmann::json& j, const Histogram& h);
void from_json(const nlohmann::json& j, Histogram& h);
void to_json(nlohmann::json& j, const SymmetryReport& s);
void from_json(const nlohmann::json& j, SymmetryReport& s);
void to_json(nlohmann::json& j, const ClassificationReport& c);
void from_json(const nlohmann::json& j, ClassificationReport& c);
void to_json(nlohmann::json& j, const ClassifierConfig& c);
void from_json(const nlohmann::json& j, ClassifierConfig& c);
void to_json(nlohmann::json& j, const AnalysisOptions& o);
void from_json(const nlohmann::json& j, AnalysisOptions& o);
void to_json(nlohmann::json& j, const AnalysisReport& r);
void from_json(const nlohmann::json& j, AnalysisReport& r);
void to_json(nlohmann::json& j, const RunConfig& c);
void to_json(nlohmann::json& j, const UtilizationStats& u);
void to_json(nlohmann::json& j, const UpsFeasibility& f);
void to_json(nlohmann::json& j, const SynthEvent& e);

}  // namespace hessplit
