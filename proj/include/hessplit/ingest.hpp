#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hessplit {

/// Application categories for hybrid storage deployments.
enum class Category { PS, WDG, UPS, VI, Unknown };

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);

/// Uniformly sampled active-power series in kW.
///
/// Construction validates the grid: dt > 0, at least two samples, every
/// sample finite and non-negative. Instances are immutable afterwards.
class LoadProfile {
public:
    LoadProfile(std::string site_id, double t0, double dt, std::vector<double> samples,
                std::optional<Category> category_hint = std::nullopt);

    const std::string& site_id() const noexcept { return site_id_; }
    const std::optional<Category>& category_hint() const noexcept { return category_hint_; }
    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }

    /// Time covered by the profile, each sample holding for dt.
    double span_seconds() const noexcept { return dt_ * static_cast<double>(samples_.size()); }

    bool operator==(const LoadProfile&) const = default;

private:
    std::string site_id_;
    std::optional<Category> category_hint_;
    double t0_;
    double dt_;
    std::vector<double> samples_;
};

struct CsvSpec {
    std::string site_id = "unnamed";
    std::optional<Category> category_hint;
    /// Replace negative power (reverse flow) with 0 instead of rejecting it.
    bool clamp_negative = false;
    /// Allowed deviation of any timestamp gap from the inferred dt.
    double grid_tolerance_s = 1e-3;
};

/// Reads `timestamp,power_kw` CSV. Timestamps are epoch seconds or ISO-8601
/// (`YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM]`). dt is inferred from the first two
/// rows and quantized to whole microseconds.
LoadProfile parse_profile(std::istream& source, const CsvSpec& spec = {});
LoadProfile parse_profile_file(const std::filesystem::path& path, const CsvSpec& spec = {});

/// Writes the canonical CSV form (epoch-second timestamps, shortest
/// round-trip decimal). parse_profile reads it back to an equal profile.
void write_profile_csv(std::ostream& out, const LoadProfile& profile);

/// Parses a single timestamp field into epoch seconds; nullopt if malformed.
std::optional<double> parse_timestamp(std::string_view field);

struct ResolutionVerdict {
    bool sc_suitable = false;
    bool ups_usable = false;
    bool vrfb_only = false;
    std::string reason;

    bool operator==(const ResolutionVerdict&) const = default;
};

inline constexpr double kScMaxResolutionS = 10.0;
inline constexpr double kUpsMaxResolutionS = 30.0;

/// SC analysis needs dt <= 10 s; UPS scenarios need dt < 30 s.
ResolutionVerdict validate_resolution(double dt);
inline ResolutionVerdict validate_resolution(const LoadProfile& profile) {
    return validate_resolution(profile.dt());
}

/// Mean-downsampling onto a coarser grid. The trailing partial window is dropped.
LoadProfile resample(const LoadProfile& profile, double target_dt);

struct CatalogEntry {
    std::filesystem::path path;
    std::string site_id;
    std::optional<Category> category_hint;
};

/// Loads a JSON manifest `[{"path":..., "site_id":..., "category_hint":...}]`.
/// Relative paths resolve against the manifest's directory.
std::vector<CatalogEntry> load_catalog(const std::filesystem::path& manifest);

}  // namespace hessplit
