#include "hessplit/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "hessplit/error.hpp"
#include "hessplit/numfmt.hpp"

namespace hessplit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::NegativePower: return "NegativePower";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotAMultiple: return "NotAMultiple";
    case ErrorCode::UpsamplingForbidden: return "UpsamplingForbidden";
    case ErrorCode::AllZeroProfile: return "AllZeroProfile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyValues: return "EmptyValues";
    case ErrorCode::NotSymmetricHistogram: return "NotSymmetricHistogram";
    case ErrorCode::IncompatibleResolution: return "IncompatibleResolution";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::InconsistentInputs: return "InconsistentInputs";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_string(Category c) {
    switch (c) {
    case Category::PS: return "PS";
    case Category::WDG: return "WDG";
    case Category::UPS: return "UPS";
    case Category::VI: return "VI";
    case Category::Unknown: return "Unknown";
    }
    return "Unknown";
}

Category category_from_string(std::string_view s) {
    for (Category c : {Category::PS, Category::WDG, Category::UPS, Category::VI, Category::Unknown}) {
        if (to_string(c) == s) return c;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown category '" + std::string(s) + "'");
}

LoadProfile::LoadProfile(std::string site_id, double t0, double dt, std::vector<double> samples,
                         std::optional<Category> category_hint)
    : site_id_(std::move(site_id)),
      category_hint_(category_hint),
      t0_(t0),
      dt_(dt),
      samples_(std::move(samples)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
        throw Error(ErrorCode::NonUniformGrid, "sample interval must be positive, got " + format_double(dt_));
    }
    if (!std::isfinite(t0_)) throw Error(ErrorCode::InvalidArgument, "t0 must be finite");
    if (samples_.size() < 2) {
        throw Error(ErrorCode::TooFewSamples, "a load profile needs at least 2 samples");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double v = samples_[i];
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::MalformedRow, "sample " + std::to_string(i) + " is not finite");
        }
        if (v < 0.0) {
            throw Error(ErrorCode::NegativePower,
                        "sample " + std::to_string(i) + " is negative (" + format_double(v) + " kW)");
        }
    }
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

std::optional<double> parse_iso8601(std::string_view s) {
    int year, month, day, hour, minute, second;
    if (!read_digits(s, 0, 4, year) || s.size() < 19 || s[4] != '-' || !read_digits(s, 5, 2, month) ||
        s[7] != '-' || !read_digits(s, 8, 2, day) || (s[10] != 'T' && s[10] != ' ') ||
        !read_digits(s, 11, 2, hour) || s[13] != ':' || !read_digits(s, 14, 2, minute) || s[16] != ':' ||
        !read_digits(s, 17, 2, second)) {
        return std::nullopt;
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    double fraction = 0.0;
    if (pos < s.size() && s[pos] == '.') {
        std::size_t end = pos + 1;
        while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
        if (end == pos + 1) return std::nullopt;
        auto f = parse_double(std::string("0") + std::string(s.substr(pos, end - pos)));
        if (!f) return std::nullopt;
        fraction = *f;
        pos = end;
    }
    long long offset_s = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            pos += 1;
        } else if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6 && s[pos + 3] == ':') {
            int oh, om;
            if (!read_digits(s, pos + 1, 2, oh) || !read_digits(s, pos + 4, 2, om)) return std::nullopt;
            offset_s = (oh * 3600LL + om * 60LL) * (s[pos] == '+' ? 1 : -1);
            pos = s.size();
        } else {
            return std::nullopt;
        }
    }
    const long long days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    const long long secs = days * 86400LL + hour * 3600LL + minute * 60LL + second - offset_s;
    return static_cast<double>(secs) + fraction;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<double> parse_timestamp(std::string_view field) {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    if (field.size() >= 10 && field[4] == '-') return parse_iso8601(field);
    auto v = parse_double(field);
    if (!v || !std::isfinite(*v)) return std::nullopt;
    return v;
}

LoadProfile parse_profile(std::istream& source, const CsvSpec& spec) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(source, line)) throw Error(ErrorCode::EmptyInput, "input is empty");
    ++line_no;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    if (trim(line) != "timestamp,power_kw") {
        throw Error(ErrorCode::MalformedRow, "row 1: header must be exactly 'timestamp,power_kw'");
    }

    std::vector<double> times;
    std::vector<double> powers;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorCode::MalformedRow, "row " + std::to_string(line_no) + ": expected 2 fields");
        }
        auto t = parse_timestamp(row.substr(0, comma));
        if (!t) {
            throw Error(ErrorCode::MalformedRow, "row " + std::to_string(line_no) + ": bad timestamp");
        }
        auto p = parse_double(row.substr(comma + 1));
        if (!p || !std::isfinite(*p)) {
            throw Error(ErrorCode::MalformedRow, "row " + std::to_string(line_no) + ": bad power_kw value");
        }
        if (*p < 0.0) {
            if (!spec.clamp_negative) {
                throw Error(ErrorCode::NegativePower,
                            "row " + std::to_string(line_no) + ": negative power " + format_double(*p) + " kW");
            }
            *p = 0.0;
        }
        times.push_back(*t);
        powers.push_back(*p);
    }

    if (times.empty()) throw Error(ErrorCode::EmptyInput, "no data rows after header");
    if (times.size() < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 data rows to infer dt");

    const double dt = std::round((times[1] - times[0]) * 1e6) / 1e6;
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::NonUniformGrid, "row 3: timestamps must be strictly increasing");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double gap = times[i] - times[i - 1];
        if (std::abs(gap - dt) > spec.grid_tolerance_s) {
            throw Error(ErrorCode::NonUniformGrid, "row " + std::to_string(i + 2) + ": gap " +
                                                       format_double(gap) + " s deviates from dt " +
                                                       format_double(dt) + " s");
        }
    }
    return LoadProfile(spec.site_id, times[0], dt, std::move(powers), spec.category_hint);
}

LoadProfile parse_profile_file(const std::filesystem::path& path, const CsvSpec& spec) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return parse_profile(in, spec);
}

void write_profile_csv(std::ostream& out, const LoadProfile& profile) {
    out << "timestamp,power_kw\n";
    const auto samples = profile.samples();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = profile.t0() + static_cast<double>(i) * profile.dt();
        out << format_double(t) << ',' << format_double(samples[i]) << '\n';
    }
}

ResolutionVerdict validate_resolution(double dt) {
    ResolutionVerdict v;
    v.sc_suitable = dt <= kScMaxResolutionS;
    v.ups_usable = dt < kUpsMaxResolutionS;
    v.vrfb_only = dt > kScMaxResolutionS;
    const std::string dts = format_double(dt);
    if (v.sc_suitable) {
        v.reason = "dt " + dts + " s <= 10 s: resolves supercapacitor timescale transients";
    } else if (v.ups_usable) {
        v.reason = "dt " + dts + " s > 10 s: too coarse for supercapacitor analysis, battery only; "
                   "< 30 s so usable for UPS scenarios";
    } else {
        v.reason = "dt " + dts + " s > 10 s: too coarse for supercapacitor analysis, battery only; "
                   ">= 30 s so not usable for UPS scenarios";
    }
    return v;
}

LoadProfile resample(const LoadProfile& profile, double target_dt) {
    if (!(target_dt > profile.dt())) {
        throw Error(ErrorCode::UpsamplingForbidden, "target dt " + format_double(target_dt) +
                                                        " s must exceed source dt " + format_double(profile.dt()) +
                                                        " s");
    }
    const double ratio = target_dt / profile.dt();
    const double k = std::round(ratio);
    if (std::abs(ratio - k) > 1e-9 * ratio) {
        throw Error(ErrorCode::NotAMultiple, "target dt " + format_double(target_dt) +
                                                 " s is not an integer multiple of " + format_double(profile.dt()) +
                                                 " s");
    }
    const auto window = static_cast<std::size_t>(k);
    const auto in = profile.samples();
    const std::size_t n_out = in.size() / window;
    if (n_out < 2) {
        throw Error(ErrorCode::TooFewSamples, "resampled profile would have fewer than 2 samples");
    }
    std::vector<double> out(n_out);
    for (std::size_t w = 0; w < n_out; ++w) {
        double sum = 0.0;
        for (std::size_t j = 0; j < window; ++j) sum += in[w * window + j];
        out[w] = sum / static_cast<double>(window);
    }
    return LoadProfile(profile.site_id(), profile.t0(), target_dt, std::move(out), profile.category_hint());
}

std::vector<CatalogEntry> load_catalog(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + manifest.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRow, "manifest " + manifest.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::MalformedRow, "manifest must be a JSON array");
    std::vector<CatalogEntry> entries;
    const auto base = manifest.parent_path();
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("path") || !item["path"].is_string()) {
            throw Error(ErrorCode::MalformedRow, "manifest entry needs a string 'path'");
        }
        CatalogEntry e;
        e.path = item["path"].get<std::string>();
        if (e.path.is_relative()) e.path = base / e.path;
        e.site_id = item.value("site_id", e.path.stem().string());
        if (item.contains("category_hint") && !item["category_hint"].is_null()) {
            e.category_hint = category_from_string(item["category_hint"].get<std::string>());
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace hessplit
