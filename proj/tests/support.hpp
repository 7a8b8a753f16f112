#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hessplit/ingest.hpp"

namespace testsupport {

// Random non-negative kW series with a mix of plateaus, ramps and spikes.
inline std::vector<double> random_kw(std::mt19937_64& rng, std::size_t n, double scale = 50.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out(n);
    double level = scale * unit(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = unit(rng);
        if (r < 0.05) {
            level = scale * unit(rng);
        } else if (r < 0.08) {
            out[i] = scale * (1.0 + unit(rng));
            continue;
        }
        out[i] = std::max(0.0, level + 0.02 * scale * (unit(rng) - 0.5));
    }
    out[0] += 1e-3;  // never all-zero
    return out;
}

// Samples on a 12-bit integer grid: products with dyadic factors stay exact.
inline std::vector<double> random_grid_kw(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> level(0, 4095);
    std::uniform_int_distribution<int> coin(0, 19);
    std::vector<double> out(n);
    int current = level(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(rng) == 0) current = level(rng);
        out[i] = static_cast<double>(coin(rng) == 1 ? level(rng) : current);
    }
    out[n / 2] = 4095.0;
    return out;
}

inline hessplit::LoadProfile make_profile(std::vector<double> kw, double dt = 1.0, std::string site = "test") {
    return hessplit::LoadProfile(std::move(site), 0.0, dt, std::move(kw));
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("hessplit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path_ / name; }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path_ / name) << text;
        return (path_ / name).string();
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace testsupport
