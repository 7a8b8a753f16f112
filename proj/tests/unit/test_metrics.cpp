#include <doctest.h>

#include <numeric>
#include <random>

#include "hessplit/error.hpp"
#include "hessplit/metrics.hpp"
#include "hessplit/synth.hpp"
#include "support.hpp"

using namespace hessplit;
using testsupport::make_profile;

namespace {

NormalizedProfile pu_profile(std::vector<double> pu, double dt = 1.0) {
    NormalizedProfile np;
    np.site_id = "pu";
    np.base_power_kw = 1.0;
    np.dt = dt;
    np.pu = std::move(pu);
    return np;
}

}  // namespace

TEST_CASE("normalize: direct division") {
    const auto np = normalize(make_profile({2, 4, 1}));
    CHECK(np.pu == std::vector<double>{0.5, 1.0, 0.25});
    CHECK(np.base_power_kw == 4.0);
    CHECK(normalize(make_profile({5, 5, 5})).pu == std::vector<double>{1, 1, 1});
    CHECK_THROWS_WITH_AS(normalize(make_profile({0, 0, 0})), doctest::Contains("AllZeroProfile"), Error);
}

TEST_CASE("load factor") {
    CHECK(load_factor(pu_profile({1, 1, 1})) == 1.0);
    CHECK(load_factor(pu_profile({0.5, 1.0, 0.25})) == doctest::Approx(0.5833333333333334));
}

TEST_CASE("property: load factor is 1 only for constants") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const auto kw = testsupport::random_kw(rng, 2 + trial % 100);
        const auto np = normalize(make_profile(kw));
        const double lf = load_factor(np);
        const bool constant = std::all_of(kw.begin(), kw.end(), [&](double v) { return v == kw[0]; });
        CHECK(lf > 0.0);
        CHECK(lf <= 1.0);
        CHECK((lf == 1.0) == constant);
        CHECK(*std::max_element(np.pu.begin(), np.pu.end()) == 1.0);
        for (double v : np.pu) CHECK((v >= 0.0 && v <= 1.0));
    }
}

TEST_CASE("base load: constant full load is degenerate") {
    const auto est = base_load_estimate(pu_profile(std::vector<double>(200, 1.0)));
    CHECK(est.degenerate);
    CHECK(est.value_pu == 1.0);
}

TEST_CASE("base load: mode with ties to the lower bin") {
    std::vector<double> pu(100, 0.9);
    for (int i = 0; i < 30; ++i) pu[i] = 0.205;
    for (int i = 30; i < 60; ++i) pu[i] = 0.555;
    const auto est = base_load_estimate(pu_profile(pu));
    CHECK_FALSE(est.degenerate);
    CHECK(est.value_pu == 0.205);
    CHECK_THROWS_AS(base_load_estimate(pu_profile(pu), 5), Error);
    CHECK_THROWS_AS(base_load_estimate(pu_profile(pu), 200), Error);
}

TEST_CASE("base load: synthetics") {
    SynthSpec m;
    m.kind = SynthKind::Municipal;
    m.seed = 42;
    m.days = 12;
    const auto est = base_load_estimate(normalize(generate(m).profile));
    CHECK(est.value_pu >= 0.4);
    CHECK(est.value_pu <= 0.6);

    SynthSpec k;
    k.kind = SynthKind::Machine;
    k.seed = 1;
    const auto machine = base_load_estimate(normalize(generate(k).profile));
    CHECK(machine.value_pu < 0.05);

    m.days = 1;
    const double lf = load_factor(normalize(generate(m).profile));
    CHECK(lf > 0.5);
    CHECK(lf < 1.0);
}

TEST_CASE("peak stats: runs above the level") {
    const auto s = peak_stats(pu_profile({0, 1, 1, 0}), 0.5);
    CHECK(s.peak_count == 1);
    CHECK(s.mean_peak_duration_s == 2.0);
    CHECK(s.energy_above_level_pu_h == doctest::Approx(1.0 / 3600.0));

    const auto whole = peak_stats(pu_profile(std::vector<double>(10, 1.0), 2.0), 0.5);
    CHECK(whole.peak_count == 1);
    CHECK(whole.mean_peak_duration_s == 20.0);

    const auto edge = peak_stats(pu_profile({0.5, 0.6, 0.5, 0.6, 0.6}), 0.5);
    CHECK(edge.peak_count == 2);
    CHECK(edge.mean_peak_duration_s == 1.5);

    CHECK_THROWS_AS(peak_stats(pu_profile({0, 1}), 1.0), Error);
    CHECK_THROWS_AS(peak_stats(pu_profile({0, 1}), -0.1), Error);
}

TEST_CASE("property: level 0 energy equals total per-unit energy") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const double dt = trial % 2 ? 1.0 : 5.0;
        const auto np = normalize(make_profile(testsupport::random_kw(rng, 50 + trial), dt));
        const double total = std::accumulate(np.pu.begin(), np.pu.end(), 0.0) * dt / 3600.0;
        CHECK(peak_stats(np, 0.0).energy_above_level_pu_h == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("EV peak count matches the event-log reconstruction") {
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        SynthSpec spec;
        spec.kind = SynthKind::EvPark;
        spec.seed = seed;
        spec.ev_park.arrival_rate_per_h = 3.0;
        const auto out = generate(spec);
        const auto np = normalize(out.profile);

        // Rebuild the kW series from the sessions alone and count runs above 0.8 of its max.
        std::vector<double> rebuilt(out.profile.size(), 0.0);
        for (const auto& ev : out.events) {
            for (std::size_t i = 0; i < rebuilt.size(); ++i) {
                rebuilt[i] += session_power_at(ev, static_cast<double>(i) * spec.dt);
            }
        }
        const double peak = *std::max_element(rebuilt.begin(), rebuilt.end());
        std::size_t runs = 0;
        bool inside = false;
        for (double v : rebuilt) {
            const bool above = v / peak > 0.8;
            if (above && !inside) ++runs;
            inside = above;
        }
        CHECK(runs > 0);
        CHECK(peak_stats(np, 0.8).peak_count == runs);
    }
}

TEST_CASE("property: scale invariance of pu and metrics") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::uint64_t> dyadic(1, (1ull << 20) * 1000000ull);
    std::uniform_real_distribution<double> any_k(1e-6, 1e6);
    for (int trial = 0; trial < 200; ++trial) {
        auto kw = testsupport::random_grid_kw(rng, 150 + trial);
        const auto base = normalize(make_profile(kw));
        const auto base_metrics = compute_metrics(base);

        const double k = static_cast<double>(dyadic(rng)) / static_cast<double>(1ull << 20);
        std::vector<double> scaled(kw);
        for (double& v : scaled) v *= k;
        const auto np = normalize(make_profile(scaled));
        CHECK(np.pu == base.pu);
        CHECK(np.base_power_kw == base.base_power_kw * k);
        CHECK(compute_metrics(np) == base_metrics);

        // Arbitrary real factors agree to rounding.
        const double r = any_k(rng);
        std::vector<double> real_scaled(kw);
        for (double& v : real_scaled) v *= r;
        const auto np2 = normalize(make_profile(real_scaled));
        for (std::size_t i = 0; i < np2.pu.size(); ++i) CHECK(np2.pu[i] == doctest::Approx(base.pu[i]).epsilon(1e-15));
    }
}

TEST_CASE("compute_metrics skips peaks for degenerate base load") {
    const auto m = compute_metrics(pu_profile(std::vector<double>(150, 1.0)));
    CHECK(m.base_load_degenerate);
    CHECK(m.peak_count == 0);
    CHECK(m.energy_above_base_pu_h == 0.0);
    CHECK(m.sample_count == 150);
    const auto small = compute_metrics(pu_profile({0.2, 1.0, 0.2}));
    CHECK(small.sample_count == 3);
    CHECK(small.base_load_degenerate);
}
