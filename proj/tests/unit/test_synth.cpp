#include <doctest.h>

#include <sstream>

#include "hessplit/error.hpp"
#include "hessplit/metrics.hpp"
#include "hessplit/synth.hpp"
#include "hessplit/transient.hpp"

using namespace hessplit;

namespace {

SynthSpec spec_of(SynthKind kind, std::uint64_t seed, int days = 1) {
    SynthSpec s;
    s.kind = kind;
    s.seed = seed;
    s.days = days;
    return s;
}

std::string csv_of(const LoadProfile& p) {
    std::ostringstream out;
    write_profile_csv(out, p);
    return out.str();
}

}  // namespace

TEST_CASE("determinism: same spec, same bytes") {
    for (auto kind : {SynthKind::Municipal, SynthKind::Machine, SynthKind::EvPark}) {
        const auto a = generate(spec_of(kind, 99));
        const auto b = generate(spec_of(kind, 99));
        CHECK(csv_of(a.profile) == csv_of(b.profile));
        CHECK(a.events == b.events);
        CHECK(csv_of(generate(spec_of(kind, 100)).profile) != csv_of(a.profile));
    }
}

TEST_CASE("generated profiles pass ingest validation and resolve SC transients") {
    for (auto kind : {SynthKind::Municipal, SynthKind::Machine, SynthKind::EvPark}) {
        for (double dt : {0.5, 1.0, 10.0}) {
            auto spec = spec_of(kind, 5);
            spec.dt = dt;
            const auto out = generate(spec);
            CHECK(out.profile.dt() == dt);
            CHECK(out.profile.size() == static_cast<std::size_t>(86400.0 / dt));
            CHECK(validate_resolution(out.profile).sc_suitable);
            std::istringstream in(csv_of(out.profile));
            CsvSpec cs;
            cs.site_id = out.profile.site_id();
            const auto back = parse_profile(in, cs);
            CHECK(back.samples().size() == out.profile.size());
        }
    }
}

TEST_CASE("invalid specs") {
    auto s = spec_of(SynthKind::Municipal, 1);
    s.days = 0;
    CHECK_THROWS_WITH_AS(generate(s), doctest::Contains("InvalidSpec"), Error);
    s = spec_of(SynthKind::Municipal, 1);
    s.dt = 60.0;
    CHECK_THROWS_AS(generate(s), Error);
    s = spec_of(SynthKind::Municipal, 1);
    s.municipal.base_pu = 1.5;
    CHECK_THROWS_AS(generate(s), Error);
    s = spec_of(SynthKind::Machine, 1);
    s.machine.on_level = 1.2;
    CHECK_THROWS_AS(generate(s), Error);
    s = spec_of(SynthKind::EvPark, 1);
    s.ev_park.arrival_rate_per_h = -1.0;
    CHECK_THROWS_AS(generate(s), Error);
    CHECK_THROWS_AS(gen_machine(spec_of(SynthKind::EvPark, 1)), Error);
    CHECK_THROWS_AS(synth_kind_from_string("windfarm"), Error);
    CHECK(synth_kind_from_string("ev-park") == SynthKind::EvPark);
}

TEST_CASE("municipal: realized max equals peak_kw") {
    const auto p = generate(spec_of(SynthKind::Municipal, 3)).profile;
    CHECK(*std::max_element(p.samples().begin(), p.samples().end()) == 100.0);
    CHECK(p.category_hint() == Category::WDG);
}

TEST_CASE("municipal without noise: derivative tail is exactly the injected steps") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto spec = spec_of(SynthKind::Municipal, seed, 4);
        spec.municipal.noise_sigma = 0.0;
        spec.municipal.step_events = 4;
        const auto out = generate(spec);
        REQUIRE(out.events.size() == 4);
        const auto d = derivative(normalize(out.profile));
        std::size_t big = 0;
        for (double v : d.normalized) big += std::abs(v) > 0.5 ? 1 : 0;
        CHECK(big == 2 * out.events.size());
    }
}

TEST_CASE("machine: off fraction tracks duty_cycle") {
    for (double duty : {0.3, 0.5, 0.7}) {
        auto spec = spec_of(SynthKind::Machine, 11, 2);
        spec.machine.duty_cycle = duty;
        const auto p = generate(spec).profile;
        std::size_t off = 0;
        for (double v : p.samples()) off += v == 0.0 ? 1 : 0;
        CHECK(static_cast<double>(off) / static_cast<double>(p.size()) == doctest::Approx(duty).epsilon(0.04));
    }
}

TEST_CASE("machine: lower on level still gives two clusters") {
    auto spec = spec_of(SynthKind::Machine, 12);
    spec.machine.on_level = 0.7;
    spec.machine.switch_spike_level = 1.0;
    const auto np = normalize(generate(spec).profile);
    const auto h = histogram(np.pu, {100, std::pair{0.0, 1.0}, false});
    std::size_t low = 0, high = 0, middle = 0;
    for (std::size_t b = 0; b < h.bins(); ++b) {
        const double c = h.center(b);
        if (c < 0.1) low += h.counts[b];
        else if (c >= 0.6) high += h.counts[b];
        else middle += h.counts[b];
    }
    CHECK(low > h.total / 3);
    CHECK(high > h.total / 3);
    CHECK(middle < h.total / 100);
}

TEST_CASE("machine: always-off chain is rejected downstream") {
    auto spec = spec_of(SynthKind::Machine, 13);
    spec.machine.duty_cycle = 1.0;
    const auto out = generate(spec);
    CHECK(out.events.empty());
    CHECK_THROWS_WITH_AS(normalize(out.profile), doctest::Contains("AllZeroProfile"), Error);
}

TEST_CASE("ev park: no arrivals, no load") {
    auto spec = spec_of(SynthKind::EvPark, 1);
    spec.ev_park.arrival_rate_per_h = 0.0;
    const auto out = generate(spec);
    CHECK(out.events.empty());
    for (double v : out.profile.samples()) CHECK(v == 0.0);
}

TEST_CASE("ev park: a single session rises at once and tapers slowly") {
    auto spec = spec_of(SynthKind::EvPark, 1);
    spec.ev_park.fixed_arrivals_s = {3600.0};
    const auto out = generate(spec);
    REQUIRE(out.events.size() == 1);
    const auto d = derivative(normalize(out.profile));
    std::size_t full_up = 0, negatives = 0;
    double most_negative = 0.0;
    for (double v : d.normalized) {
        full_up += v == 1.0 ? 1 : 0;
        if (v < 0.0) {
            ++negatives;
            most_negative = std::min(most_negative, v);
        }
    }
    CHECK(full_up == 1);
    CHECK(negatives >= 500);
    CHECK(most_negative > -0.01);
}

TEST_CASE("ev park: load histogram trends downward from 0 toward 1") {
    const auto np = normalize(generate(spec_of(SynthKind::EvPark, 7)).profile);
    const auto h = histogram(np.pu, {10, std::pair{0.0, 1.0}, false});
    // Least-squares slope of counts over bin index.
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    const double n = static_cast<double>(h.bins());
    for (std::size_t b = 0; b < h.bins(); ++b) {
        const double x = static_cast<double>(b);
        const double y = static_cast<double>(h.counts[b]);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope < 0.0);
    CHECK(h.counts.front() > h.counts.back());
}

TEST_CASE("session power: hold then linear taper") {
    SynthEvent s{"session", 10.0, 5.0, 20.0, 10.0};
    CHECK(session_power_at(s, 9.0) == 0.0);
    CHECK(session_power_at(s, 10.0) == 20.0);
    CHECK(session_power_at(s, 14.0) == 20.0);
    CHECK(session_power_at(s, 20.0) == 10.0);
    CHECK(session_power_at(s, 25.0) == 0.0);
}
