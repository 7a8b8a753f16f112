#include <doctest.h>

#include <random>
#include <sstream>

#include "hessplit/error.hpp"
#include "hessplit/metrics.hpp"
#include "hessplit/synth.hpp"
#include "hessplit/transient.hpp"
#include "support.hpp"

using namespace hessplit;

namespace {

NormalizedProfile pu_profile(std::vector<double> pu, double dt = 1.0) {
    NormalizedProfile np;
    np.base_power_kw = 1.0;
    np.dt = dt;
    np.pu = std::move(pu);
    return np;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 9);
    std::vector<double> v(n);
    for (auto& x : v) {
        // Mix in exact grid values so some land on bin edges.
        x = pick(rng) < 3 ? static_cast<double>(pick(rng) - 5) / 5.0 : unit(rng);
    }
    return v;
}

}  // namespace

TEST_CASE("derivative: constant and symmetric step") {
    const auto c = derivative(pu_profile({0.5, 0.5, 0.5, 0.5}));
    CHECK(c.raw == std::vector<double>{0, 0, 0});
    CHECK(c.normalized == std::vector<double>{0, 0, 0});
    const auto d = derivative(pu_profile({0, 1, 0}));
    CHECK(d.raw == std::vector<double>{1, -1});
    CHECK(d.normalized == std::vector<double>{1, -1});
    const auto slow = derivative(pu_profile({0, 1, 0}, 4.0));
    CHECK(slow.raw == std::vector<double>{0.25, -0.25});
    CHECK(slow.normalized == std::vector<double>{1, -1});
    CHECK_THROWS_AS(derivative(pu_profile({1})), Error);
}

TEST_CASE("derivative: machine switching gives full-scale spikes of both signs") {
    SynthSpec spec;
    spec.kind = SynthKind::Machine;
    spec.seed = 3;
    const auto d = derivative(normalize(generate(spec).profile));
    const auto [mn, mx] = std::minmax_element(d.normalized.begin(), d.normalized.end());
    CHECK(*mx == 1.0);
    CHECK(*mn <= -0.9);
}

TEST_CASE("property: derivative length, range and time reversal") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const auto np = normalize(testsupport::make_profile(testsupport::random_kw(rng, 2 + trial % 80)));
        const auto d = derivative(np);
        REQUIRE(d.raw.size() == np.size() - 1);
        double peak = 0.0;
        for (double v : d.normalized) peak = std::max(peak, std::abs(v));
        CHECK(((peak == 1.0) || (d.max_abs_raw == 0.0 && peak == 0.0)));

        auto reversed = np;
        std::reverse(reversed.pu.begin(), reversed.pu.end());
        auto rd = derivative(reversed).raw;
        std::vector<double> expected(d.raw.rbegin(), d.raw.rend());
        for (double& v : expected) v = -v;
        CHECK(rd == expected);
    }
}

TEST_CASE("property: derivative ignores positive scaling of the raw profile") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<std::uint64_t> dyadic(1, 1ull << 40);
    for (int trial = 0; trial < 100; ++trial) {
        auto kw = testsupport::random_grid_kw(rng, 20 + trial);
        const auto base = derivative(normalize(testsupport::make_profile(kw)));
        const double k = static_cast<double>(dyadic(rng)) / static_cast<double>(1ull << 20);
        for (double& v : kw) v *= k;
        CHECK(derivative(normalize(testsupport::make_profile(kw))) == base);
    }
}

TEST_CASE("histogram: interior edge goes to the upper bin") {
    const std::vector<double> v{0.0, 0.5, 1.0};
    const auto h = histogram(v, {2, std::pair{0.0, 1.0}, false});
    CHECK(h.counts == std::vector<std::size_t>{1, 2});
    CHECK(h.edges == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(h.total == 3);
}

TEST_CASE("histogram: symmetric pair") {
    const std::vector<double> v{-1.0, 1.0};
    const auto h = histogram(v, {3, std::nullopt, true});
    CHECK(h.counts == std::vector<std::size_t>{1, 0, 1});
    CHECK(h.symmetric);
    CHECK(h.edges.front() == -1.0);
    CHECK(h.edges.back() == 1.0);
    const auto even = histogram(v, {4, std::nullopt, true});
    CHECK(even.bins() == 5);
    CHECK(even.center(2) == 0.0);
}

TEST_CASE("histogram: errors and degenerate ranges") {
    const std::vector<double> none;
    CHECK_THROWS_WITH_AS(histogram(none, {}), doctest::Contains("EmptyValues"), Error);
    const std::vector<double> v{0.3, 0.3};
    CHECK_THROWS_AS(histogram(v, {1, std::nullopt, false}), Error);
    const auto flat = histogram(v, {10, std::nullopt, false});
    CHECK(flat.total == 2);
    CHECK(flat.edges.front() < 0.3);
    CHECK(flat.edges.back() > 0.3);
    CHECK_THROWS_AS(histogram(v, {10, std::pair{0.5, 1.0}, false}), Error);
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    const auto z = histogram(zeros, {5, std::nullopt, true});
    CHECK(z.counts == std::vector<std::size_t>{0, 0, 3, 0, 0});
}

TEST_CASE("property: histogram conserves mass and covers the data") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<std::size_t> nbins(2, 60);
    for (int trial = 0; trial < 500; ++trial) {
        const auto values = random_values(rng, 1 + trial % 200);
        HistogramSpec spec;
        spec.bins = nbins(rng);
        spec.symmetric = trial % 2 == 0;
        const auto h = histogram(values, spec);
        std::size_t sum = 0;
        for (auto c : h.counts) sum += c;
        CHECK(sum == values.size());
        CHECK(h.total == values.size());
        CHECK(h.edges.size() == h.bins() + 1);
        CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        CHECK(h.edges.front() <= *mn);
        CHECK(h.edges.back() >= *mx);
    }
}

TEST_CASE("symmetry index: definition cases") {
    const std::vector<double> even{-0.9, -0.2, 0.0, 0.2, 0.9};
    const auto h = histogram(even, {101, std::nullopt, true});
    CHECK(symmetry_report(h, even).symmetry_index == 1.0);

    const std::vector<double> positive{0.3, 0.6, 1.0};
    const auto hp = histogram(positive, {101, std::nullopt, true});
    const auto r = symmetry_report(hp, positive, 0.5);
    CHECK(r.symmetry_index == 0.0);
    CHECK(r.positive_tail_mass == doctest::Approx(2.0 / 3.0));
    CHECK(r.negative_tail_mass == 0.0);
    CHECK(r.probe_positive_tail_mass == 1.0);

    const auto plain = histogram(positive, {10, std::nullopt, false});
    CHECK_THROWS_WITH_AS(symmetry_report(plain, positive), doctest::Contains("NotSymmetricHistogram"), Error);
    const std::vector<double> shorter{0.3};
    CHECK_THROWS_AS(symmetry_report(hp, shorter), Error);
}

TEST_CASE("property: symmetry index is mirror invariant and bounded") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<std::size_t> nbins(3, 201);
    for (int trial = 0; trial < 500; ++trial) {
        const auto values = random_values(rng, 1 + trial % 300);
        std::vector<double> mirrored(values);
        for (double& v : mirrored) v = -v;
        const std::size_t bins = nbins(rng);
        const auto h = histogram(values, {bins, std::nullopt, true});
        const auto hm = histogram(mirrored, {bins, std::nullopt, true});
        std::vector<std::size_t> flipped(h.counts.rbegin(), h.counts.rend());
        CHECK(hm.counts == flipped);
        const auto a = symmetry_report(h, values);
        const auto b = symmetry_report(hm, mirrored);
        CHECK(a.symmetry_index == b.symmetry_index);
        CHECK(a.positive_tail_mass == b.negative_tail_mass);
        CHECK(a.symmetry_index >= 0.0);
        CHECK(a.symmetry_index <= 1.0);
        CHECK((a.positive_tail_mass >= 0.0 && a.positive_tail_mass <= 1.0));

        std::vector<double> doubled(values);
        doubled.insert(doubled.end(), mirrored.begin(), mirrored.end());
        const auto hd = histogram(doubled, {bins, std::nullopt, true});
        CHECK(symmetry_report(hd, doubled).symmetry_index == 1.0);
    }
}

TEST_CASE("histogram CSV") {
    const std::vector<double> v{0.0, 0.5, 1.0};
    std::ostringstream out;
    write_histogram_csv(out, histogram(v, {2, std::pair{0.0, 1.0}, false}));
    CHECK(out.str() == "bin_lo,bin_hi,count\n0,0.5,1\n0.5,1,2\n");
}
