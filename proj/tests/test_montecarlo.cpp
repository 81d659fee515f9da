#include <doctest.h>

#include <spinchain/errors.hpp>
#include <spinchain/montecarlo.hpp>
#include <spinchain/stationary.hpp>

#include <cmath>
#include <map>

using namespace spinchain;

TEST_SUITE("montecarlo") {

TEST_CASE("identical seeds and streams reproduce trajectories bit for bit") {
    ModelParams p{6, 1.5, Boundary::Empty};
    TunnelingStats a = tunneling_time(KernelKind::Irreversible, p, 8, {42, 7});
    TunnelingStats b = tunneling_time(KernelKind::Irreversible, p, 8, {42, 7});
    CHECK(a.samples == b.samples);
    CHECK(a.mean == b.mean);
    TunnelingStats c = tunneling_time(KernelKind::Irreversible, p, 8, {43, 7});
    CHECK(a.samples != c.samples);

    Distribution h1 = empirical_stationary(KernelKind::Glauber, p, 1000, 20000, 2, {5, 0});
    Distribution h2 = empirical_stationary(KernelKind::Glauber, p, 1000, 20000, 2, {5, 0});
    CHECK(h1.values == h2.values);
}

TEST_CASE("one-step frequencies from all-plus match the kernel row (4 sigma)") {
    const int L = 4;
    const int n = 1'000'000;
    for (KernelKind kind : {KernelKind::Irreversible, KernelKind::Glauber}) {
        ModelParams p{L, 0.8, Boundary::Plus};
        SpinConfig start = SpinConfig::all_plus(L);
        KernelRow row = kernel_row(kind, p, start);
        Rng rng({2024, 1});
        std::map<std::uint64_t, int> hits;
        for (int s = 0; s < n; ++s) ++hits[step(kind, p, start, rng).bits()];
        for (const auto& e : row.entries) {
            const double expect = e.weight * n;
            const double sigma = std::sqrt(n * e.weight * (1 - e.weight));
            const std::uint64_t target = start.bits() ^ (1ull << (e.site - 1));
            CHECK(std::abs(hits[target] - expect) <= 4 * sigma);
        }
        const double stay = row.diagonal * n;
        const double sigma_stay = std::sqrt(n * row.diagonal * (1 - row.diagonal));
        CHECK(std::abs(hits[start.bits()] - stay) <= 4 * sigma_stay);
    }
}

TEST_CASE("zero temperature never leaves all-plus") {
    ModelParams p{5, 1.0, Boundary::Plus};
    Rng rng({9, 0});
    SpinConfig sigma = SpinConfig::all_plus(5);
    for (int s = 0; s < 10'000; ++s) {
        sigma = step(KernelKind::ZeroTemperature, p, sigma, rng);
        CHECK(sigma.all_plus());
    }
}

TEST_CASE("at J = 0 every proposed flip is accepted") {
    ModelParams p{5, 0.0, Boundary::Empty};
    Rng rng({11, 3});
    SpinConfig sigma = SpinConfig::all_plus(5);
    for (int s = 0; s < 10'000; ++s) {
        SpinConfig next = step(KernelKind::Irreversible, p, sigma, rng);
        CHECK(!(next == sigma));
        sigma = next;
    }
}

TEST_CASE("tunneling samples are never below L and censoring is flagged") {
    ModelParams p{6, 1.2, Boundary::Empty};
    TunnelingStats stats = tunneling_time(KernelKind::Irreversible, p, 16, {3, 0});
    CHECK(stats.censored_replicas.empty());
    for (auto s : stats.samples) CHECK(s >= 6);
    CHECK(stats.ci_lo <= stats.mean);
    CHECK(stats.mean <= stats.ci_hi);

    // Zero-temperature dynamics never reaches all-minus: every replica hits
    // the budget and is reported as censored, not dropped.
    TunnelingStats stuck =
        tunneling_time(KernelKind::ZeroTemperature, {4, 1.0, Boundary::Plus}, 5, {3, 0}, 500);
    CHECK(stuck.censored_replicas.size() == 5);
    for (auto s : stuck.samples) CHECK(s == 500);

    CHECK_THROWS_AS(tunneling_time(KernelKind::Irreversible, p, 0, {1, 0}), argument_error);
    CHECK_THROWS_AS(tunneling_time(KernelKind::Irreversible, p, 4, {1, 0}, 2), argument_error);
    CHECK_THROWS_AS(tunneling_time(KernelKind::DeltaP, p, 4, {1, 0}), contract_error);
}

TEST_CASE("confidence width shrinks like the square-root law") {
    ModelParams p{6, 1.5, Boundary::Empty};
    TunnelingStats small = tunneling_time(KernelKind::Irreversible, p, 64, {21, 0});
    TunnelingStats large = tunneling_time(KernelKind::Irreversible, p, 256, {21, 0});
    const double w_small = small.ci_hi - small.ci_lo;
    const double w_large = large.ci_hi - large.ci_lo;
    // Quadrupling the replicas should roughly halve the width.
    CHECK(w_large < w_small * 0.75);
    CHECK(w_large > w_small * 0.25);
}

TEST_CASE("empirical histogram is normalized and close to the exact measure") {
    ModelParams p{5, 1.0, Boundary::Empty};
    Distribution hist =
        empirical_stationary(KernelKind::Irreversible, p, 20'000, 2'000'000, 2, {77, 0});
    CHECK(hist.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tv_distance(hist, gibbs(p)) < 0.05);
    CHECK_THROWS_AS(
        empirical_stationary(KernelKind::Irreversible, {15, 1.0, Boundary::Empty}, 1, 1, 1,
                             {1, 0}),
        resource_error);
    CHECK_THROWS_AS(empirical_stationary(KernelKind::Irreversible, p, 1, 0, 1, {1, 0}),
                    argument_error);
    CHECK_THROWS_AS(empirical_stationary(KernelKind::Irreversible, p, 1, 1, 0, {1, 0}),
                    argument_error);
}

}  // TEST_SUITE
