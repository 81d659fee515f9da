#include "spinchain/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

constexpr int kMonteCarloMaxL = 1 << 20;
constexpr int kHistogramMaxL = 14;

void check_step_kind(KernelKind kind) {
    if (kind == KernelKind::DeltaP)
        throw contract_error("DeltaP is not a probability kernel; it cannot be simulated");
}

// Inlined single-spin-flip walker; acceptance logic mirrors flip_acceptance
// with the exponentials precomputed once.
struct Walker {
    KernelKind kind;
    Boundary boundary;
    int length;
    double e2, e4;
    SpinConfig sigma;
    int minuses = 0;

    Walker(KernelKind k, const ModelParams& p, SpinConfig start)
        : kind(k),
          boundary(p.boundary),
          length(p.length),
          e2(std::exp(-2.0 * p.coupling)),
          e4(std::exp(-4.0 * p.coupling)),
          sigma(std::move(start)) {
        minuses = sigma.minus_count();
    }

    int spin_ext(int j) const {
        if (j == 0 || j == length + 1) return boundary == Boundary::Plus ? +1 : 0;
        return sigma.is_plus(j) ? +1 : -1;
    }

    double acceptance(int site) const {
        const int s = spin_ext(site);
        switch (kind) {
            case KernelKind::Irreversible: {
                const int prod = s * spin_ext(site - 1);
                if (prod == 0) return e2;
                return prod > 0 ? e4 : 1.0;
            }
            case KernelKind::Glauber: {
                const int t = s * (spin_ext(site - 1) + spin_ext(site + 1));
                if (t <= 0) return 1.0;
                return t == 1 ? e2 : e4;
            }
            case KernelKind::ZeroTemperature:
                return s * spin_ext(site - 1) < 0 ? 1.0 : 0.0;
            default:
                return 0.0;
        }
    }

    void do_step(Rng& rng) {
        const int site = rng.uniform_site(length);
        const double acc = acceptance(site);
        const double u = rng.uniform01();
        if (u < acc) {
            minuses += sigma.is_plus(site) ? +1 : -1;
            sigma.flip_in_place(site);
        }
    }
};

}  // namespace

int worker_count() {
    static const int cached = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("SPINCHAIN_THREADS")) {
            int requested = std::atoi(env);
            if (requested >= 1) return std::min(requested, 256);
        }
        return hw;
    }();
    return cached;
}

SpinConfig step(KernelKind kind, const ModelParams& params, const SpinConfig& sigma, Rng& rng) {
    params.validate();
    check_step_kind(kind);
    if (kind == KernelKind::ZeroTemperature && params.boundary != Boundary::Plus)
        throw contract_error("zero-temperature dynamics is defined for the plus boundary only");
    if (sigma.length() != params.length)
        throw argument_error("configuration length does not match params");
    Walker w(kind, params, sigma);
    w.do_step(rng);
    return w.sigma;
}

TunnelingStats tunneling_time(KernelKind kind, const ModelParams& params, int replicas,
                              RngSeed seed, std::uint64_t step_budget) {
    params.validate();
    check_step_kind(kind);
    if (params.length > kMonteCarloMaxL)
        throw resource_error("Monte Carlo is capped at L <= 2^20");
    if (replicas < 1) throw argument_error("replicas must be >= 1");
    if (step_budget < static_cast<std::uint64_t>(params.length))
        throw argument_error("step budget below L cannot reach the all-minus state");

    TunnelingStats stats;
    stats.samples.assign(replicas, 0);
    stats.step_budget = step_budget;
    std::vector<std::uint8_t> censored(replicas, 0);

    std::atomic<int> next_replica{0};
    auto run = [&] {
        for (;;) {
            const int r = next_replica.fetch_add(1);
            if (r >= replicas) return;
            Rng rng({seed.seed, seed.stream + static_cast<std::uint64_t>(r)});
            Walker w(kind, params, SpinConfig::all_plus(params.length));
            std::uint64_t steps = 0;
            while (w.minuses < params.length && steps < step_budget) {
                w.do_step(rng);
                ++steps;
            }
            stats.samples[r] = steps;
            censored[r] = w.minuses < params.length ? 1 : 0;
        }
    };

    const int workers = std::min(worker_count(), replicas);
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }

    for (int r = 0; r < replicas; ++r)
        if (censored[r]) stats.censored_replicas.push_back(static_cast<std::uint32_t>(r));

    double mean = 0.0;
    for (auto s : stats.samples) mean += static_cast<double>(s);
    mean /= replicas;
    double var = 0.0;
    for (auto s : stats.samples) {
        const double d = static_cast<double>(s) - mean;
        var += d * d;
    }
    var = replicas > 1 ? var / (replicas - 1) : 0.0;
    const double half = 1.96 * std::sqrt(var / replicas);
    stats.mean = mean;
    stats.variance = var;
    stats.ci_lo = mean - half;
    stats.ci_hi = mean + half;
    return stats;
}

Distribution empirical_stationary(KernelKind kind, const ModelParams& params,
                                  std::uint64_t burn_in, std::uint64_t n_samples,
                                  std::uint64_t thinning, RngSeed seed) {
    params.validate();
    check_step_kind(kind);
    if (params.length > kHistogramMaxL)
        throw resource_error("empirical_stationary histograms are capped at L <= 14");
    if (n_samples < 1) throw argument_error("n_samples must be >= 1");
    if (thinning < 1) throw argument_error("thinning must be >= 1");

    Rng rng(seed);
    Walker w(kind, params, SpinConfig::all_plus(params.length));
    for (std::uint64_t s = 0; s < burn_in; ++s) w.do_step(rng);

    std::vector<std::uint64_t> counts(std::size_t{1} << params.length, 0);
    for (std::uint64_t s = 0; s < n_samples; ++s) {
        for (std::uint64_t t = 0; t < thinning; ++t) w.do_step(rng);
        ++counts[w.sigma.bits()];
    }
    Distribution hist = Distribution::zero(params.length);
    for (std::size_t i = 0; i < counts.size(); ++i)
        hist.values[i] = static_cast<double>(counts[i]) / static_cast<double>(n_samples);
    return hist;
}

}  // namespace spinchain
