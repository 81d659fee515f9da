#pragma once

#include <cstdint>
#include <vector>

#include "spinchain/distribution.hpp"
#include "spinchain/kernels.hpp"
#include "spinchain/rng.hpp"
#include "spinchain/spin_config.hpp"

namespace spinchain {

// Worker cap honored by replica-parallel operations; reads SPINCHAIN_THREADS
// once, defaulting to the hardware concurrency.
int worker_count();

// One discrete-time step: draw a site uniformly, flip it with the kernel's
// acceptance probability. Each step consumes exactly two RNG draws. Kinds:
// Irreversible, Glauber, ZeroTemperature.
SpinConfig step(KernelKind kind, const ModelParams& params, const SpinConfig& sigma, Rng& rng);

struct TunnelingStats {
    std::vector<std::uint64_t> samples;  // per-replica first hitting times, replica order
    std::vector<std::uint32_t> censored_replicas;  // replicas that hit the step budget
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double ci_lo = 0.0;     // 95% normal CI for the mean
    double ci_hi = 0.0;
    std::uint64_t step_budget = 0;
};

// First hitting time of the all-minus state started from all-plus, one
// sample per replica. Replica r runs on stream seed.stream + r; replicas run
// in parallel and are aggregated in replica order, so results do not depend
// on the thread count. Censored replicas report the budget itself and are
// flagged, never dropped.
TunnelingStats tunneling_time(KernelKind kind, const ModelParams& params, int replicas,
                              RngSeed seed, std::uint64_t step_budget = 10'000'000'000ull);

// Occupation histogram after burn_in steps, sampling every `thinning` steps,
// normalized by the sample count. Dense histogram: L <= 14.
Distribution empirical_stationary(KernelKind kind, const ModelParams& params,
                                  std::uint64_t burn_in, std::uint64_t n_samples,
                                  std::uint64_t thinning, RngSeed seed);

}  // namespace spinchain
