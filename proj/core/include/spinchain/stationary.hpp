#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinchain/distribution.hpp"
#include "spinchain/kernels.hpp"
#include "spinchain/spin_config.hpp"

namespace spinchain {

// Gibbs measure e^{-H}/Z. The empty boundary uses the closed form
// e^{-2J l(sigma)} / (2 (1 + e^{-2J})^{L-1}) with l = interior_pair_count;
// the plus boundary (both boundary bonds) is normalized by direct summation.
Distribution gibbs(const ModelParams& params);

struct StationaryResult {
    Distribution distribution;
    double residual;   // max_tau |(pi P)(tau) - pi(tau)|
    int iterations;    // 0 for the direct solver
};

// Unique pi with pi P = pi, sum pi = 1. Dense LU up to L = 13 (long double
// below L = 10), damped power iteration for 14 <= L <= 22. Only kernels that
// are irreducible stochastic matrices qualify (Irreversible, Glauber).
StationaryResult exact_stationary_report(KernelKind kind, const ModelParams& params);
Distribution exact_stationary(KernelKind kind, const ModelParams& params);

struct EdgeCurrent {
    std::uint64_t src, dst;  // src < dst; dst = src with one bit gained
    int site;
    double current;  // K(src,dst) = pi(src)P(src,dst) - pi(dst)P(dst,src)
};

struct CurrentReport {
    int length = 0;
    std::vector<EdgeCurrent> edges;
    std::vector<double> divergence;  // per state, outflow - inflow over all edges

    double max_abs_divergence() const;
    double max_abs_current() const;
};

CurrentReport currents(const Distribution& pi, KernelKind kind, const ModelParams& params);

struct KolmogorovLoop {
    SpinConfig start;
    std::vector<int> sites;  // flip sequence bringing start back to itself
    double forward_product;
    double backward_product;
};

// Searches flip loops of length 3..max_loop_len from every state for a
// violation of the loop criterion (forward product != backward product,
// relative difference > 1e-10). Returns the first violating loop or nothing.
std::optional<KolmogorovLoop> kolmogorov_check(KernelKind kind, const ModelParams& params,
                                               int max_loop_len);

// E_{Gibbs}[number of minus spins] by a 2x2 transfer-matrix recursion with
// per-site rescaling; O(L) time, valid up to L = 10^6.
double gibbs_minus_moment(int length, double coupling, Boundary boundary);

}  // namespace spinchain
