#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spinchain/errors.hpp"
#include "spinchain/spin_config.hpp"

namespace spinchain {

// The four row-(sub)stochastic kernels over {-1,+1}^L:
//   Irreversible     P(sigma, sigma^(i)) = e^{-2J(sigma_i sigma_{i-1} + 1)} / L
//   Glauber          P(sigma, sigma^(i)) = e^{-[H(sigma^(i)) - H(sigma)]_+} / L
//   ZeroTemperature  flip at i with probability 1/L iff sigma_i sigma_{i-1} = -1
//   DeltaP           (P - P0)/e^{-4J}: 1/L at parallel sites, diagonal -1 + l/L
// ZeroTemperature and DeltaP are defined for the plus boundary only.
// Rows of the first three sum to 1; rows of DeltaP sum to 0.
enum class KernelKind { Irreversible, Glauber, ZeroTemperature, DeltaP };

std::string to_string(KernelKind k);
KernelKind kernel_from_string(std::string_view s);

// Ising Hamiltonian. Empty: H = -J sum_{i=2..L} sigma_i sigma_{i-1}.
// Plus adds both boundary bonds with sigma_0 = sigma_{L+1} = +1.
double hamiltonian(const ModelParams& params, const SpinConfig& sigma);

// Probability of accepting the flip of `site` once that site was drawn,
// i.e. L times the off-diagonal kernel weight. For DeltaP this is the
// magnitude of the off-diagonal entry times L.
double flip_acceptance(KernelKind kind, const ModelParams& params,
                       const SpinConfig& sigma, int site);

struct FlipEntry {
    int site;       // flipping this site of source yields the target
    double weight;  // off-diagonal kernel entry, > 0 (zero entries omitted)
};

struct KernelRow {
    SpinConfig source;
    double diagonal;
    std::vector<FlipEntry> entries;  // at most L of them

    SpinConfig target(const FlipEntry& e) const { return flip(source, e.site); }
    double off_diagonal_sum() const;
};

KernelRow kernel_row(KernelKind kind, const ModelParams& params, const SpinConfig& sigma);

struct SparseKernel {
    KernelKind kind;
    ModelParams params;
    std::vector<KernelRow> rows;  // configuration-index order, 2^L rows

    // Plain-text triplets "src_index dst_index weight", one per line, after
    // a header "# L=<L> J=<J> bc=<empty|plus> kind=<kind>". Diagonals included
    // when nonzero.
    void dump(std::ostream& os) const;
};

// All 2^L rows in index order. Hard cap L <= 30; warns on stderr above 22.
SparseKernel assemble(KernelKind kind, const ModelParams& params);

// ---------------------------------------------------------------------------
// Fast index-based row generation for the dense solvers (L <= 63). Bit
// (i-1) of a configuration index is the spin at site i (1 = plus).

struct KernelCoeffs {
    KernelKind kind;
    int length;
    Boundary boundary;
    double inv_length;
    double e2;  // e^{-2J}
    double e4;  // e^{-4J}

    static KernelCoeffs make(KernelKind kind, const ModelParams& params);
};

// Antiparallel pairs {i-1,i}, i in [1,L], with sigma_0 = +1 (plus boundary).
inline int left_antiparallel_count_bits(std::uint64_t bits, int length) {
    std::uint64_t w = (bits << 1) | 1ull;
    std::uint64_t x = w ^ (w >> 1);
    std::uint64_t mask = length >= 64 ? ~0ull : ((1ull << length) - 1ull);
    return std::popcount(x & mask);
}

inline int interior_pair_count_bits(std::uint64_t bits, int length) {
    std::uint64_t x = bits ^ (bits >> 1);
    std::uint64_t mask = length >= 2 ? ((1ull << (length - 1)) - 1ull) : 0ull;
    return std::popcount(x & mask);
}

namespace detail {

// sigma_j extended by the boundary: j in [0, L+1]; empty boundary gives 0.
inline int spin_ext(std::uint64_t bits, int length, Boundary bc, int j) {
    if (j == 0 || j == length + 1) return bc == Boundary::Plus ? +1 : 0;
    return ((bits >> (j - 1)) & 1ull) ? +1 : -1;
}

inline double flip_weight_bits(const KernelCoeffs& c, std::uint64_t bits, int site) {
    const int s = spin_ext(bits, c.length, c.boundary, site);
    switch (c.kind) {
        case KernelKind::Irreversible: {
            const int sl = spin_ext(bits, c.length, c.boundary, site - 1);
            const int prod = s * sl;
            if (prod == 0) return c.e2 * c.inv_length;
            return prod > 0 ? c.e4 * c.inv_length : c.inv_length;
        }
        case KernelKind::Glauber: {
            const int sl = spin_ext(bits, c.length, c.boundary, site - 1);
            const int sr = spin_ext(bits, c.length, c.boundary, site + 1);
            const int t = s * (sl + sr);
            if (t <= 0) return c.inv_length;
            return (t == 1 ? c.e2 : c.e4) * c.inv_length;
        }
        case KernelKind::ZeroTemperature: {
            const int sl = spin_ext(bits, c.length, Boundary::Plus, site - 1);
            return s * sl < 0 ? c.inv_length : 0.0;
        }
        case KernelKind::DeltaP: {
            const int sl = spin_ext(bits, c.length, Boundary::Plus, site - 1);
            return s * sl > 0 ? c.inv_length : 0.0;
        }
    }
    return 0.0;
}

}  // namespace detail

// Calls f(site, target_index, weight) for every nonzero off-diagonal entry
// of the row at `bits`. DeltaP weights are reported with their actual sign
// convention (positive off-diagonals).
template <class F>
void for_each_transition(const KernelCoeffs& c, std::uint64_t bits, F&& f) {
    for (int site = 1; site <= c.length; ++site) {
        double w = detail::flip_weight_bits(c, bits, site);
        if (w != 0.0) f(site, bits ^ (1ull << (site - 1)), w);
    }
}

double row_diagonal(const KernelCoeffs& c, std::uint64_t bits);

}  // namespace spinchain
