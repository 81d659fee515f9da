#include "spinchain/stationary.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

constexpr int kDenseLongDoubleMaxL = 9;
constexpr int kDenseMaxL = 13;
constexpr int kSolverMaxL = 22;
constexpr int kCurrentsMaxL = 16;

void check_solvable_kind(KernelKind kind) {
    if (kind == KernelKind::ZeroTemperature)
        throw contract_error(
            "the zero-temperature kernel is not irreducible; its stationary "
            "measure is the point mass at the all-plus state");
    if (kind == KernelKind::DeltaP)
        throw contract_error("DeltaP is not a stochastic kernel");
}

// pi <- pi P, matrix-free over kernel rows.
void apply_kernel(const KernelCoeffs& c, const std::vector<double>& in,
                  std::vector<double>& out) {
    const std::uint64_t n = std::uint64_t{1} << c.length;
    out.assign(n, 0.0);
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        const double p = in[idx];
        if (p == 0.0) continue;
        out[idx] += p * row_diagonal(c, idx);
        for_each_transition(c, idx,
                            [&](int, std::uint64_t target, double w) { out[target] += p * w; });
    }
}

double stationarity_residual(const KernelCoeffs& c, const std::vector<double>& pi) {
    std::vector<double> next;
    apply_kernel(c, pi, next);
    double r = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) r = std::max(r, std::abs(next[i] - pi[i]));
    return r;
}

template <class Scalar>
StationaryResult solve_dense(const KernelCoeffs& c) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const std::int64_t n = std::int64_t{1} << c.length;

    // (P^T - I) pi = 0 with the last balance equation replaced by sum pi = 1.
    Matrix a = Matrix::Zero(n, n);
    for (std::int64_t src = 0; src < n; ++src) {
        a(src, src) = static_cast<Scalar>(row_diagonal(c, src)) - Scalar(1);
        for_each_transition(c, static_cast<std::uint64_t>(src),
                            [&](int, std::uint64_t target, double w) {
                                a(static_cast<std::int64_t>(target), src) +=
                                    static_cast<Scalar>(w);
                            });
    }
    for (std::int64_t col = 0; col < n; ++col) a(n - 1, col) = Scalar(1);
    Vector b = Vector::Zero(n);
    b(n - 1) = Scalar(1);

    Eigen::PartialPivLU<Matrix> lu(a);
    Vector x = lu.solve(b);
    for (int pass = 0; pass < 2; ++pass) {
        Vector r = b - a * x;
        x += lu.solve(r);
    }

    Scalar total = x.sum();
    Distribution pi = Distribution::zero(c.length);
    for (std::int64_t i = 0; i < n; ++i) pi.values[i] = static_cast<double>(x(i) / total);
    double res = stationarity_residual(c, pi.values);
    return {std::move(pi), res, 0};
}

StationaryResult solve_power_iteration(const KernelCoeffs& c) {
    const std::uint64_t n = std::uint64_t{1} << c.length;
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
    const int max_iters = 2'000'000;
    int it = 0;
    double res = 1.0;
    while (it < max_iters) {
        for (int burst = 0; burst < 64 && it < max_iters; ++burst, ++it) {
            apply_kernel(c, pi, next);
            // Damped update keeps periodic chains (J = 0 has empty diagonal)
            // converging to the same stationary vector.
            double total = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                next[i] = 0.5 * (next[i] + pi[i]);
                total += next[i];
            }
            for (std::uint64_t i = 0; i < n; ++i) next[i] /= total;
            pi.swap(next);
        }
        res = stationarity_residual(c, pi);
        if (res < 1e-12) break;
    }
    if (res >= 1e-12)
        throw invariant_error("power iteration did not reach residual 1e-12 (achieved " +
                              std::to_string(res) + "); use a smaller L or J");
    Distribution d = Distribution::zero(c.length);
    d.values = std::move(pi);
    return {std::move(d), res, it};
}

}  // namespace

Distribution gibbs(const ModelParams& params) {
    params.validate();
    Distribution pi = Distribution::zero(params.length);
    const std::uint64_t n = std::uint64_t{1} << params.length;
    const double e2 = std::exp(-2.0 * params.coupling);
    if (params.boundary == Boundary::Empty) {
        const double z = 2.0 * std::pow(1.0 + e2, params.length - 1);
        for (std::uint64_t idx = 0; idx < n; ++idx)
            pi.values[idx] =
                std::pow(e2, interior_pair_count_bits(idx, params.length)) / z;
    } else {
        // Weight relative to the all-plus ground state: e^{-2J} per
        // antiparallel bond among (0,1),...,(L,L+1).
        double z = 0.0;
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            int walls = left_antiparallel_count_bits(idx, params.length) +
                        (((idx >> (params.length - 1)) & 1ull) ? 0 : 1);
            double w = std::pow(e2, walls);
            pi.values[idx] = w;
            z += w;
        }
        for (auto& v : pi.values) v /= z;
    }
    return pi;
}

StationaryResult exact_stationary_report(KernelKind kind, const ModelParams& params) {
    params.validate();
    check_solvable_kind(kind);
    if (params.length > kSolverMaxL)
        throw resource_error("exact_stationary is capped at L <= 22");
    const KernelCoeffs c = KernelCoeffs::make(kind, params);
    if (params.length <= kDenseLongDoubleMaxL) return solve_dense<long double>(c);
    if (params.length <= kDenseMaxL) return solve_dense<double>(c);
    return solve_power_iteration(c);
}

Distribution exact_stationary(KernelKind kind, const ModelParams& params) {
    StationaryResult r = exact_stationary_report(kind, params);
    if (r.residual >= 1e-12)
        throw invariant_error("stationary solve residual " + std::to_string(r.residual) +
                              " exceeds 1e-12");
    return std::move(r.distribution);
}

double CurrentReport::max_abs_divergence() const {
    double m = 0.0;
    for (double d : divergence) m = std::max(m, std::abs(d));
    return m;
}

double CurrentReport::max_abs_current() const {
    double m = 0.0;
    for (const auto& e : edges) m = std::max(m, std::abs(e.current));
    return m;
}

CurrentReport currents(const Distribution& pi, KernelKind kind, const ModelParams& params) {
    params.validate();
    if (kind == KernelKind::DeltaP)
        throw contract_error("currents are defined for probability kernels only");
    if (params.length != pi.length)
        throw argument_error("distribution length does not match params");
    if (params.length > kCurrentsMaxL)
        throw resource_error("currents is capped at L <= 16 (2^L * L edges)");

    const KernelCoeffs c = KernelCoeffs::make(kind, params);
    const std::uint64_t n = std::uint64_t{1} << params.length;
    CurrentReport report;
    report.length = params.length;
    report.divergence.assign(n, 0.0);
    report.edges.reserve(static_cast<std::size_t>(n / 2) * params.length);
    for (std::uint64_t src = 0; src < n; ++src) {
        for (int site = 1; site <= params.length; ++site) {
            const std::uint64_t bit = 1ull << (site - 1);
            if (src & bit) continue;  // visit each unordered pair once, from the minus side
            const std::uint64_t dst = src | bit;
            const double fwd = detail::flip_weight_bits(c, src, site);
            const double bwd = detail::flip_weight_bits(c, dst, site);
            const double k = pi.values[src] * fwd - pi.values[dst] * bwd;
            report.edges.push_back({src, dst, site, k});
            report.divergence[src] += k;
            report.divergence[dst] -= k;
        }
    }
    return report;
}

namespace {

struct LoopSearch {
    const KernelCoeffs& c;
    std::uint64_t start;
    int max_len;
    std::vector<int> path;

    std::optional<KolmogorovLoop> dfs(std::uint64_t state, int depth) {
        if (depth >= 2 && state == start && depth >= 3) {
            double fwd = 1.0, bwd = 1.0;
            std::uint64_t s = start;
            for (int site : path) {
                fwd *= detail::flip_weight_bits(c, s, site);
                s ^= 1ull << (site - 1);
            }
            s = start;
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                bwd *= detail::flip_weight_bits(c, s, *it);
                s ^= 1ull << (*it - 1);
            }
            double scale = std::max({std::abs(fwd), std::abs(bwd), 1e-300});
            if (std::abs(fwd - bwd) > 1e-10 * scale)
                return KolmogorovLoop{SpinConfig::from_index(c.length, start), path, fwd, bwd};
        }
        if (depth == max_len) return std::nullopt;
        for (int site = 1; site <= c.length; ++site) {
            path.push_back(site);
            auto hit = dfs(state ^ (1ull << (site - 1)), depth + 1);
            if (hit) return hit;
            path.pop_back();
        }
        return std::nullopt;
    }
};

}  // namespace

std::optional<KolmogorovLoop> kolmogorov_check(KernelKind kind, const ModelParams& params,
                                               int max_loop_len) {
    params.validate();
    if (max_loop_len < 3) throw argument_error("max_loop_len must be >= 3");
    const KernelCoeffs c = KernelCoeffs::make(kind, params);
    const double states = std::pow(2.0, params.length);
    if (states * std::pow(static_cast<double>(params.length), max_loop_len) > 1e9)
        throw resource_error("kolmogorov_check search space too large (2^L * L^len > 1e9)");
    const std::uint64_t n = std::uint64_t{1} << params.length;
    for (std::uint64_t start = 0; start < n; ++start) {
        LoopSearch search{c, start, max_loop_len, {}};
        auto hit = search.dfs(start, 0);
        if (hit) return hit;
    }
    return std::nullopt;
}

double gibbs_minus_moment(int length, double coupling, Boundary boundary) {
    if (length < 1) throw argument_error("L must be >= 1");
    if (length > 1'000'000) throw resource_error("gibbs_minus_moment is capped at L <= 1e6");
    if (!(coupling >= 0.0)) throw argument_error("J must be >= 0");

    const long double w_same = std::exp(static_cast<long double>(coupling));
    const long double w_diff = std::exp(static_cast<long double>(-coupling));
    // z[s]: restricted partition value with site i fixed at s in {-,+};
    // m[s]: partition-weighted count of minus spins so far.
    long double z_minus, z_plus;
    if (boundary == Boundary::Plus) {
        z_minus = w_diff;  // bond (0,1) with sigma_0 = +1
        z_plus = w_same;
    } else {
        z_minus = 1.0L;
        z_plus = 1.0L;
    }
    long double m_minus = z_minus, m_plus = 0.0L;
    for (int site = 2; site <= length; ++site) {
        long double nz_minus = z_minus * w_same + z_plus * w_diff;
        long double nz_plus = z_minus * w_diff + z_plus * w_same;
        long double nm_minus = m_minus * w_same + m_plus * w_diff + nz_minus;
        long double nm_plus = m_minus * w_diff + m_plus * w_same;
        long double scale = std::max(nz_minus, nz_plus);
        z_minus = nz_minus / scale;
        z_plus = nz_plus / scale;
        m_minus = nm_minus / scale;
        m_plus = nm_plus / scale;
    }
    long double z, m;
    if (boundary == Boundary::Plus) {
        z = z_minus * w_diff + z_plus * w_same;  // bond (L, L+1)
        m = m_minus * w_diff + m_plus * w_same;
    } else {
        z = z_minus + z_plus;
        m = m_minus + m_plus;
    }
    return static_cast<double>(m / z);
}

}  // namespace spinchain
