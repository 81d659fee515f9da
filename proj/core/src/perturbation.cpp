#include "spinchain/perturbation.hpp"

#include <cmath>
#include <string>

#include "spinchain/errors.hpp"
#include "spinchain/stationary.hpp"

namespace spinchain {

namespace {

constexpr int kOperatorMaxL = 16;
constexpr int kDenseMaxL = 12;
constexpr int kHighOrderMaxL = 14;
constexpr int kSeriesMaxL = 12;
constexpr int kScanMaxL = 14;

}  // namespace

DeviationOperator::DeviationOperator(const ModelParams& params)
    : params_(params),
      delta_coeffs_(KernelCoeffs::make(KernelKind::DeltaP, params)) {
    params.validate();
    if (params.boundary != Boundary::Plus)
        throw contract_error("the deviation operator is defined for the plus boundary only");
    if (params.length > kOperatorMaxL)
        throw resource_error("DeviationOperator is capped at L <= 16");

    const KernelCoeffs p0 = KernelCoeffs::make(KernelKind::ZeroTemperature, params);
    const std::int64_t n = std::int64_t{1} << params.length;
    const std::int64_t nt = n - 1;  // transient block: everything but all-plus

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(nt) * (params.length + 1));
    for (std::int64_t src = 0; src < nt; ++src) {
        triplets.emplace_back(src, src, 1.0 - row_diagonal(p0, src));
        for_each_transition(p0, static_cast<std::uint64_t>(src),
                            [&](int, std::uint64_t target, double w) {
                                if (static_cast<std::int64_t>(target) < nt)
                                    triplets.emplace_back(static_cast<std::int64_t>(target),
                                                          src, -w);
                            });
    }
    i_minus_t_transposed_.resize(nt, nt);
    i_minus_t_transposed_.setFromTriplets(triplets.begin(), triplets.end());
    i_minus_t_transposed_.makeCompressed();
    solver_.compute(i_minus_t_transposed_);
    if (solver_.info() != Eigen::Success)
        throw invariant_error("sparse factorization of I - T failed");
}

std::vector<double> DeviationOperator::apply_left(const std::vector<double>& u) const {
    const std::uint64_t n = std::uint64_t{1} << params_.length;
    if (u.size() != n) throw argument_error("vector length must be 2^L");

    // w = u DeltaP; w always sums to zero since the rows of DeltaP do.
    std::vector<double> w(n, 0.0);
    for (std::uint64_t src = 0; src < n; ++src) {
        const double us = u[src];
        if (us == 0.0) continue;
        w[src] += us * row_diagonal(delta_coeffs_, src);
        for_each_transition(delta_coeffs_, src,
                            [&](int, std::uint64_t target, double ww) { w[target] += us * ww; });
    }

    // Transient part of u D solves y (I - T) = w|_T.
    const std::int64_t nt = static_cast<std::int64_t>(n) - 1;
    Eigen::VectorXd rhs(nt);
    for (std::int64_t i = 0; i < nt; ++i) rhs(i) = w[i];
    Eigen::VectorXd y = solver_.solve(rhs);

    std::vector<double> out(n, 0.0);
    double transient_sum = 0.0;
    for (std::int64_t i = 0; i < nt; ++i) {
        out[i] = y(i);
        transient_sum += y(i);
    }
    out[n - 1] = -transient_sum;  // rows of D sum to zero
    return out;
}

std::vector<double> DeviationOperator::row(std::uint64_t source) const {
    const std::uint64_t n = std::uint64_t{1} << params_.length;
    if (source >= n) throw argument_error("source index out of range");
    std::vector<double> e(n, 0.0);
    e[source] = 1.0;
    return apply_left(e);
}

std::vector<std::vector<double>> DeviationOperator::dense() const {
    if (params_.length > kDenseMaxL)
        throw resource_error("dense deviation operator is capped at L <= 12");
    const std::uint64_t n = std::uint64_t{1} << params_.length;
    std::vector<std::vector<double>> d;
    d.reserve(n);
    for (std::uint64_t src = 0; src < n; ++src) d.push_back(row(src));
    return d;
}

ExpansionTerm pi_k(const DeviationOperator& op, int k) {
    if (k < 0) throw argument_error("expansion order must be >= 0");
    const int L = op.length();
    Distribution term = Distribution::point_mass(L, (std::uint64_t{1} << L) - 1);
    for (int step = 0; step < k; ++step) term.values = op.apply_left(term.values);
    return {k, std::move(term)};
}

ExpansionTerm pi_k(const ModelParams& params, int k) {
    if (k >= 2 && params.length > kHighOrderMaxL)
        throw resource_error("pi_k with k >= 2 is capped at L <= 14");
    if (k == 0) {
        // No operator needed, but keep the contract checks.
        if (params.boundary != Boundary::Plus)
            throw contract_error("the expansion is defined for the plus boundary only");
        return {0, Distribution::point_mass(params.length,
                                            (std::uint64_t{1} << params.length) - 1)};
    }
    DeviationOperator op(params);
    return pi_k(op, k);
}

Distribution pi_leq1(const DeviationOperator& op, double epsilon) {
    const int L = op.length();
    const std::uint64_t top = (std::uint64_t{1} << L) - 1;
    ExpansionTerm first = pi_k(op, 1);
    Distribution out = std::move(first.term);
    for (auto& v : out.values) v *= epsilon;
    out.values[top] += 1.0;

    double min_entry = out.min_value();
    if (min_entry < -1e-12) {
        // Only the all-plus entry can go negative: 1 - eps |pi^(1)(all-plus)|.
        ExpansionTerm fresh = pi_k(op, 1);
        double depletion = -fresh.term.values[top];
        double threshold = depletion > 0.0 ? 1.0 / depletion : 1.0;
        throw regime_error(
            "pi_leq1 is not a probability at e^{-4J} = " + std::to_string(epsilon) +
                "; requires e^{-4J} <= " + std::to_string(threshold),
            threshold);
    }
    return out;
}

Distribution pi_leq1(const ModelParams& params) {
    DeviationOperator op(params);
    return pi_leq1(op, params.epsilon());
}

SeriesResult series_sum(const ModelParams& params, int k_max) {
    if (k_max < 1) throw argument_error("k_max must be >= 1");
    if (params.length > kSeriesMaxL)
        throw resource_error("series_sum is capped at L <= 12");
    DeviationOperator op(params);
    const double eps = params.epsilon();
    const std::uint64_t top = (std::uint64_t{1} << params.length) - 1;

    Distribution acc = Distribution::point_mass(params.length, top);
    Distribution u = Distribution::point_mass(params.length, top);
    std::vector<double> abs_sums{1.0};
    double weight = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        u.values = op.apply_left(u.values);
        weight *= eps;
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += weight * u.values[i];
        abs_sums.push_back(u.abs_sum());
    }
    const double growth = abs_sums[k_max] / abs_sums[k_max - 1];
    const double tail = weight * eps * abs_sums[k_max] * growth;
    return {std::move(acc), k_max, tail, std::move(abs_sums)};
}

std::vector<Theorem1Row> theorem1_scan(int length, const std::vector<double>& c_values) {
    if (length > kScanMaxL) throw resource_error("theorem1_scan is capped at L <= 14");
    std::vector<Theorem1Row> rows;
    rows.reserve(c_values.size());
    for (double c : c_values) {
        ModelParams params = ModelParams::chilled(length, c, Boundary::Plus);
        Distribution pi = exact_stationary(KernelKind::Irreversible, params);
        Distribution approx = pi_leq1(params);
        double dtv = tv_distance(pi, approx);
        double eps2 = std::exp(-8.0 * params.coupling);
        rows.push_back({length, c, params.coupling, dtv, eps2, dtv / eps2});
    }
    return rows;
}

}  // namespace spinchain
