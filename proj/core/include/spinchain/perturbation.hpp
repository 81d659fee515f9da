#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cstdint>
#include <memory>
#include <vector>

#include "spinchain/distribution.hpp"
#include "spinchain/kernels.hpp"
#include "spinchain/spin_config.hpp"

namespace spinchain {

// The deviation operator D = sum_{j>=0} DeltaP (P0)^j for the plus-boundary
// chain. The all-plus state is absorbing for P0 and sits at the last
// configuration index, so the geometric sum over the transient block T of P0
// is the exact fundamental matrix N = (I - T)^{-1}; the absorbing column is
// recovered from the zero row sums of DeltaP. No series truncation anywhere.
class DeviationOperator {
  public:
    explicit DeviationOperator(const ModelParams& params);  // plus boundary, L <= 16

    int length() const { return params_.length; }
    const ModelParams& params() const { return params_; }

    // Row-vector application u -> u D; u has 2^L entries.
    std::vector<double> apply_left(const std::vector<double>& u) const;

    // One row of D.
    std::vector<double> row(std::uint64_t source) const;

    // Dense materialization, rows in index order (L <= 12).
    std::vector<std::vector<double>> dense() const;

  private:
    ModelParams params_;
    KernelCoeffs delta_coeffs_;
    Eigen::SparseMatrix<double> i_minus_t_transposed_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_;
};

struct ExpansionTerm {
    int order;          // k
    Distribution term;  // signed; sums to 0 for k >= 1
};

// pi^(k): the all-plus row of D^k (delta at all-plus for k = 0), computed by
// k successive row-vector applications, never materializing D^k.
ExpansionTerm pi_k(const DeviationOperator& op, int k);
ExpansionTerm pi_k(const ModelParams& params, int k);  // k >= 2 capped at L <= 14

// First-order measure pi^(0) + e^{-4J} pi^(1); throws regime_error (with the
// epsilon threshold) when entries drop below -1e-12, i.e. when e^{-4J} is too
// large for the first order to stay a probability.
Distribution pi_leq1(const ModelParams& params);
Distribution pi_leq1(const DeviationOperator& op, double epsilon);

struct SeriesResult {
    Distribution partial_sum;             // sum_{k<=K} e^{-4Jk} pi^(k)
    int orders;                           // K
    double tail_proxy;                    // e^{-4J(K+1)} * sum|pi^(K)| * growth ratio
    std::vector<double> abs_sums;         // sum_sigma |pi^(k)| for k = 0..K
};

SeriesResult series_sum(const ModelParams& params, int k_max);  // L <= 12

struct Theorem1Row {
    int length;
    double c;
    double coupling;  // J = c log L
    double dtv;       // d_TV(pi, pi^{<=1}), un-halved
    double eps2;      // e^{-8J}
    double ratio;     // dtv / eps2
};

// For each c: J = c log L, exact stationary measure vs first-order measure.
std::vector<Theorem1Row> theorem1_scan(int length, const std::vector<double>& c_values);

}  // namespace spinchain
