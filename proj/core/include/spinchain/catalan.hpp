#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace spinchain {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Catalan triangle entry C_{n,k} = (n+k)! (n-k+1) / (k! (n+1)!), 0 <= k <= n.
// C_{n,n} is the n-th Catalan number.
BigInt catalan_triangle(long n, long k);

// t(l,m) = (1/2)^{2l+m} C_{l+m-1,l}, the weight of first hitting level m at
// step 2l+m for the symmetric +-1 walk. Defined for l >= 0, m >= 1.
BigRational catalan_term(long l, long m);

// First-order weight of the interval state (i;m): sum_{l=0}^{i-1} t(l,m).
// Independent of L for states with i+m <= L.
BigRational pi1_interval(long i, long m);

// First-order weight of the ray state (i) in a chain of length L:
//   sum_{l=1}^{min(i,L-1)} pi1_interval(l, L-l), plus 1 when i = L.
// The i = L extra term is the degenerate m = 0 summand of the ray identity;
// its value 1 is fixed by cross-checking against the deviation-operator row.
BigRational pi1_ray(long i, long length);

// Exact pmf of the first hitting time tau_m of level m >= 1 for the
// symmetric +-1 walk started at 0, tabulated for n <= n_max by dynamic
// programming over (step, position) with an absorbing barrier at m. This is
// an oracle independent of the Catalan formula.
struct FirstPassageTable {
    long target = 0;  // m
    long n_max = 0;
    std::vector<BigRational> pmf;  // pmf[n] = P(tau_m = n), n in [0, n_max]

    BigRational prob_at(long n) const;
    BigRational cdf_strictly_below(long n) const;  // P(tau_m < n), n <= n_max + 1
};

FirstPassageTable srw_first_passage(long m, long n_max);

// Partial sum sum_{l=0}^{l_max} t(l,m); strictly increasing in l_max with
// limit 1.
BigRational lemma41_partial(long m, long l_max);

// The exact term t(l,m) bracketed by
//   2^{-m} / (3 sqrt 6) * l^{-3/2}  <=  t(l,m)  <=  m/2 * e^{-m^2/(2(m+l))} * l^{-3/2}
// for l, m >= 1. Throws invariant_error if either inequality fails.
struct StirlingBounds {
    double lower;
    BigRational value;
    double upper;
};

StirlingBounds stirling_bounds_check(long l, long m);

// ---------------------------------------------------------------------------
// Floating-point engines for scans where exact rationals are impractical
// (i ~ 10^4 and beyond). Terms are evaluated in log space via lgamma and
// accumulated with compensated summation.

double catalan_term_fp(long l, long m);
double pi1_interval_fp(long i, long m);

// Deficit 1 - pi1_interval(i,m) = sum_{l>=i} t(l,m), computed as a direct
// tail sum up to T = max(256 i, 10^6) plus an l^{-3/2} remainder estimate.
double pi1_deficit_fp(long i, long m);

// Rows (i, (1 - pi1_interval(i,m)) * sqrt(i)); the stabilization of the
// second column is the desk-scale witness of the C_m / sqrt(i) law.
std::vector<std::pair<long, double>> theorem2_constant(long m, const std::vector<long>& i_list);

// sum over interval states of m * pi1_interval(i,m) plus sum over ray states
// of (L+1-i) * pi1_ray(i,L): the first-order minus moment before the e^{-4J}
// factor.
double first_order_minus_moment(int length);

}  // namespace spinchain
