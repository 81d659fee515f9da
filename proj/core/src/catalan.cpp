#include "spinchain/catalan.hpp"

#include <algorithm>
#include <cmath>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

BigInt factorial(long n) {
    BigInt f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

// t(l+1,m) / t(l,m) as an exact small rational step.
void advance_term(BigRational& t, long l, long m) {
    t *= BigRational(BigInt(2 * l + m + 1) * (2 * l + m), BigInt(4) * (l + 1) * (l + m + 1));
}

double advance_term_fp(double t, long l, long m) {
    return t * (static_cast<double>(2 * l + m + 1) * static_cast<double>(2 * l + m)) /
           (4.0 * static_cast<double>(l + 1) * static_cast<double>(l + m + 1));
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

BigInt catalan_triangle(long n, long k) {
    if (n < 0 || k < 0 || k > n)
        throw argument_error("catalan_triangle needs 0 <= k <= n");
    BigInt num = factorial(n + k) * (n - k + 1);
    BigInt den = factorial(k) * factorial(n + 1);
    return num / den;
}

BigRational catalan_term(long l, long m) {
    if (l < 0 || m < 1) throw argument_error("catalan_term needs l >= 0, m >= 1");
    BigRational t(BigInt(1), BigInt(1) << m);  // l = 0 term
    for (long j = 0; j < l; ++j) advance_term(t, j, m);
    return t;
}

BigRational pi1_interval(long i, long m) {
    if (i < 1 || m < 1) throw argument_error("pi1_interval needs i >= 1, m >= 1");
    BigRational t(BigInt(1), BigInt(1) << m);
    BigRational sum = t;
    for (long l = 1; l < i; ++l) {
        advance_term(t, l - 1, m);
        sum += t;
    }
    return sum;
}

BigRational pi1_ray(long i, long length) {
    if (length < 1 || i < 1 || i > length)
        throw argument_error("pi1_ray needs 1 <= i <= L");
    BigRational sum = 0;
    const long cap = std::min(i, length - 1);
    for (long l = 1; l <= cap; ++l) sum += pi1_interval(l, length - l);
    if (i == length) sum += 1;
    return sum;
}

BigRational FirstPassageTable::prob_at(long n) const {
    if (n < 0 || n > n_max) throw argument_error("first-passage pmf tabulated only up to n_max");
    return pmf[n];
}

BigRational FirstPassageTable::cdf_strictly_below(long n) const {
    if (n < 0 || n > n_max + 1)
        throw argument_error("first-passage cdf tabulated only up to n_max + 1");
    BigRational s = 0;
    for (long j = 0; j < n; ++j) s += pmf[j];
    return s;
}

FirstPassageTable srw_first_passage(long m, long n_max) {
    if (m < 1 || n_max < m) throw argument_error("srw_first_passage needs m >= 1, n_max >= m");
    FirstPassageTable table;
    table.target = m;
    table.n_max = n_max;
    table.pmf.assign(n_max + 1, BigRational(0));

    // Path counts below the barrier; position p in [-n_max, m-1] stored at
    // offset p + n_max. pmf(n) = counts at m-1 after n-1 steps / 2^n.
    const long width = n_max + m;
    std::vector<BigInt> counts(width, 0), next(width, 0);
    counts[n_max] = 1;  // start at 0
    BigInt denom = 1;
    for (long n = 1; n <= n_max; ++n) {
        denom <<= 1;
        table.pmf[n] = BigRational(counts[n_max + m - 1], denom);
        std::fill(next.begin(), next.end(), BigInt(0));
        for (long idx = 0; idx < width; ++idx) {
            if (counts[idx].is_zero()) continue;
            if (idx > 0) next[idx - 1] += counts[idx];
            if (idx + 1 < width) next[idx + 1] += counts[idx];  // idx+1 == width would hit m
        }
        counts.swap(next);
    }
    return table;
}

BigRational lemma41_partial(long m, long l_max) {
    if (m < 1 || l_max < 0) throw argument_error("lemma41_partial needs m >= 1, l_max >= 0");
    return pi1_interval(l_max + 1, m);
}

StirlingBounds stirling_bounds_check(long l, long m) {
    if (l < 1 || m < 1) throw argument_error("stirling bounds need l >= 1, m >= 1");
    BigRational t = catalan_term(l, m);
    const double l32 = std::pow(static_cast<double>(l), 1.5);
    const double lower = std::pow(2.0, static_cast<double>(-m)) / (3.0 * std::sqrt(6.0)) / l32;
    const double upper = 0.5 * static_cast<double>(m) *
                         std::exp(-static_cast<double>(m) * static_cast<double>(m) /
                                  (2.0 * static_cast<double>(m + l))) /
                         l32;
    const double value = t.convert_to<double>();
    if (!(lower <= value && value <= upper))
        throw invariant_error("Stirling bracket violated at l=" + std::to_string(l) +
                              ", m=" + std::to_string(m));
    return {lower, std::move(t), upper};
}

double catalan_term_fp(long l, long m) {
    if (l < 0 || m < 1) throw argument_error("catalan_term_fp needs l >= 0, m >= 1");
    if (l == 0) return std::pow(0.5, static_cast<double>(m));
    // t = 2^{-(2l+m)} Gamma(2l+m) m / (Gamma(l+1) Gamma(l+m+1))
    const double lg = -(2.0 * l + m) * std::log(2.0) + std::lgamma(2.0 * l + m) +
                      std::log(static_cast<double>(m)) - std::lgamma(l + 1.0) -
                      std::lgamma(l + m + 1.0);
    return std::exp(lg);
}

double pi1_interval_fp(long i, long m) {
    if (i < 1 || m < 1) throw argument_error("pi1_interval_fp needs i >= 1, m >= 1");
    double t = std::pow(0.5, static_cast<double>(m));
    KahanSum sum;
    sum.add(t);
    for (long l = 1; l < i; ++l) {
        t = advance_term_fp(t, l - 1, m);
        sum.add(t);
    }
    return sum.sum;
}

double pi1_deficit_fp(long i, long m) {
    if (i < 1 || m < 1) throw argument_error("pi1_deficit_fp needs i >= 1, m >= 1");
    const long cutoff = std::max<long>(256 * i, 1'000'000);
    double t = catalan_term_fp(i, m);
    KahanSum sum;
    long l = i;
    for (; l < cutoff; ++l) {
        sum.add(t);
        t = advance_term_fp(t, l, m);
    }
    // Tail beyond the cutoff: t(l) ~ c l^{-3/2}, so sum_{l>=T} t(l) is c times
    // the Hurwitz tail 2 T^{-1/2} + T^{-3/2}/2 + T^{-5/2}/8 + ...
    const double T = static_cast<double>(l);
    const double c = t * std::pow(T, 1.5);
    sum.add(c * (2.0 / std::sqrt(T) + 0.5 * std::pow(T, -1.5) + 0.125 * std::pow(T, -2.5)));
    return sum.sum;
}

std::vector<std::pair<long, double>> theorem2_constant(long m, const std::vector<long>& i_list) {
    std::vector<std::pair<long, double>> rows;
    rows.reserve(i_list.size());
    for (long i : i_list)
        rows.emplace_back(i, pi1_deficit_fp(i, m) * std::sqrt(static_cast<double>(i)));
    return rows;
}

double first_order_minus_moment(int length) {
    if (length < 1) throw argument_error("L must be >= 1");
    // ray_weight[l] = pi1_interval(l, L-l) for l = 1..L-1, collected while the
    // interval part accumulates per-m partial sums.
    std::vector<double> ray_weight(static_cast<std::size_t>(length), 0.0);
    KahanSum intervals;
    for (long m = 1; m <= length - 1; ++m) {
        double t = std::pow(0.5, static_cast<double>(m));
        KahanSum partial;
        for (long i = 1; i <= length - m; ++i) {
            partial.add(t);                   // partial = pi1_interval(i, m)
            intervals.add(m * partial.sum);
            t = advance_term_fp(t, i - 1, m);
        }
        ray_weight[length - m] = partial.sum;  // i = L - m term: pi1_interval(L-m, m)
    }
    KahanSum rays;
    double prefix = 0.0;
    for (long i = 1; i <= length; ++i) {
        if (i <= length - 1) prefix += ray_weight[i];
        double ray = prefix + (i == length ? 1.0 : 0.0);
        rays.add(static_cast<double>(length + 1 - i) * ray);
    }
    return intervals.sum + rays.sum;
}

}  // namespace spinchain
