#include <doctest.h>

#include <spinchain/catalan.hpp>
#include <spinchain/errors.hpp>

#include <cmath>

using namespace spinchain;

TEST_SUITE("catalan") {

TEST_CASE("triangle entries") {
    for (long n = 0; n <= 20; ++n) CHECK(catalan_triangle(n, 0) == 1);
    CHECK(catalan_triangle(3, 2) == 5);
    CHECK(catalan_triangle(4, 2) == 9);
    // The diagonal runs through the Catalan numbers.
    const long catalans[] = {1, 1, 2, 5, 14, 42, 132, 429};
    for (long n = 0; n <= 7; ++n) CHECK(catalan_triangle(n, n) == catalans[n]);
    CHECK_THROWS_AS(catalan_triangle(3, 4), argument_error);
    CHECK_THROWS_AS(catalan_triangle(-1, 0), argument_error);
}

TEST_CASE("catalan terms against the triangle") {
    for (long m = 1; m <= 6; ++m) {
        CHECK(catalan_term(0, m) == BigRational(BigInt(1), BigInt(1) << m));
        for (long l = 1; l <= 30; ++l) {
            BigRational direct(catalan_triangle(l + m - 1, l), BigInt(1) << (2 * l + m));
            CHECK(catalan_term(l, m) == direct);
        }
    }
}

TEST_CASE("pi1 interval closed values") {
    for (long m = 1; m <= 10; ++m)
        CHECK(pi1_interval(1, m) == BigRational(BigInt(1), BigInt(1) << m));
    CHECK(pi1_interval(2, 1) == BigRational(5, 8));
    CHECK(pi1_interval(3, 1) == BigRational(11, 16));
}

TEST_CASE("pi1 ray closed values and monotonicity") {
    CHECK(pi1_ray(1, 2) == BigRational(1, 2));
    CHECK(pi1_ray(2, 3) == BigRational(7, 8));
    const long L = 8;
    BigRational prev = 0;
    for (long i = 1; i <= L; ++i) {
        BigRational cur = pi1_ray(i, L);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK_THROWS_AS(pi1_ray(0, 4), argument_error);
    CHECK_THROWS_AS(pi1_ray(5, 4), argument_error);
}

TEST_CASE("first-passage oracle basics") {
    FirstPassageTable t1 = srw_first_passage(1, 9);
    CHECK(t1.prob_at(1) == BigRational(1, 2));
    CHECK(t1.prob_at(3) == BigRational(1, 8));
    FirstPassageTable t2 = srw_first_passage(2, 10);
    CHECK(t2.prob_at(4) == BigRational(1, 8));
    // Zero off the parity/support lattice, partial sums below one.
    for (long n = 0; n <= 10; ++n) {
        if (n < 2 || n % 2 != 0) CHECK(t2.prob_at(n) == 0);
    }
    CHECK(t2.cdf_strictly_below(11) < 1);
    CHECK(t2.cdf_strictly_below(11) > 0);
}

TEST_CASE("duality: catalan terms are the first-passage pmf (m <= 4, l <= 30)") {
    for (long m = 1; m <= 4; ++m) {
        FirstPassageTable table = srw_first_passage(m, 2 * 30 + m);
        for (long l = 0; l <= 30; ++l)
            CHECK(catalan_term(l, m) == table.prob_at(2 * l + m));
    }
}

TEST_CASE("partial sums equal the first-passage cdf (duality, summed)") {
    for (long m : {1L, 2L, 5L}) {
        FirstPassageTable table = srw_first_passage(m, 2 * 20 + m);
        for (long i = 1; i <= 20; ++i)
            CHECK(lemma41_partial(m, i - 1) == table.cdf_strictly_below(2 * i + m));
    }
}

TEST_CASE("lemma 4.1 partial sums: values, monotone growth, bound") {
    CHECK(lemma41_partial(1, 0) == BigRational(1, 2));
    CHECK(lemma41_partial(1, 2) == BigRational(11, 16));
    BigRational prev = 0;
    for (long lmax = 0; lmax <= 200; lmax += 10) {
        BigRational cur = lemma41_partial(2, lmax);
        CHECK(cur > prev);
        CHECK(cur < 1);
        prev = cur;
    }
    // The tail is Theta(l^{-1/2}): about m/sqrt(pi l). With m = 3 the 400-term
    // sum sits near 0.916; pushing past m^2 10^4 / pi crosses 0.99.
    BigRational p400 = lemma41_partial(3, 400);
    CHECK(p400 > BigRational(90, 100));
    CHECK(p400 < BigRational(93, 100));
    CHECK(lemma41_partial(1, 3200).convert_to<double>() > 0.99);
}

TEST_CASE("stirling bracket") {
    StirlingBounds b = stirling_bounds_check(1, 1);
    CHECK(b.value == BigRational(1, 8));
    CHECK(b.upper == doctest::Approx(0.5 * std::exp(-0.25)));
    CHECK(b.lower == doctest::Approx(0.5 / (3 * std::sqrt(6.0))));
    StirlingBounds far = stirling_bounds_check(100, 2);
    double scaled = far.value.convert_to<double>() * std::pow(100.0, 1.5);
    CHECK(scaled >= 0.25 / (3 * std::sqrt(6.0)));
    CHECK(scaled <= 1.0);
    for (long l : {1L, 2L, 5L, 17L, 60L, 100L})
        for (long m = 1; m <= 10; ++m) CHECK_NOTHROW(stirling_bounds_check(l, m));
}

TEST_CASE("floating engines agree with the exact rationals") {
    for (long m : {1L, 2L, 3L, 7L}) {
        for (long l : {0L, 1L, 10L, 100L, 2000L}) {
            double exact_to_double =
                m + l <= 400 ? catalan_term(l, m).convert_to<double>() : -1.0;
            if (exact_to_double >= 0.0)
                CHECK(catalan_term_fp(l, m) ==
                      doctest::Approx(exact_to_double).epsilon(1e-12));
        }
        for (long i : {1L, 7L, 60L, 500L}) {
            CHECK(pi1_interval_fp(i, m) ==
                  doctest::Approx(pi1_interval(i, m).convert_to<double>()).epsilon(1e-12));
        }
        for (long i : {10L, 100L, 1000L}) {
            double deficit = pi1_deficit_fp(i, m);
            double exact = 1.0 - pi1_interval(i, m).convert_to<double>();
            CHECK(deficit == doctest::Approx(exact).epsilon(1e-6));
        }
    }
}

TEST_CASE("the scaled deficit stabilizes like a constant over sqrt(i)") {
    auto rows = theorem2_constant(1, {1000, 4000, 16000});
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double rel = std::abs(rows[i].second - rows[i - 1].second) / rows[i - 1].second;
        CHECK(rel < 0.05);
    }
    for (const auto& [i, v] : rows) CHECK(v > 0.0);  // deficit positive at any finite i
}

TEST_CASE("interval weights obey the 4 m exp(-m^2/(2(m+i))) bound (spot grid)") {
    for (long m = 1; m <= 12; ++m) {
        for (long i : {1L, 10L, 100L, 1000L}) {
            double bound = 4.0 * m * std::exp(-(double)m * m / (2.0 * (m + i)));
            CHECK(pi1_interval_fp(i, m) <= bound);
        }
    }
}

TEST_CASE("first-order minus moment equals the rational double sum (L <= 12)") {
    for (int L : {1, 2, 3, 6, 9, 12}) {
        BigRational total = 0;
        for (long i = 1; i + 1 <= L; ++i)
            for (long m = 1; i + m <= L; ++m) total += m * pi1_interval(i, m);
        for (long i = 1; i <= L; ++i) total += (L + 1 - i) * pi1_ray(i, L);
        CHECK(first_order_minus_moment(L) ==
              doctest::Approx(total.convert_to<double>()).epsilon(1e-12));
    }
}

}  // TEST_SUITE
