#include <doctest.h>

#include <spinchain/errors.hpp>
#include <spinchain/kernels.hpp>

#include <cmath>
#include <deque>
#include <sstream>

using namespace spinchain;

namespace {

double entry_weight(const KernelRow& row, int site) {
    for (const auto& e : row.entries)
        if (e.site == site) return e.weight;
    return 0.0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("hamiltonian") {
    const double J = 1.3;
    CHECK(hamiltonian({3, J, Boundary::Empty}, SpinConfig::from_string("+++")) ==
          doctest::Approx(-2 * J));
    CHECK(hamiltonian({3, J, Boundary::Empty}, SpinConfig::from_string("+-+")) ==
          doctest::Approx(2 * J));
    CHECK(hamiltonian({3, J, Boundary::Plus}, SpinConfig::from_string("+++")) ==
          doctest::Approx(-4 * J));
}

TEST_CASE("irreversible row entries against the closed form") {
    const double J = 0.9;
    ModelParams plus{2, J, Boundary::Plus};
    CHECK(entry_weight(kernel_row(KernelKind::Irreversible, plus,
                                  SpinConfig::from_string("-+")), 1) == doctest::Approx(0.5));
    CHECK(entry_weight(kernel_row(KernelKind::Irreversible, plus,
                                  SpinConfig::from_string("++")), 2) ==
          doctest::Approx(std::exp(-4 * J) / 2));
    // Empty boundary: site 1 sees sigma_0 = 0, so e^{-2J}/L both ways.
    ModelParams empty{2, J, Boundary::Empty};
    CHECK(entry_weight(kernel_row(KernelKind::Irreversible, empty,
                                  SpinConfig::from_string("-+")), 1) ==
          doctest::Approx(std::exp(-2 * J) / 2));
    CHECK(entry_weight(kernel_row(KernelKind::Irreversible, empty,
                                  SpinConfig::from_string("++")), 1) ==
          doctest::Approx(std::exp(-2 * J) / 2));
}

TEST_CASE("delta-p row at the all-plus state") {
    ModelParams p{4, 1.1, Boundary::Plus};
    KernelRow row = kernel_row(KernelKind::DeltaP, p, SpinConfig::all_plus(4));
    CHECK(row.entries.size() == 4);
    for (const auto& e : row.entries) CHECK(e.weight == doctest::Approx(0.25));
    CHECK(row.diagonal == doctest::Approx(-1.0));
    CHECK(row.diagonal + row.off_diagonal_sum() == doctest::Approx(0.0));
}

TEST_CASE("plus-only kernels reject the empty boundary") {
    ModelParams empty{3, 1.0, Boundary::Empty};
    CHECK_THROWS_AS(kernel_row(KernelKind::ZeroTemperature, empty, SpinConfig::all_plus(3)),
                    contract_error);
    CHECK_THROWS_AS(assemble(KernelKind::DeltaP, empty), contract_error);
}

TEST_CASE("assemble: zero-temperature chain of one site") {
    SparseKernel m = assemble(KernelKind::ZeroTemperature, {1, 2.0, Boundary::Plus});
    REQUIRE(m.rows.size() == 2);
    CHECK(m.rows[0].entries.size() == 1);   // minus flips to plus w.p. 1
    CHECK(m.rows[0].entries[0].weight == doctest::Approx(1.0));
    CHECK(m.rows[0].diagonal == doctest::Approx(0.0));
    CHECK(m.rows[1].entries.empty());       // all-plus is absorbing
    CHECK(m.rows[1].diagonal == doctest::Approx(1.0));
}

TEST_CASE("row sums: stochastic kernels to 1, delta-p to 0 (exhaustive L <= 12)") {
    for (int L : {1, 2, 3, 5, 8, 12}) {
        for (double J : {0.0, 0.7, 2.0}) {
            for (Boundary bc : {Boundary::Empty, Boundary::Plus}) {
                ModelParams p{L, J, bc};
                for (KernelKind kind : {KernelKind::Irreversible, KernelKind::Glauber,
                                        KernelKind::ZeroTemperature, KernelKind::DeltaP}) {
                    if (bc == Boundary::Empty && (kind == KernelKind::ZeroTemperature ||
                                                  kind == KernelKind::DeltaP))
                        continue;
                    const double expected = kind == KernelKind::DeltaP ? 0.0 : 1.0;
                    KernelCoeffs c = KernelCoeffs::make(kind, p);
                    for (std::uint64_t idx = 0; idx < (1ull << L); ++idx) {
                        double sum = row_diagonal(c, idx);
                        for_each_transition(
                            c, idx, [&](int, std::uint64_t, double w) { sum += w; });
                        CHECK(std::abs(sum - expected) <= 1e-14);
                    }
                }
            }
        }
    }
}

TEST_CASE("decomposition P = P0 + e^{-4J} DeltaP, entrywise (L <= 12)") {
    for (int L : {1, 2, 4, 7, 10, 12}) {
        for (double J : {0.5, 1.0, 2.0}) {
            ModelParams p{L, J, Boundary::Plus};
            const double eps = p.epsilon();
            KernelCoeffs ci = KernelCoeffs::make(KernelKind::Irreversible, p);
            KernelCoeffs c0 = KernelCoeffs::make(KernelKind::ZeroTemperature, p);
            KernelCoeffs cd = KernelCoeffs::make(KernelKind::DeltaP, p);
            for (std::uint64_t idx = 0; idx < (1ull << L); ++idx) {
                for (int site = 1; site <= L; ++site) {
                    double a = detail::flip_weight_bits(ci, idx, site);
                    double b = detail::flip_weight_bits(c0, idx, site) +
                               eps * detail::flip_weight_bits(cd, idx, site);
                    CHECK(std::abs(a - b) <= 1e-15);
                }
                double da = row_diagonal(ci, idx);
                double db = row_diagonal(c0, idx) + eps * row_diagonal(cd, idx);
                CHECK(std::abs(da - db) <= 1e-14);
            }
        }
    }
}

TEST_CASE("the irreversible plus diagonal equals 1 - l/L - (1 - l/L) e^{-4J}") {
    for (int L : {1, 3, 6, 10}) {
        for (double J : {0.4, 1.0, 2.5}) {
            ModelParams p{L, J, Boundary::Plus};
            KernelCoeffs c = KernelCoeffs::make(KernelKind::Irreversible, p);
            for (std::uint64_t idx = 0; idx < (1ull << L); ++idx) {
                const double frac =
                    static_cast<double>(left_antiparallel_count_bits(idx, L)) / L;
                const double closed = 1.0 - frac - (1.0 - frac) * p.epsilon();
                CHECK(std::abs(row_diagonal(c, idx) - closed) <= 1e-15);
            }
        }
    }
}

TEST_CASE("all-plus is absorbing for P0 and reachable from everywhere (L <= 12)") {
    for (int L : {2, 5, 9, 12}) {
        ModelParams p{L, 1.0, Boundary::Plus};
        KernelCoeffs c = KernelCoeffs::make(KernelKind::ZeroTemperature, p);
        const std::uint64_t n = 1ull << L;
        const std::uint64_t top = n - 1;
        CHECK(row_diagonal(c, top) == doctest::Approx(1.0));
        int top_entries = 0;
        for_each_transition(c, top, [&](int, std::uint64_t, double) { ++top_entries; });
        CHECK(top_entries == 0);

        // Backward BFS over P0 edges.
        std::vector<char> reached(n, 0);
        std::deque<std::uint64_t> queue{top};
        reached[top] = 1;
        while (!queue.empty()) {
            std::uint64_t tau = queue.front();
            queue.pop_front();
            for (std::uint64_t src = 0; src < n; ++src) {
                if (reached[src]) continue;
                bool hits = false;
                for_each_transition(c, src, [&](int, std::uint64_t target, double) {
                    if (target == tau) hits = true;
                });
                if (hits) {
                    reached[src] = 1;
                    queue.push_back(src);
                }
            }
        }
        for (std::uint64_t idx = 0; idx < n; ++idx) CHECK(reached[idx] == 1);
    }
}

TEST_CASE("sum of |DeltaP| over a row is 2(1 - l/L) (exhaustive L <= 12)") {
    for (int L : {1, 4, 8, 12}) {
        ModelParams p{L, 0.8, Boundary::Plus};
        KernelCoeffs c = KernelCoeffs::make(KernelKind::DeltaP, p);
        for (std::uint64_t idx = 0; idx < (1ull << L); ++idx) {
            double abs_sum = std::abs(row_diagonal(c, idx));
            for_each_transition(c, idx,
                                [&](int, std::uint64_t, double w) { abs_sum += std::abs(w); });
            const double expected =
                2.0 * (1.0 - static_cast<double>(left_antiparallel_count_bits(idx, L)) / L);
            CHECK(std::abs(abs_sum - expected) <= 1e-14);
        }
    }
}

TEST_CASE("flip_acceptance matches row weights times L") {
    ModelParams p{5, 1.2, Boundary::Plus};
    for (KernelKind kind : {KernelKind::Irreversible, KernelKind::Glauber,
                            KernelKind::ZeroTemperature, KernelKind::DeltaP}) {
        for (std::uint64_t idx : {0ull, 9ull, 21ull, 31ull}) {
            SpinConfig sigma = SpinConfig::from_index(5, idx);
            KernelRow row = kernel_row(kind, p, sigma);
            for (int site = 1; site <= 5; ++site)
                CHECK(flip_acceptance(kind, p, sigma, site) ==
                      doctest::Approx(entry_weight(row, site) * 5).epsilon(1e-14));
        }
    }
}

TEST_CASE("triplet dump carries the header and every nonzero") {
    SparseKernel m = assemble(KernelKind::Irreversible, {2, 1.0, Boundary::Plus});
    std::ostringstream os;
    m.dump(os);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "# L=2 J=1 bc=plus kind=irreversible");
    int triplets = 0;
    std::uint64_t src, dst;
    double w;
    while (in >> src >> dst >> w) {
        ++triplets;
        CHECK(w != 0.0);
    }
    CHECK(triplets == 12);  // 4 diagonals + 8 single-flip entries at J < inf
}

TEST_CASE("assemble caps the length") {
    CHECK_THROWS_AS(assemble(KernelKind::Irreversible, {31, 1.0, Boundary::Plus}),
                    resource_error);
}

}  // TEST_SUITE
