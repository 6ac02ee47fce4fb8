#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <z2rank/bit_matrix.hpp>
#include <z2rank/linear_system.hpp>

#include "oracles.hpp"

using namespace z2rank;

TEST_CASE("rank of the running 3x3 examples") {
    CHECK(rank(oracle::a1()) == 0);
    CHECK(rank(oracle::a2()) == 1);
    // a3 has equal first and third columns, hence rank 2; cross-checked
    // against the column-sum oracle below.
    CHECK(rank(oracle::a3()) == 2);
    CHECK(rank(oracle::a3()) == oracle::rank_by_column_sums(oracle::a3()));
    CHECK(rank(oracle::a4()) == 3);
    CHECK(rank(BitMatrix::identity(7)) == 7);
    CHECK(rank(BitMatrix()) == 0);
}

TEST_CASE("rank of the 3x4 examples") {
    CHECK(rank(BitMatrix(3, 4)) == 0);
    CHECK(rank(BitMatrix::from_strings({"1111", "1111", "1111"})) == 1);
    CHECK(rank(BitMatrix::from_strings({"1110", "1010", "1111"})) == 3);
    CHECK(rank(BitMatrix::from_strings({"0111", "0011", "1001"})) == 3);
}

TEST_CASE("rank matches the column-sum oracle on random matrices") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        const BitMatrix m = BitMatrix::random(r, c, rng);
        CAPTURE(format_matrix(m));
        CHECK(rank(m) == oracle::rank_by_column_sums(m));
    }
}

TEST_CASE("rank equals rank of the transpose") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const BitMatrix m = BitMatrix::random(1 + rng() % 9, 1 + rng() % 9, rng);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("rank is subadditive") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
        const BitMatrix p = BitMatrix::random(r, c, rng);
        const BitMatrix q = BitMatrix::random(r, c, rng);
        CHECK(rank(p + q) <= rank(p) + rank(q));
    }
}

TEST_CASE("rank_le on the fixed examples") {
    CHECK_FALSE(rank_le(oracle::a4(), 2));
    CHECK(rank_le(oracle::a2(), 1));
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + rng() % 8;
        CHECK(rank_le(BitMatrix::random(n, n, rng), n));
    }
}

TEST_CASE("rank_le agrees with rank exhaustively for small shapes") {
    for (std::size_t rows = 1; rows <= 4; ++rows)
        for (std::size_t cols = 1; cols <= 4; ++cols) {
            if (rows * cols > 12) continue;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (rows * cols)); ++mask) {
                const BitMatrix m = oracle::matrix_from_mask(rows, cols, mask);
                const std::size_t r = rank(m);
                for (std::size_t k = 0; k <= std::min(rows, cols) + 1; ++k)
                    CHECK(rank_le(m, k) == (r <= k));
            }
        }
    // shapes not covered by the square-ish loop
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << 12); ++mask) {
        const BitMatrix m = oracle::matrix_from_mask(2, 6, mask);
        const std::size_t r = rank(m);
        for (std::size_t k = 0; k <= 3; ++k)
            CHECK(rank_le(m, k) == (r <= k));
    }
}

TEST_CASE("rank_le agrees with rank on random larger instances") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const BitMatrix m = BitMatrix::random(10 + rng() % 20, 10 + rng() % 20, rng);
        const std::size_t r = rank(m);
        for (std::size_t k : {r - 1, r, r + 1})
            if (k + 1 > 0) CHECK(rank_le(m, k) == (r <= k));
    }
}

TEST_CASE("determinant and degeneracy") {
    CHECK(det(BitMatrix::from_strings({"11", "01"})) == 1);
    CHECK(det(oracle::a4()) == 1);
    CHECK_FALSE(is_degenerate(oracle::a4()));
    for (std::size_t n = 1; n <= 4; ++n) CHECK(is_degenerate(BitMatrix(n, n)));
    CHECK(det(BitMatrix()) == 1); // 0x0 is non-degenerate by convention
    CHECK_THROWS_AS(det(BitMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("2x2 determinant is ad + bc for all 16 instances") {
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        const BitMatrix m = oracle::matrix_from_mask(2, 2, mask);
        const int a = m.get(0, 0), b = m.get(0, 1), c = m.get(1, 0), d = m.get(1, 1);
        CHECK(det(m) == ((a & d) ^ (b & c)));
    }
}

TEST_CASE("determinant equals the permutation-sum formula for n <= 4") {
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
            const BitMatrix m = oracle::matrix_from_mask(n, n, mask);
            CHECK(det(m) == oracle::det_permutation_sum(m));
        }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << 16); ++mask) {
        const BitMatrix m = oracle::matrix_from_mask(4, 4, mask);
        CHECK(det(m) == oracle::det_permutation_sum(m));
    }
}

TEST_CASE("square matrix degenerate iff rank below side, exhaustively") {
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
            const BitMatrix m = oracle::matrix_from_mask(n, n, mask);
            CHECK(is_degenerate(m) == (rank(m) < n));
        }
}

TEST_CASE("reduce_to_diagonal") {
    SECTION("identity is already diagonal") {
        auto [d, ops] = reduce_to_diagonal(BitMatrix::identity(4));
        CHECK(d == BitMatrix::identity(4));
        CHECK(ops.empty());
    }
    SECTION("all-ones 3x3 reduces to a rank-1 diagonal") {
        auto [d, ops] = reduce_to_diagonal(oracle::a2());
        std::size_t ones = 0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                if (i != j) CHECK_FALSE(d.get(i, j));
                ones += d.get(i, j);
            }
        CHECK(ones == rank(oracle::a2()));
        CHECK(replay(ops, oracle::a2()) == d);
    }
    SECTION("random matrices: diagonal, rank-preserving, replayable") {
        std::mt19937_64 rng(6);
        for (int t = 0; t < 50; ++t) {
            const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
            const BitMatrix m = BitMatrix::random(r, c, rng);
            auto [d, ops] = reduce_to_diagonal(m);
            std::size_t ones = 0;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) {
                    if (i != j) CHECK_FALSE(d.get(i, j));
                    ones += d.get(i, j);
                }
            CHECK(ones == rank(m));
            CHECK(replay(ops, m) == d);
        }
    }
}

TEST_CASE("elementary operations preserve rank and degeneracy") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + rng() % 6;
        const BitMatrix m = BitMatrix::random(n, n, rng);
        std::vector<ElementaryOp> ops;
        for (int s = 0; s < 12; ++s) {
            const auto kind = static_cast<ElementaryOp::Kind>(rng() % 4);
            std::size_t a = rng() % n, b = rng() % n;
            if (a == b) b = (b + 1) % n;
            ops.push_back({kind, a, b});
        }
        const BitMatrix r = replay(ops, m);
        CHECK(rank(r) == rank(m));
        CHECK(is_degenerate(r) == is_degenerate(m));
    }
}

TEST_CASE("solve_linear_system") {
    SECTION("identity system") {
        const BitVector b = BitVector::from_string("1011");
        const auto s = solve_linear_system(BitMatrix::identity(4), b);
        REQUIRE(s);
        CHECK(s->particular == b);
        CHECK(s->kernel_basis.empty());
    }
    SECTION("zero system has a full kernel") {
        const auto s = solve_linear_system(BitMatrix(3, 5), BitVector(3));
        REQUIRE(s);
        CHECK(s->particular == BitVector(5));
        CHECK(s->kernel_basis.size() == 5);
    }
    SECTION("the worked 2x2 example, against full enumeration") {
        const BitMatrix a = BitMatrix::from_strings({"11", "00"});
        const auto s = solve_linear_system(a, BitVector::from_string("10"));
        REQUIRE(s);
        CHECK(s->particular == BitVector::from_string("10"));
        REQUIRE(s->kernel_basis.size() == 1);
        CHECK(s->kernel_basis[0] == BitVector::from_string("11"));
        // enumerate all four candidate vectors: Ax = (x0+x1, 0)
        std::set<std::string> expect, got;
        for (int x = 0; x < 4; ++x) {
            BitVector v(2);
            v.set(0, x & 1);
            v.set(1, x & 2);
            if (v.get(0) != v.get(1)) expect.insert(v.to_string());
        }
        BitVector coeff(1);
        got.insert(s->member(coeff).to_string());
        coeff.set(0, true);
        got.insert(s->member(coeff).to_string());
        CHECK(expect == got);
    }
    SECTION("infeasible system") {
        const BitMatrix a = BitMatrix::from_strings({"11", "11"});
        CHECK_FALSE(solve_linear_system(a, BitVector::from_string("10")));
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(solve_linear_system(BitMatrix(2, 2), BitVector(3)),
                        std::invalid_argument);
    }
    SECTION("members verify by re-substitution on random systems") {
        std::mt19937_64 rng(8);
        for (int t = 0; t < 100; ++t) {
            const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
            const BitMatrix a = BitMatrix::random(r, c, rng);
            BitVector b(r);
            for (std::size_t i = 0; i < r; ++i) b.set(i, rng() & 1);
            const auto s = solve_linear_system(a, b);
            std::set<std::string> brute;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c); ++mask) {
                BitVector x(c);
                for (std::size_t i = 0; i < c; ++i) x.set(i, (mask >> i) & 1);
                BitVector ax(r);
                for (std::size_t i = 0; i < r; ++i)
                    ax.set(i, BitVector::dot(a.row(i), x));
                if (ax == b) brute.insert(x.to_string());
            }
            if (!s) {
                CHECK(brute.empty());
                continue;
            }
            std::set<std::string> members;
            const std::size_t d = s->kernel_basis.size();
            REQUIRE(d <= 12);
            // kernel basis vectors are linearly independent
            BitMatrix stacked(d, c);
            for (std::size_t i = 0; i < d; ++i) stacked.set_row(i, s->kernel_basis[i]);
            CHECK(rank(stacked) == d);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
                BitVector coeff(d);
                for (std::size_t i = 0; i < d; ++i) coeff.set(i, (mask >> i) & 1);
                members.insert(s->member(coeff).to_string());
            }
            CHECK(members == brute);
        }
    }
}

TEST_CASE("word-boundary widths behave like any other width") {
    std::mt19937_64 rng(10);
    for (std::size_t c : {63, 64, 65, 127, 128, 129}) {
        const BitMatrix m = BitMatrix::random(40, c, rng);
        CHECK(rank(m) == rank(m.transpose()));
        CHECK(parse_matrix(format_matrix(m)) == m);
        CHECK(rank_le(m, rank(m)));
        CHECK_FALSE(rank_le(m, rank(m) - 1));
        auto [d, ops] = reduce_to_diagonal(m);
        std::size_t ones = 0;
        for (std::size_t i = 0; i < 40; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                if (i != j) CHECK_FALSE(d.get(i, j));
                ones += d.get(i, j);
            }
        CHECK(ones == rank(m));
        CHECK(replay(ops, m) == d);
        // solutions verify by re-substitution
        BitVector b(40);
        for (std::size_t i = 0; i < 40; ++i) b.set(i, rng() & 1);
        if (const auto s = solve_linear_system(m, b)) {
            auto apply = [&](const BitVector& x) {
                BitVector ax(40);
                for (std::size_t i = 0; i < 40; ++i)
                    ax.set(i, BitVector::dot(m.row(i), x));
                return ax;
            };
            CHECK(apply(s->particular) == b);
            for (const BitVector& kv : s->kernel_basis)
                CHECK(apply(kv).none());
        }
    }
}

TEST_CASE("matrix text format") {
    SECTION("round trip") {
        std::mt19937_64 rng(9);
        const BitMatrix m = BitMatrix::random(5, 9, rng);
        CHECK(parse_matrix(format_matrix(m)) == m);
    }
    SECTION("spaces, comments and blank lines") {
        const BitMatrix m = parse_matrix("# comment\n0 1 1\n\n0 0 1\n1 0 0\n");
        CHECK(m == oracle::a4());
    }
    SECTION("ragged rows rejected") {
        CHECK_THROWS_AS(parse_matrix("01\n011\n"), format_error);
    }
    SECTION("bad characters rejected") {
        CHECK_THROWS_AS(parse_matrix("01\n0x\n"), format_error);
    }
    SECTION("empty input is the 0x0 matrix") {
        const BitMatrix m = parse_matrix("# nothing\n\n");
        CHECK(m.n_rows() == 0);
        CHECK(m.n_cols() == 0);
    }
}
