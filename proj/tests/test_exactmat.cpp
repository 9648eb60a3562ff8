#include "slnz/exactmat.hpp"
#include "slnz/subgroups.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace slnz;

namespace {

SLMatrix random_word(int n, int len, std::mt19937_64& rng) {
    auto gens = elementary_generators(n);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    SLMatrix m = SLMatrix::identity(n);
    for (int i = 0; i < len; ++i) m = m * gens[pick(rng)];
    return m;
}

}  // namespace

TEST_CASE("product of identities is the identity") {
    auto i3 = SLMatrix::identity(3);
    REQUIRE(i3 * i3 == i3);
}

TEST_CASE("product of elementary matrices places both unit entries") {
    auto prod = elementary(3, 1, 2, 1) * elementary(3, 1, 3, 1);
    REQUIRE(prod(0, 1) == 1);
    REQUIRE(prod(0, 2) == 1);
    for (int i = 0; i < 3; ++i) REQUIRE(prod(i, i) == 1);
    REQUIRE(prod(1, 0) == 0);
    REQUIRE(prod(2, 0) == 0);
    REQUIRE(prod(2, 1) == 0);
    REQUIRE(prod(1, 2) == 0);
}

TEST_CASE("the three-factor rotation word in SL_2") {
    auto w = elementary(2, 1, 2, 1) * elementary(2, 2, 1, -1) * elementary(2, 1, 2, 1);
    REQUIRE(w(0, 0) == 0);
    REQUIRE(w(0, 1) == 1);
    REQUIRE(w(1, 0) == -1);
    REQUIRE(w(1, 1) == 0);
    REQUIRE(w == s_matrix(2, 1, 2));
}

TEST_CASE("dimension mismatch is rejected") {
    REQUIRE_THROWS_AS(SLMatrix::identity(2) * SLMatrix::identity(3), std::invalid_argument);
}

TEST_CASE("inverse of unipotent powers negates the off-diagonal entry") {
    REQUIRE(SLMatrix::identity(4).inverse() == SLMatrix::identity(4));
    for (int k : {-7, -1, 3, 25})
        REQUIRE(elementary(3, 1, 2, k).inverse() == elementary(3, 1, 2, -k));
}

TEST_CASE("inverse is exact and two-sided on random words") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = random_word(3, 12, rng);
        auto gi = g.inverse();
        REQUIRE(g * gi == SLMatrix::identity(3));
        REQUIRE(gi * g == SLMatrix::identity(3));
    }
}

TEST_CASE("determinants") {
    REQUIRE(IntMatrix::identity(5).det() == 1);
    IntMatrix d(2);
    d(0, 0) = 2;
    d(1, 1) = 3;
    REQUIRE(d.det() == 6);
    // zero pivot forces a row swap
    IntMatrix r(2);
    r(0, 1) = 1;
    r(1, 0) = -1;
    REQUIRE(r.det() == 1);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial)
        REQUIRE(random_word(4, 10, rng).mat().det() == 1);
}

TEST_CASE("SLMatrix construction validates the determinant") {
    IntMatrix bad(2);
    bad(0, 0) = 2;
    bad(1, 1) = 3;
    REQUIRE_THROWS_AS(SLMatrix(bad), std::invalid_argument);
}

TEST_CASE("elementary matrix construction") {
    auto e = elementary(3, 1, 2, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(e(i, j) == ((i == j) ? 1 : (i == 0 && j == 1) ? 1 : 0));
    REQUIRE(elementary(3, 1, 2, 0) == SLMatrix::identity(3));
    REQUIRE_THROWS_AS(elementary(3, 2, 2, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(elementary(3, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("elementary matrices form one-parameter subgroups") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coeff(-50, 50);
    for (int trial = 0; trial < 30; ++trial) {
        int a = coeff(rng), b = coeff(rng);
        REQUIRE(elementary(3, 2, 3, a) * elementary(3, 2, 3, b) == elementary(3, 2, 3, a + b));
    }
}

TEST_CASE("s-matrices permute the standard basis up to sign") {
    for (int n : {3, 4}) {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                auto s = s_matrix(n, i, j);
                // each column is ± a standard basis vector, swapped on {i, j}
                for (int col = 0; col < n; ++col) {
                    int expect_row = col;
                    if (col == i - 1) expect_row = j - 1;
                    if (col == j - 1) expect_row = i - 1;
                    for (int row = 0; row < n; ++row) {
                        if (row == expect_row)
                            REQUIRE((s(row, col) == 1 || s(row, col) == -1));
                        else
                            REQUIRE(s(row, col) == 0);
                    }
                }
                REQUIRE(s.pow(4) == SLMatrix::identity(n));
            }
        }
    }
}

TEST_CASE("s-matrix conjugation carries elementary to elementary") {
    for (int n : {3, 4}) {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                auto s = s_matrix(n, i, j);
                auto si = s.inverse();
                auto sigma = [&](int k) { return k == i ? j : k == j ? i : k; };
                for (int k = 1; k <= n; ++k) {
                    for (int l = 1; l <= n; ++l) {
                        if (k == l) continue;
                        auto conj = s * elementary(n, k, l, 1) * si;
                        bool plus = conj == elementary(n, sigma(k), sigma(l), 1);
                        bool minus = conj == elementary(n, sigma(k), sigma(l), -1);
                        REQUIRE((plus || minus));
                    }
                }
            }
        }
    }
}

TEST_CASE("mod reduction basics") {
    REQUIRE(SLMatrix::identity(3).mod_reduce(5).is_identity());
    REQUIRE(elementary(3, 1, 2, 5).mod_reduce(5).is_identity());
    REQUIRE_FALSE(elementary(3, 1, 2, 1).mod_reduce(5).is_identity());
    REQUIRE_THROWS_AS(SLMatrix::identity(3).mod_reduce(1), std::invalid_argument);
}

TEST_CASE("mod reduction is compatible across divisor levels") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_word(3, 10, rng);
        REQUIRE(g.mod_reduce(12).reduce(4) == g.mod_reduce(4));
        REQUIRE(g.mod_reduce(12).reduce(3) == g.mod_reduce(3));
    }
}

TEST_CASE("mod reduction is a homomorphism") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_word(3, 8, rng);
        auto b = random_word(3, 8, rng);
        REQUIRE((a * b).mod_reduce(7) == a.mod_reduce(7) * b.mod_reduce(7));
    }
}

TEST_CASE("residue entries are stored in canonical form") {
    auto m = elementary(3, 2, 1, -1).mod_reduce(5);
    REQUIRE(m(1, 0) == 4);
    REQUIRE(m.inverse() * m == ResidueMatrix::identity(3, 5));
}

TEST_CASE("packing round-trips residue matrices") {
    std::mt19937_64 rng(9);
    REQUIRE(ResidueMatrix::packable(3, 8));
    REQUIRE_FALSE(ResidueMatrix::packable(5, 1 << 20));
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_word(3, 9, rng).mod_reduce(8);
        REQUIRE(ResidueMatrix::unpack(3, 8, m.pack()) == m);
    }
}

TEST_CASE("entries grow without overflow") {
    // e_12^(2^200) has an entry far beyond any machine word.
    BigInt huge = BigInt(1) << 200;
    auto g = elementary(2, 1, 2, huge);
    REQUIRE(g * g == elementary(2, 1, 2, huge * 2));
    REQUIRE(g.inverse()(0, 1) == -huge);
    REQUIRE(g.mat().det() == 1);
}
