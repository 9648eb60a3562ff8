#include "slnz/subgroups.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace slnz;
using slnz::testutil::random_word;

TEST_CASE("copy membership patterns") {
    REQUIRE(is_in_copy(elementary(3, 2, 1, 1), CopySpec::column(1)));
    REQUIRE_FALSE(is_in_copy(elementary(3, 1, 2, 1), CopySpec::column(1)));
    REQUIRE(is_in_copy(elementary(3, 1, 2, 1), CopySpec::row(1)));
    for (int j = 1; j <= 3; ++j) {
        REQUIRE(is_in_copy(SLMatrix::identity(3), CopySpec::column(j)));
        REQUIRE(is_in_copy(SLMatrix::identity(3), CopySpec::row(j)));
    }
    // products of the copy generators stay in the copy
    auto v = elementary(4, 2, 1, 3) * elementary(4, 3, 1, -2) * elementary(4, 4, 1, 9);
    REQUIRE(is_in_copy(v, CopySpec::column(1)));
    REQUIRE_FALSE(is_in_copy(v, CopySpec::column(2)));
}

TEST_CASE("copy intersections") {
    auto c = copy_intersection(CopySpec::column(1), CopySpec::row(2));
    REQUIRE(c.cyclic);
    REQUIRE(c.i == 2);
    REQUIRE(c.j == 1);  // generated by e_21
    REQUIRE_FALSE(copy_intersection(CopySpec::column(1), CopySpec::column(2)).cyclic);
    REQUIRE_FALSE(copy_intersection(CopySpec::column(1), CopySpec::row(1)).cyclic);
    REQUIRE_FALSE(copy_intersection(CopySpec::row(1), CopySpec::row(3)).cyclic);
    REQUIRE_THROWS_AS(copy_intersection(CopySpec::column(1), CopySpec::column(1)),
                      std::invalid_argument);
}

TEST_CASE("cyclic intersection matches brute force on short products") {
    // elements of V_1 ∩ V_2^t within the radius-2 ball are exactly e_21^k
    auto ball = ball_enumerate(3, 2);
    auto inter = copy_intersection(CopySpec::column(1), CopySpec::row(2));
    REQUIRE(inter.cyclic);
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const auto& m = ball.elements[i];
        bool in_both = is_in_copy(m, CopySpec::column(1)) && is_in_copy(m, CopySpec::row(2));
        bool is_power = m == elementary(3, inter.i, inter.j, m(inter.i - 1, inter.j - 1));
        if (in_both) REQUIRE(is_power);
    }
    // distinct column copies share only the identity
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const auto& m = ball.elements[i];
        if (is_in_copy(m, CopySpec::column(1)) && is_in_copy(m, CopySpec::column(2)))
            REQUIRE(m == SLMatrix::identity(3));
        if (is_in_copy(m, CopySpec::column(1)) && is_in_copy(m, CopySpec::row(1)))
            REQUIRE(m == SLMatrix::identity(3));
    }
}

TEST_CASE("normalizer membership patterns") {
    // block matrix diag(eps, A) with eps = det A
    IntMatrix b(3);
    b(0, 0) = -1;         // eps
    b(1, 2) = 1;          // A = [[0,1],[1,0]], det -1
    b(2, 1) = 1;
    b(1, 0) = 5;          // arbitrary entries below eps
    b(2, 0) = -7;
    SLMatrix block{b};
    REQUIRE(is_in_normalizer(block, CopySpec::column(1)));
    REQUIRE(is_in_normalizer(elementary(3, 1, 2, 1), CopySpec::column(3)));
    REQUIRE_FALSE(is_in_normalizer(elementary(3, 3, 1, 1), CopySpec::column(3)));
    for (int j = 1; j <= 3; ++j) {
        REQUIRE(is_in_normalizer(SLMatrix::identity(3), CopySpec::column(j)));
        REQUIRE(is_in_normalizer(SLMatrix::identity(3), CopySpec::row(j)));
    }
}

TEST_CASE("normalizer pattern agrees with conjugation on balls, every copy") {
    auto ball = ball_enumerate(3, 2);
    for (int j = 1; j <= 3; ++j) {
        for (auto copy : {CopySpec::column(j), CopySpec::row(j)}) {
            auto rep = normalizer_brute_check(ball, copy);
            REQUIRE(rep.checked == ball.size());
            REQUIRE(rep.counterexamples.empty());
        }
    }
    auto rep0 = normalizer_brute_check(ball_enumerate(3, 0), CopySpec::column(2));
    REQUIRE(rep0.checked == 1);
    REQUIRE(rep0.counterexamples.empty());
    auto rep4 = normalizer_brute_check(ball_enumerate(4, 1), CopySpec::row(2));
    REQUIRE(rep4.counterexamples.empty());
}

TEST_CASE("copies sit inside the transverse normalizers") {
    for (int n : {3, 4}) {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                for (auto [a, b] : CopySpec::column(j).generators(n))
                    REQUIRE(is_in_normalizer(elementary(n, a, b, 1), CopySpec::row(i)));
                for (auto [a, b] : CopySpec::row(i).generators(n))
                    REQUIRE(is_in_normalizer(elementary(n, a, b, 1), CopySpec::column(j)));
            }
        }
    }
}

TEST_CASE("centralizer pattern examples") {
    auto e13 = elementary(3, 1, 3, 1);
    auto e12 = elementary(3, 1, 2, 1);
    REQUIRE(centralizes_elementary(e13, 1, 2, 1));
    REQUIRE(e13 * e12 == e12 * e13);
    auto e21 = elementary(3, 2, 1, 1);
    REQUIRE_FALSE(centralizes_elementary(e21, 1, 2, 1));
    REQUIRE_FALSE(e21 * e12 == e12 * e21);
    REQUIRE(centralizes_elementary(SLMatrix::identity(3), 1, 2, 5));
    REQUIRE_THROWS_AS(centralizes_elementary(e13, 1, 2, 0), std::invalid_argument);
}

TEST_CASE("centralizer pattern is equivalent to commuting, exhaustively at radius 2") {
    auto ball = ball_enumerate(3, 2);
    for (std::size_t idx = 0; idx < ball.size(); ++idx) {
        const auto& m = ball.elements[idx];
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                if (i == j) continue;
                for (int k = 1; k <= 2; ++k) {
                    auto e = elementary(3, i, j, k);
                    bool commutes = m * e == e * m;
                    REQUIRE(commutes == centralizes_elementary(m, i, j, k));
                }
            }
        }
    }
}

TEST_CASE("ball enumeration sizes") {
    REQUIRE(ball_enumerate(2, 1).size() == 5);
    REQUIRE(ball_enumerate(3, 1).size() == 13);
    REQUIRE(ball_enumerate(3, 0).size() == 1);
    REQUIRE(ball_enumerate(5, 0).size() == 1);
}

TEST_CASE("balls are symmetric and word lengths are bounded") {
    auto ball = ball_enumerate(3, 3);
    REQUIRE(ball.elements[0] == SLMatrix::identity(3));
    for (std::size_t i = 0; i < ball.size(); ++i) {
        REQUIRE(ball.word_length[i] <= 3);
        REQUIRE(ball.contains(ball.elements[i].inverse()));
    }
}

TEST_CASE("ball cap is enforced") {
    REQUIRE_THROWS_AS(ball_enumerate(3, 4, 100), cap_exceeded);
}

TEST_CASE("center adjoining for even dimension") {
    auto ball = ball_enumerate(4, 1, kDefaultBallCap, true);
    IntMatrix neg = IntMatrix::identity(4);
    for (int i = 0; i < 4; ++i) neg(i, i) = -1;
    REQUIRE(ball.contains(SLMatrix(neg)));
    // odd dimension: flag is a no-op
    auto b3 = ball_enumerate(3, 1, kDefaultBallCap, true);
    REQUIRE(b3.size() == 13);
}

TEST_CASE("congruence membership") {
    for (long long n : {2, 3, 5})
        REQUIRE(congruence_membership(elementary(3, 1, 2, n), n));
    REQUIRE_FALSE(congruence_membership(elementary(3, 1, 2, 1), 2));
    // commutator of squares lands in the level-2 congruence subgroup
    auto a = elementary(3, 1, 2, 2), b = elementary(3, 2, 3, 2);
    auto comm = a.inverse() * b.inverse() * a * b;
    REQUIRE(congruence_membership(comm, 2));
}

TEST_CASE("block-diagonal embedding of two SL_2 factors") {
    REQUIRE(embed_sl2_pair(SLMatrix::identity(2), SLMatrix::identity(2)) ==
            SLMatrix::identity(4));
    REQUIRE(embed_sl2_pair(elementary(2, 1, 2, 1), SLMatrix::identity(2)) ==
            elementary(4, 1, 2, 1));
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        auto a1 = random_word(2, 6, rng), b1 = random_word(2, 6, rng);
        auto a2 = random_word(2, 6, rng), b2 = random_word(2, 6, rng);
        REQUIRE(embed_sl2_pair(a1 * b1, a2 * b2) ==
                embed_sl2_pair(a1, a2) * embed_sl2_pair(b1, b2));
    }
    REQUIRE_THROWS_AS(embed_sl2_pair(SLMatrix::identity(3), SLMatrix::identity(2)),
                      std::invalid_argument);
}

TEST_CASE("any two elementary matrices are conjugate via an explicit witness") {
    int n = 3;
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            if (k == l) continue;
            for (int p = 1; p <= n; ++p)
                for (int q = 1; q <= n; ++q) {
                    if (p == q) continue;
                    auto c = elementary_conjugator(n, k, l, p, q);
                    REQUIRE(c * elementary(n, k, l, 1) * c.inverse() ==
                            elementary(n, p, q, 1));
                }
        }
}
