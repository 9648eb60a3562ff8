// Acceptance gate: one test case per criterion, each asserting its stated
// tolerance and runtime budget, with a one-line PASS/FAIL summary printed
// per criterion.

#include "slnz/charcheck.hpp"
#include "slnz/conjdecomp.hpp"
#include "slnz/finquot.hpp"
#include "slnz/json_io.hpp"
#include "slnz/subgroups.hpp"
#include "slnz/torus.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <memory>
#include <set>

using namespace slnz;
using slnz::testutil::random_word;

namespace {

class CriterionReporter : public Catch::EventListenerBase {
public:
    using Catch::EventListenerBase::EventListenerBase;
    void testCaseStarting(Catch::TestCaseInfo const&) override {
        start_ = std::chrono::steady_clock::now();
    }
    void testCaseEnded(Catch::TestCaseStats const& stats) override {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::printf("[%s] %s (%.2fs)\n",
                    stats.totals.assertions.allPassed() ? "PASS" : "FAIL",
                    stats.testInfo->name.c_str(), secs);
        std::fflush(stdout);
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

double peak_rss_gb() {
    rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    return static_cast<double>(ru.ru_maxrss) / (1024.0 * 1024.0);  // kB -> GB
}

std::mt19937_64 seeded(uint64_t salt) { return std::mt19937_64(0x5eed0000 + salt); }

}  // namespace

CATCH_REGISTER_LISTENER(CriterionReporter)

TEST_CASE("criterion 1: three-factor decomposition soundness over 1000 random words") {
    Stopwatch sw;
    auto rng = seeded(1);
    std::uniform_int_distribution<int> pick_len(0, 20);
    for (int trial = 0; trial < 1000; ++trial) {
        auto gamma = random_word(3, pick_len(rng), rng);
        auto w = decompose(gamma);
        REQUIRE(w.conjugator * gamma * w.conjugator.inverse() == w.g1 * w.g2 * w.g3);
        REQUIRE(is_in_normalizer(w.g1, CopySpec::row(1)));
        REQUIRE(is_in_normalizer(w.g2, CopySpec::column(3)));
        REQUIRE(is_in_copy(w.g3, CopySpec::column(1)));
    }
    REQUIRE(sw.seconds() < 30.0);
}

TEST_CASE("criterion 2: two-factor decomposition over 200 random words in SL_4") {
    Stopwatch sw;
    auto rng = seeded(2);
    std::uniform_int_distribution<int> pick_len(0, 20);
    for (int trial = 0; trial < 200; ++trial) {
        auto gamma = random_word(4, pick_len(rng), rng);
        auto w = decompose_two_factor(gamma);
        REQUIRE(w.conjugator * gamma * w.conjugator.inverse() == w.g1 * w.g2);
        REQUIRE(is_in_normalizer(w.g1, CopySpec::row(1)));
        REQUIRE(is_in_normalizer(w.g2, CopySpec::column(4)));
    }
    REQUIRE(sw.seconds() < 30.0);
}

TEST_CASE("criterion 3: centralizer pattern matches commutation on the radius-3 ball") {
    Stopwatch sw;
    auto ball = ball_enumerate(3, 3);
    std::size_t counterexamples = 0;
    for (std::size_t idx = 0; idx < ball.size(); ++idx) {
        const auto& m = ball.elements[idx];
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                if (i == j) continue;
                for (int k = 1; k <= 2; ++k) {
                    auto e = elementary(3, i, j, k);
                    bool commutes = m * e == e * m;
                    if (commutes != centralizes_elementary(m, i, j, k)) ++counterexamples;
                }
            }
        }
    }
    REQUIRE(counterexamples == 0);
    REQUIRE(sw.seconds() < 120.0);
}

TEST_CASE("criterion 4: congruence quotient orders by enumeration") {
    Stopwatch sw;
    REQUIRE(enumerate_group(2, 2).size() == 6);
    REQUIRE(enumerate_group(2, 3).size() == 24);
    REQUIRE(enumerate_group(3, 2).size() == 168);
    REQUIRE(sw.seconds() < 5.0);
}

TEST_CASE("criterion 5: character tables with orthogonality and degree sums") {
    Stopwatch sw;
    auto check = [](int n, long long N, const std::vector<long long>& want) {
        auto g = std::make_shared<FiniteGroup>(enumerate_group(n, N));
        auto tab = character_table(g, conjugacy_classes(*g));
        REQUIRE(tab.degrees == want);
        uint64_t sq = 0;
        for (long long d : tab.degrees) sq += static_cast<uint64_t>(d) * d;
        REQUIRE(sq == tab.order);
        const std::size_t r = tab.class_count();
        for (std::size_t a = 0; a < r; ++a) {  // rows
            for (std::size_t b = 0; b < r; ++b) {
                Complex acc = 0.0;
                for (std::size_t c = 0; c < r; ++c)
                    acc += static_cast<double>(tab.classes.size_of(c)) * tab.values[a][c] *
                           std::conj(tab.values[b][c]);
                acc /= static_cast<double>(tab.order);
                REQUIRE(std::abs(acc - (a == b ? 1.0 : 0.0)) < 1e-9);
            }
        }
        for (std::size_t c1 = 0; c1 < r; ++c1) {  // columns
            for (std::size_t c2 = 0; c2 < r; ++c2) {
                Complex acc = 0.0;
                for (std::size_t i = 0; i < r; ++i)
                    acc += tab.values[i][c1] * std::conj(tab.values[i][c2]);
                double want_v = c1 == c2 ? static_cast<double>(tab.order) / tab.classes.size_of(c1)
                                         : 0.0;
                REQUIRE(std::abs(acc - Complex(want_v, 0)) < 1e-9);
            }
        }
    };
    check(2, 2, {1, 1, 2});
    check(2, 3, {1, 1, 1, 2, 2, 2, 3});
    check(3, 2, {1, 3, 3, 6, 7, 8});
    REQUIRE(sw.seconds() < 60.0);
}

TEST_CASE("criterion 6: generator powers contain the reduction kernel mod 8") {
    Stopwatch sw;
    auto rep = tits_containment_check(3, 2, 8);
    REQUIRE(rep.k_size == 256);
    REQUIRE(rep.contained);
    REQUIRE(rep.missing == 0);
    REQUIRE(sw.seconds() < 600.0);
    REQUIRE(peak_rss_gb() < 2.0);
}

TEST_CASE("criterion 7: torus orbit partitions, transforms, and invariance") {
    Stopwatch sw;
    auto o2 = finite_orbits(2, 2);
    REQUIRE(o2.size() == 2);
    REQUIRE(o2[0].size() == 1);
    REQUIRE(o2[1].size() == 3);
    auto o3 = finite_orbits(2, 3);
    REQUIRE(o3.size() == 2);
    REQUIRE(o3[0].size() == 1);
    REQUIRE(o3[1].size() == 8);
    REQUIRE(std::abs(orbit_fourier(o2[1], {0, 0}) - Complex(1, 0)) < 1e-12);
    REQUIRE(std::abs(orbit_fourier(o2[1], {1, 0}) - Complex(-1.0 / 3, 0)) < 1e-12);
    auto rng = seeded(7);
    for (const auto& orbit : {o2[1], o3[1]}) {
        auto inv = sl_invariance_check(orbit, 100, rng);
        REQUIRE(inv.max_deviation < 1e-12);
    }
    REQUIRE(sw.seconds() < 5.0);
}

TEST_CASE("criterion 8: synthetic convex combinations are recovered by the fitter") {
    Stopwatch sw;
    auto rng = seeded(8);
    auto orbits = orbits_up_to_denominator(2, 6);
    REQUIRE(orbits.size() >= 5);
    std::uniform_real_distribution<double> coin(0.1, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, orbits.size() - 1);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> weights(orbits.size() + 1, 0.0);
        weights[0] = coin(rng) * 0.4;  // Lebesgue part
        std::set<std::size_t> chosen;
        while (chosen.size() < 5) chosen.insert(pick(rng));
        for (std::size_t c : chosen) weights[1 + c] = coin(rng);
        double total = 0.0;
        for (double w : weights) total += w;
        for (double& w : weights) w /= total;
        SampleMap samples;
        const long long box = 12;  // all v with ||v||_inf <= 2 * n_max
        for (long long x = -box; x <= box; ++x) {
            for (long long y = -box; y <= box; ++y) {
                std::vector<long long> v{x, y};
                Complex acc = (x == 0 && y == 0) ? weights[0] : 0.0;
                for (std::size_t i = 0; i < orbits.size(); ++i)
                    if (weights[1 + i] > 0) acc += weights[1 + i] * orbit_fourier(orbits[i], v);
                samples[v] = acc;
            }
        }
        auto fit = fit_restriction(samples, 2, 6);
        REQUIRE(std::abs(fit.t_inf - weights[0]) < 1e-7);
        for (std::size_t i = 0; i < orbits.size(); ++i)
            REQUIRE(std::abs(fit.t[i] - weights[1 + i]) < 1e-7);
        REQUIRE(fit.residual < 1e-9);
    }
    REQUIRE(sw.seconds() < 10.0);
}

TEST_CASE("criterion 9: dichotomy at desk scale for lifted and centre characters") {
    Stopwatch sw;
    auto ball3 = std::make_shared<GroupBall>(ball_enumerate(3, 3));
    auto ball3_wide = std::make_shared<GroupBall>(ball_enumerate(3, 6));
    auto probe = trivial_extension(ball3_wide);
    auto subset3 = select_gram_subset(probe, 200);
    REQUIRE(subset3.size() == 200);

    for (long long N : {2LL, 3LL}) {
        auto grp = std::make_shared<FiniteGroup>(enumerate_group(3, N));
        auto tab = character_table(grp, conjugacy_classes(*grp));
        // class index of every wide-ball element, shared by all rows
        std::vector<uint32_t> class_idx(ball3_wide->size());
        for (std::size_t i = 0; i < ball3_wide->size(); ++i)
            class_idx[i] =
                tab.classes.class_of[grp->index_of(ball3_wide->elements[i].mod_reduce(N))];
        for (std::size_t row = 0; row < tab.values.size(); ++row) {
            auto cand = sample_lifted(lift_character(tab, row), ball3);
            auto rep = classify(cand);
            INFO("N = " << N << ", row = " << row << ", degree = " << tab.degrees[row]);
            REQUIRE(rep.verdict == ClassificationReport::Verdict::Congruence);
            REQUIRE(rep.level >= 1);
            REQUIRE(N % rep.level == 0);  // level divides the construction level
            REQUIRE(rep.centrality.max_deviation < 1e-9);
            // 200-element Gram certificate on the wide ball
            std::vector<Complex> values(ball3_wide->size());
            for (std::size_t i = 0; i < ball3_wide->size(); ++i)
                values[i] = tab.values[row][class_idx[i]] / static_cast<double>(tab.degrees[row]);
            CandidateCharacter wide(ball3_wide, std::move(values), "lifted");
            auto psd = check_positive_definite(wide, subset3, 1e-8);
            REQUIRE(psd.min_eigenvalue >= -1e-8);
        }
    }

    // centre characters
    auto dirac = trivial_extension(ball3);
    auto rep_dirac = classify(dirac);
    REQUIRE(rep_dirac.verdict == ClassificationReport::Verdict::Center);
    REQUIRE(rep_dirac.centrality.max_deviation < 1e-9);
    auto wide_dirac = trivial_extension(ball3_wide);
    REQUIRE(check_positive_definite(wide_dirac, subset3, 1e-8).min_eigenvalue >= -1e-8);

    auto ball4 = std::make_shared<GroupBall>(ball_enumerate(4, 2, kDefaultBallCap, true));
    auto ball4_wide = std::make_shared<GroupBall>(ball_enumerate(4, 4, kDefaultBallCap, true));
    auto subset4 = select_gram_subset(trivial_extension(ball4_wide), 200);
    REQUIRE(subset4.size() == 200);
    for (int chi : {1, -1}) {
        auto cand = trivial_extension(ball4, chi);
        auto rep = classify(cand);
        INFO("chi(-I) = " << chi);
        REQUIRE(rep.verdict == ClassificationReport::Verdict::Center);
        REQUIRE(rep.centrality.max_deviation < 1e-9);
        REQUIRE(rep.center_values.size() == 2);
        REQUIRE(std::abs(rep.center_values[1].second - Complex(chi, 0)) < 1e-12);
        auto wide = trivial_extension(ball4_wide, chi);
        REQUIRE(check_positive_definite(wide, subset4, 1e-8).min_eigenvalue >= -1e-8);
    }
    REQUIRE(sw.seconds() < 600.0);
}

TEST_CASE("criterion 10: negative controls fail the intended checks") {
    Stopwatch sw;
    auto ball = std::make_shared<GroupBall>(ball_enumerate(3, 3));

    // the corner entry is not conjugation invariant
    std::vector<Complex> corner(ball->size());
    for (std::size_t i = 0; i < ball->size(); ++i)
        corner[i] = Complex(static_cast<double>(to_ll(ball->elements[i](0, 0))), 0);
    CandidateCharacter corner_cand(ball, corner, "external");
    REQUIRE_FALSE(check_central(corner_cand, 1e-9).pass);

    // Gram [[1,2],[2,1]] has minimum eigenvalue -1
    std::vector<Complex> two(ball->size(), Complex(0, 0));
    two[0] = Complex(1, 0);
    auto g = elementary(3, 1, 2, 1);
    two[*ball->index_of(g)] = Complex(2, 0);
    two[*ball->index_of(g.inverse())] = Complex(2, 0);
    CandidateCharacter two_cand(ball, two, "external");
    auto psd = check_positive_definite(two_cand, {0, *ball->index_of(g)});
    REQUIRE_FALSE(psd.pass);
    REQUIRE(std::abs(psd.min_eigenvalue - (-1.0)) < 1e-12);

    // a corrupted lifted character is never misclassified
    auto grp = std::make_shared<FiniteGroup>(enumerate_group(3, 2));
    auto tab = character_table(grp, conjugacy_classes(*grp));
    std::size_t row = 0;
    while (tab.degrees[row] != 3) ++row;
    auto cand = sample_lifted(lift_character(tab, row), ball);
    std::vector<Complex> corrupted = cand.values();
    corrupted[1] += 0.1;
    CandidateCharacter bad(ball, corrupted, "external");
    auto rep = classify(bad);
    REQUIRE(rep.verdict == ClassificationReport::Verdict::Undecided);
    REQUIRE(sw.seconds() < 10.0);
}
