#include "oracles.hpp"

#include "twotier/canonical.hpp"
#include "twotier/power.hpp"
#include "twotier/rng.hpp"

#include <gtest/gtest.h>

using namespace twotier;

namespace {

PowerVector rationals(std::initializer_list<std::pair<int, int>> xs) {
    PowerVector pv;
    for (auto [n, d] : xs) pv.values.emplace_back(n, d);
    return pv;
}

WeightedVotingGame random_game(SplitMix64& rng, std::size_t max_players, Weight max_weight) {
    const std::size_t m = 1 + rng() % max_players;
    std::vector<Weight> w(m);
    for (auto& x : w) x = rng() % (max_weight + 1);
    if (std::accumulate(w.begin(), w.end(), Weight{0}) == 0) w[rng() % m] = 1;
    const Quota quotas[] = {{1, 2}, {2, 3}, {37, 50}, {3, 4}, {5, 9}};
    return {w, quotas[rng() % 5]};
}

}  // namespace

TEST(ShapleyShubik, Fixtures) {
    EXPECT_EQ(shapley_shubik(parse_game("1/2; 42,25,24,9")), rationals({{1, 2}, {1, 6}, {1, 6}, {1, 6}}));
    EXPECT_EQ(shapley_shubik(parse_game("1/2; 40,25,25,10")), rationals({{5, 12}, {1, 4}, {1, 4}, {1, 12}}));
    EXPECT_EQ(shapley_shubik(parse_game("1/2; 7")), rationals({{1, 1}}));
    EXPECT_EQ(shapley_shubik(parse_game("1/2; 1,1,1")), rationals({{1, 3}, {1, 3}, {1, 3}}));
    EXPECT_EQ(shapley_shubik(parse_game("1/2; 0,3,1")), rationals({{0, 1}, {1, 1}, {0, 1}}));
}

TEST(ShapleyShubik, MatchesSubsetFormulaOnRandomGames) {
    SplitMix64 rng(7);
    for (int k = 0; k < 300; ++k) {
        const auto g = random_game(rng, 9, 30);
        EXPECT_EQ(shapley_shubik(g), oracle::shapley_by_subsets(g)) << to_string(g);
    }
}

TEST(ShapleyShubik, MatchesPermutationOracleOnEnumeratedClasses) {
    for (const Quota q : {Quota(1, 2), Quota(2, 3), Quota(37, 50)})
        for (std::size_t m = 1; m <= 5; ++m)
            for (const auto& c : enumerate_game_classes(m, q, 7).classes) {
                const WeightedVotingGame g(c.representative, q);
                EXPECT_EQ(shapley_shubik(g), shapley_permutation_oracle(g)) << to_string(g);
            }
}

TEST(ShapleyShubik, LargeWeightsStayExact) {
    // populations in thousands: m * sum(w) is about 1.4e7
    const auto g = parse_game("37/50; 81197,66415,64517,60795,46449,38005,19870,16900,11311,10849,10538,10419,9747,"
                              "9849,8576,7202,5659,5426,5421,4625,4225,2062,1986,1315,847,576,562,429");
    const auto pv = shapley_shubik(g);
    EXPECT_EQ(pv.sum(), Rational(1));
    for (std::size_t i = 0; i < g.players(); ++i)
        for (std::size_t j = 0; j < g.players(); ++j)
            if (g.weight(i) > g.weight(j)) {
                EXPECT_GE(pv[i], pv[j]);
            }
    EXPECT_EQ(detail::factorial(28) % denominator(pv[0]), 0);
}

TEST(ShapleyShubikProperties, EfficiencyGranularitySymmetryNullPlayersMonotonicity) {
    SplitMix64 rng(123);
    for (int k = 0; k < 300; ++k) {
        const auto g = random_game(rng, 10, 25);
        const auto m = g.players();
        const auto pv = shapley_shubik(g);
        ASSERT_EQ(pv.size(), m);
        EXPECT_EQ(pv.sum(), Rational(1));
        const auto mfact = detail::factorial(m);
        for (std::size_t i = 0; i < m; ++i) {
            EXPECT_GE(pv[i], 0);
            EXPECT_EQ(mfact % denominator(pv[i]), 0) << "not a multiple of 1/m!";
            if (g.weight(i) == 0) {
                EXPECT_EQ(pv[i], 0);
            }
            for (std::size_t j = 0; j < m; ++j) {
                if (g.weight(i) == g.weight(j)) {
                    EXPECT_EQ(pv[i], pv[j]);
                } else if (g.weight(i) > g.weight(j)) {
                    EXPECT_GE(pv[i], pv[j]);
                }
            }
        }
    }
}

TEST(ShapleyShubikProperties, ScaleInvariant) {
    SplitMix64 rng(77);
    for (int k = 0; k < 100; ++k) {
        const auto g = random_game(rng, 8, 20);
        std::vector<Weight> w(g.weights().begin(), g.weights().end());
        const Weight c = 2 + rng() % 50;
        for (auto& x : w) x *= c;
        EXPECT_EQ(shapley_shubik(g), shapley_shubik(WeightedVotingGame(w, g.quota())));
    }
}

TEST(ShapleyShubik, Budgets) {
    EXPECT_THROW(shapley_shubik(parse_game("1/2; 1000000,1000000,1000000"), 1e5), BudgetExceeded);
    std::vector<Weight> eleven(11, 1);
    EXPECT_THROW(shapley_permutation_oracle(WeightedVotingGame(eleven, Quota::half())), BudgetExceeded);
}

TEST(Banzhaf, Fixtures) {
    const auto b = banzhaf(parse_game("1/2; 42,25,24,9"));
    EXPECT_EQ(b, (std::vector<Rational>{Rational(3, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}));
    const auto nul = banzhaf(parse_game("1/2; 5,0"));
    EXPECT_EQ(nul, (std::vector<Rational>{Rational(1), Rational(0)}));
}

TEST(Banzhaf, MatchesSwingCount) {
    SplitMix64 rng(31);
    for (int k = 0; k < 200; ++k) {
        const auto g = random_game(rng, 9, 30);
        EXPECT_EQ(banzhaf(g), oracle::banzhaf_by_subsets(g)) << to_string(g);
    }
}

TEST(Penrose, SmallValues) {
    EXPECT_EQ(penrose_decisiveness(1).exact, Rational(1));
    EXPECT_EQ(penrose_decisiveness(3).exact, Rational(1, 2));
    EXPECT_EQ(penrose_decisiveness(5).exact, Rational(3, 8));
    EXPECT_NEAR(penrose_decisiveness(3).approx, 0.4606589, 1e-6);
}

TEST(Penrose, ApproximationAt101) {
    const auto d = penrose_decisiveness(101);
    EXPECT_NEAR(to_double(d.exact), 0.0795892374, 1e-9);
    EXPECT_NEAR(d.approx, 0.0793924811, 1e-9);
    EXPECT_LT(std::abs(to_double(d.exact) - d.approx) / d.approx, 0.005);
}

TEST(Penrose, RelativeGapShrinks) {
    double prev_gap = 1.0;
    Rational prev = 2;
    for (std::uint64_t n = 1; n <= 1001; n += 2) {
        const auto d = penrose_decisiveness(n);
        EXPECT_LT(d.exact, prev);
        prev = d.exact;
        const double gap = std::abs(to_double(d.exact) - d.approx) / d.approx;
        if (n > 1) {
            EXPECT_LT(gap, prev_gap);
        }
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 3e-4);
}

TEST(Penrose, RejectsEvenOrZero) {
    EXPECT_THROW(penrose_decisiveness(0), std::invalid_argument);
    EXPECT_THROW(penrose_decisiveness(4), std::invalid_argument);
}
