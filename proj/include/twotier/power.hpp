#pragma once

// Exact power indices of weighted voting games.

#include "twotier/errors.hpp"
#include "twotier/game.hpp"
#include "twotier/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace twotier {

/// A point on the simplex of exact non-negative rationals.
struct PowerVector {
    std::vector<Rational> values;

    std::size_t size() const { return values.size(); }
    const Rational& operator[](std::size_t i) const { return values[i]; }

    Rational sum() const {
        Rational s = 0;
        for (const auto& v : values) s += v;
        return s;
    }

    std::vector<double> to_doubles() const {
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto& v : values) out.push_back(to_double(v));
        return out;
    }

    friend bool operator==(const PowerVector&, const PowerVector&) = default;
};

inline constexpr double kDefaultPowerBudget = 1e8;

namespace detail {

inline BigInt factorial(std::size_t n) {
    BigInt f = 1;
    for (std::size_t k = 2; k <= n; ++k) f *= k;
    return f;
}

// pivots[i][s]: number of coalitions S of the other players with |S| = s
// and w(S) <= floor(q~) < w(S) + w_i. Counts of coalitions of size s fit
// in 64 bits for m <= 63, so the subtraction below may wrap in between
// but always lands on the exact value.
inline std::vector<std::vector<std::uint64_t>> pivot_counts(const WeightedVotingGame& game, double budget) {
    const auto m = game.players();
    if (static_cast<double>(m) * static_cast<double>(game.total_weight()) > budget)
        throw BudgetExceeded("power computation m * sum(w) = " + std::to_string(m) + " * " +
                             std::to_string(game.total_weight()) + " exceeds the budget");

    const auto cap = static_cast<std::size_t>(game.losing_cap());
    const auto width = cap + 1;
    const auto weights = game.weights();

    // all[s * width + x]: coalitions of size s and weight x <= cap
    std::vector<std::uint64_t> all((m + 1) * width, 0);
    all[0] = 1;
    std::size_t seen = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto w = static_cast<std::size_t>(weights[j]);
        ++seen;
        if (w > cap) continue;
        for (std::size_t s = seen; s >= 1; --s) {
            auto* dst = &all[s * width];
            const auto* src = &all[(s - 1) * width];
            for (std::size_t x = cap + 1; x-- > w;) dst[x] += src[x - w];
        }
    }

    std::vector<std::vector<std::uint64_t>> pivots(m, std::vector<std::uint64_t>(m, 0));
    std::vector<std::uint64_t> rest(m * width, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto w = static_cast<std::size_t>(weights[i]);
        if (w == 0) continue;
        const std::size_t lo = w > cap ? 0 : cap - w + 1;
        if (w > cap) {
            for (std::size_t s = 0; s < m; ++s)
                for (std::size_t x = 0; x <= cap; ++x) pivots[i][s] += all[s * width + x];
            continue;
        }
        // rest = all with player i removed
        for (std::size_t s = 0; s < m; ++s) {
            auto* dst = &rest[s * width];
            const auto* src = &all[s * width];
            if (s == 0) {
                std::copy(src, src + width, dst);
            } else {
                const auto* prev = &rest[(s - 1) * width];
                std::copy(src, src + w, dst);
                for (std::size_t x = w; x <= cap; ++x) dst[x] = src[x] - prev[x - w];
            }
            std::uint64_t c = 0;
            for (std::size_t x = lo; x <= cap; ++x) c += dst[x];
            pivots[i][s] = c;
        }
    }
    return pivots;
}

}  // namespace detail

/// Exact Shapley-Shubik index by dynamic programming over
/// (coalition size, coalition weight).
inline PowerVector shapley_shubik(const WeightedVotingGame& game, double budget = kDefaultPowerBudget) {
    const auto m = game.players();
    const auto pivots = detail::pivot_counts(game, budget);

    std::vector<BigInt> size_factor(m);
    for (std::size_t s = 0; s < m; ++s) size_factor[s] = detail::factorial(s) * detail::factorial(m - 1 - s);
    const BigInt orderings = detail::factorial(m);

    PowerVector out;
    out.values.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        BigInt num = 0;
        for (std::size_t s = 0; s < m; ++s)
            if (pivots[i][s] != 0) num += size_factor[s] * pivots[i][s];
        out.values.emplace_back(num, orderings);
    }
    return out;
}

inline constexpr std::size_t kMaxOraclePlayers = 10;

/// Shapley-Shubik index by walking all m! orderings. Test oracle for the DP.
inline PowerVector shapley_permutation_oracle(const WeightedVotingGame& game) {
    const auto m = game.players();
    if (m > kMaxOraclePlayers)
        throw BudgetExceeded("permutation oracle refuses m = " + std::to_string(m) + " > " +
                             std::to_string(kMaxOraclePlayers));
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::uint64_t> pivotal(m, 0);
    do {
        Weight acc = 0;
        for (auto i : order) {
            acc += game.weight(i);
            if (game.is_winning_weight(acc)) {
                ++pivotal[i];
                break;
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));

    const BigInt orderings = detail::factorial(m);
    PowerVector out;
    for (auto c : pivotal) out.values.emplace_back(BigInt(c), orderings);
    return out;
}

/// Raw (non-normalized) Banzhaf swing probability: swings / 2^(m-1).
inline std::vector<Rational> banzhaf(const WeightedVotingGame& game, double budget = kDefaultPowerBudget) {
    const auto m = game.players();
    const auto pivots = detail::pivot_counts(game, budget);
    const BigInt coalitions = BigInt(1) << (m - 1);
    std::vector<Rational> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        BigInt swings = 0;
        for (auto c : pivots[i]) swings += c;
        out.emplace_back(swings, coalitions);
    }
    return out;
}

struct PenroseDecisiveness {
    Rational exact;  // 2^(-2k) * C(2k, k)
    double approx;   // sqrt(2 / (pi * n))
};

/// Probability that a voter in a population of odd size n = 2k+1 faces an
/// even split among the other 2k fair-coin voters.
inline PenroseDecisiveness penrose_decisiveness(std::uint64_t n) {
    if (n == 0 || n % 2 == 0)
        throw std::invalid_argument("penrose decisiveness needs an odd population size, got " + std::to_string(n));
    const auto k = (n - 1) / 2;
    BigInt binom = 1;  // C(2k, k)
    for (std::uint64_t j = 1; j <= k; ++j) binom = binom * (k + j) / j;
    return {Rational(binom, BigInt(1) << (2 * k)),
            std::sqrt(2.0 / (std::numbers::pi * static_cast<double>(n)))};
}

}  // namespace twotier
