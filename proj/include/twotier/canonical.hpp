#pragma once

// Isomorphism-invariant signatures of weighted voting games and bounded
// enumeration of structurally different games.

#include "twotier/errors.hpp"
#include "twotier/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <map>
#include <numeric>
#include <vector>

namespace twotier {

/// Minimal winning coalitions of a game after relabelling players in
/// non-increasing weight order, as sorted bitmasks.
struct CanonicalGameSignature {
    std::size_t players = 0;
    std::vector<std::uint64_t> minimal_winning;

    friend bool operator==(const CanonicalGameSignature&, const CanonicalGameSignature&) = default;
    friend auto operator<=>(const CanonicalGameSignature&, const CanonicalGameSignature&) = default;
};

inline constexpr std::size_t kMaxCanonicalPlayers = 20;

/// Player indices sorted by non-increasing weight (stable on ties).
inline std::vector<std::size_t> weight_order(std::span<const Weight> w) {
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] > w[b]; });
    return order;
}

/// Weight of every coalition mask of `w`, indexed by mask.
inline std::vector<Weight> subset_weights(std::span<const Weight> w) {
    std::vector<Weight> sums(std::size_t{1} << w.size(), 0);
    for (std::size_t mask = 1; mask < sums.size(); ++mask)
        sums[mask] = sums[mask & (mask - 1)] + w[static_cast<std::size_t>(std::countr_zero(mask))];
    return sums;
}

// Equal-weight players are symmetric in a weighted game, so any stable
// tie order among them yields the same family.
inline CanonicalGameSignature canonicalize(const WeightedVotingGame& game) {
    const auto m = game.players();
    if (m > kMaxCanonicalPlayers)
        throw BudgetExceeded("canonicalize supports at most " + std::to_string(kMaxCanonicalPlayers) + " players");
    const auto order = weight_order(game.weights());
    std::vector<Weight> sorted(m);
    for (std::size_t i = 0; i < m; ++i) sorted[i] = game.weight(order[i]);

    const auto sums = subset_weights(sorted);
    CanonicalGameSignature sig{m, {}};
    for (std::uint64_t mask = 1; mask < sums.size(); ++mask) {
        if (!game.is_winning_weight(sums[mask])) continue;
        bool minimal = true;
        for (auto bits = mask; bits != 0 && minimal; bits &= bits - 1) {
            const auto lowest = bits & (~bits + 1);
            if (game.is_winning_weight(sums[mask ^ lowest])) minimal = false;
        }
        if (minimal) sig.minimal_winning.push_back(mask);
    }
    return sig;
}

/// One isomorphism class with its smallest representative weight vector
/// (smallest sum, then lexicographically smallest in non-increasing order).
struct GameClass {
    CanonicalGameSignature signature;
    std::vector<Weight> representative;
};

struct GameClassCatalog {
    std::size_t players = 0;
    Quota quota;
    Weight weight_bound = 0;
    std::vector<GameClass> classes;  // sorted by signature

    std::size_t size() const { return classes.size(); }
};

inline constexpr double kDefaultEnumerationBudget = 1e9;

namespace detail {

template <class Visit>
void for_each_nonincreasing(std::size_t m, Weight bound, Visit&& visit) {
    std::vector<Weight> w(m, 0);
    auto rec = [&](auto&& self, std::size_t pos, Weight cap) -> void {
        if (pos == m) {
            visit(std::as_const(w));
            return;
        }
        for (Weight v = 0; v <= cap; ++v) {
            w[pos] = v;
            self(self, pos + 1, v);
        }
    };
    rec(rec, 0, bound);
}

inline bool representative_less(std::span<const Weight> a, std::span<const Weight> b) {
    const auto sa = std::accumulate(a.begin(), a.end(), Weight{0});
    const auto sb = std::accumulate(b.begin(), b.end(), Weight{0});
    if (sa != sb) return sa < sb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

/// All structurally different m-player games at relative quota q whose
/// weights lie in {0..weight_bound}. Weight vectors are visited in sorted
/// form only; signatures are permutation invariant so the class set equals
/// that of the full grid.
inline GameClassCatalog enumerate_game_classes(std::size_t m, Quota q, Weight weight_bound,
                                               double budget = kDefaultEnumerationBudget) {
    if (m == 0) throw std::invalid_argument("player count must be at least 1");
    if (weight_bound == 0) throw std::invalid_argument("weight bound must be at least 1");
    if (m > kMaxCanonicalPlayers ||
        std::pow(static_cast<double>(weight_bound) + 1.0, static_cast<double>(m)) > budget)
        throw BudgetExceeded("enumeration grid (" + std::to_string(weight_bound) + "+1)^" + std::to_string(m) +
                             " exceeds the budget");

    std::map<CanonicalGameSignature, std::vector<Weight>> found;
    detail::for_each_nonincreasing(m, weight_bound, [&](const std::vector<Weight>& w) {
        if (w.front() == 0) return;
        auto sig = canonicalize(WeightedVotingGame(w, q));
        auto it = found.find(sig);
        if (it == found.end())
            found.emplace(std::move(sig), w);
        else if (detail::representative_less(w, it->second))
            it->second = w;
    });

    GameClassCatalog out{m, q, weight_bound, {}};
    out.classes.reserve(found.size());
    for (auto& [sig, rep] : found) out.classes.push_back({sig, rep});
    return out;
}

}  // namespace twotier
