#pragma once

#include "twotier/rational.hpp"

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twotier {

using Weight = std::uint64_t;

/// Largest player count the bitset coalition type can address.
inline constexpr std::size_t kMaxPlayers = 63;

/// Subset of players {0..m-1}, bitset semantics.
class Coalition {
public:
    constexpr Coalition() = default;
    constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

    Coalition(std::initializer_list<std::size_t> members) {
        for (auto i : members) *this = with(i);
    }

    static constexpr Coalition grand(std::size_t m) {
        return Coalition(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
    }

    constexpr bool contains(std::size_t i) const { return i < 64 && ((bits_ >> i) & 1U) != 0; }

    Coalition with(std::size_t i) const {
        if (i >= 64) throw std::out_of_range("player index out of range");
        return Coalition(bits_ | (std::uint64_t{1} << i));
    }

    constexpr Coalition without(std::size_t i) const {
        return i < 64 ? Coalition(bits_ & ~(std::uint64_t{1} << i)) : *this;
    }

    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint64_t bits() const { return bits_; }

    constexpr bool subset_of(Coalition other) const { return (bits_ & ~other.bits_) == 0; }

    friend constexpr bool operator==(Coalition, Coalition) = default;
    friend constexpr auto operator<=>(Coalition, Coalition) = default;

private:
    std::uint64_t bits_ = 0;
};

/// Weighted voting game [q * sum(w); w_1..w_m]. A coalition wins iff its
/// weight is strictly above q * sum(w).
class WeightedVotingGame {
public:
    WeightedVotingGame(std::vector<Weight> weights, Quota quota)
        : weights_(std::move(weights)), quota_(quota) {
        if (weights_.empty()) throw std::invalid_argument("game needs at least one player");
        if (weights_.size() > kMaxPlayers)
            throw std::invalid_argument("game has more than " + std::to_string(kMaxPlayers) + " players");
        for (auto w : weights_) {
            if (w > (std::uint64_t{1} << 40))
                throw std::invalid_argument("weight too large");
            total_ += w;
        }
        if (total_ == 0) throw std::invalid_argument("at least one weight must be positive");
        losing_cap_ = quota_.floor_of(total_);
    }

    std::size_t players() const { return weights_.size(); }
    std::span<const Weight> weights() const { return weights_; }
    Weight weight(std::size_t i) const { return weights_.at(i); }
    const Quota& quota() const { return quota_; }
    Weight total_weight() const { return total_; }

    /// floor(q~): integer weights up to this value lose, anything above wins.
    Weight losing_cap() const { return losing_cap_; }

    /// Absolute quota q~ = q * sum(w), exact.
    Rational absolute_quota() const { return quota_.value() * Rational(total_); }

    bool is_winning_weight(Weight w) const { return w > losing_cap_; }

    Weight weight_of(Coalition s) const {
        check(s);
        Weight sum = 0;
        for (auto bits = s.bits(); bits != 0; bits &= bits - 1)
            sum += weights_[static_cast<std::size_t>(std::countr_zero(bits))];
        return sum;
    }

    bool is_winning(Coalition s) const { return is_winning_weight(weight_of(s)); }

    friend bool operator==(const WeightedVotingGame& a, const WeightedVotingGame& b) {
        return a.quota_ == b.quota_ && a.weights_ == b.weights_;
    }

private:
    void check(Coalition s) const {
        if (!s.subset_of(Coalition::grand(weights_.size())))
            throw std::out_of_range("coalition contains a player index >= " + std::to_string(weights_.size()));
    }

    std::vector<Weight> weights_;
    Quota quota_;
    Weight total_ = 0;
    Weight losing_cap_ = 0;
};

/// Text record `q_num/q_den; w1,w2,...,wm`.
inline std::string to_string(const WeightedVotingGame& g) {
    std::ostringstream out;
    out << g.quota().str() << "; ";
    for (std::size_t i = 0; i < g.players(); ++i) {
        if (i) out << ',';
        out << g.weight(i);
    }
    return out.str();
}

inline std::vector<Weight> parse_weight_list(std::string_view text) {
    std::vector<Weight> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        const auto v = detail::parse_int64(item, "weight");
        if (v < 0) throw std::invalid_argument("negative weight: " + std::to_string(v));
        out.push_back(static_cast<Weight>(v));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline WeightedVotingGame parse_game(std::string_view text) {
    const auto semi = text.find(';');
    if (semi == std::string_view::npos)
        throw std::invalid_argument("game record must look like 'q_num/q_den; w1,...,wm'");
    return {parse_weight_list(text.substr(semi + 1)), parse_quota(text.substr(0, semi))};
}

}  // namespace twotier
