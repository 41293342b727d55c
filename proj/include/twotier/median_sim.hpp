#pragma once

// Monte Carlo engine for the two-tier median voter model.
//
// Voter l in constituency i has ideal point t * mu_i + eps_l with mu_i ~ H
// and eps_l ~ G. Delegate i adopts the constituency median
// lambda_i = t * mu_i + median(eps), and the assembly outcome is the ideal
// point of the delegate at which the cumulative weight, in ascending
// ideal-point order, first exceeds the quota.

#include "twotier/distribution.hpp"
#include "twotier/game.hpp"
#include "twotier/parallel.hpp"
#include "twotier/power.hpp"
#include "twotier/rng.hpp"

#include <boost/random/beta_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace twotier {

struct Constituency {
    std::string name;
    std::uint64_t population = 0;

    friend bool operator==(const Constituency&, const Constituency&) = default;
};

class FederationSpec {
public:
    explicit FederationSpec(std::vector<Constituency> constituencies) : parts_(std::move(constituencies)) {
        if (parts_.empty()) throw std::invalid_argument("no constituencies");
        std::set<std::string> names;
        for (const auto& c : parts_) {
            if (c.population == 0) throw std::invalid_argument("constituency '" + c.name + "' has zero population");
            if (!names.insert(c.name).second) throw std::invalid_argument("duplicate constituency name '" + c.name + "'");
            total_ += c.population;
        }
    }

    /// Anonymous constituencies named C1..Cm.
    static FederationSpec from_sizes(std::span<const std::uint64_t> sizes) {
        std::vector<Constituency> parts;
        for (std::size_t i = 0; i < sizes.size(); ++i) parts.push_back({"C" + std::to_string(i + 1), sizes[i]});
        return FederationSpec(std::move(parts));
    }

    std::size_t size() const { return parts_.size(); }
    const Constituency& operator[](std::size_t i) const { return parts_[i]; }
    std::uint64_t population(std::size_t i) const { return parts_.at(i).population; }
    std::uint64_t total() const { return total_; }
    const std::vector<Constituency>& constituencies() const { return parts_; }

    /// Relative population sizes n_i / n.
    std::vector<double> shares() const {
        std::vector<double> out;
        for (const auto& c : parts_) out.push_back(static_cast<double>(c.population) / static_cast<double>(total_));
        return out;
    }

    friend bool operator==(const FederationSpec&, const FederationSpec&) = default;

private:
    std::vector<Constituency> parts_;
    std::uint64_t total_ = 0;
};

struct PreferenceModel {
    double t = 0.0;
    ShockDistribution idiosyncratic = ShockDistribution::uniform(-0.5, 0.5);   // G
    ShockDistribution constituency = ShockDistribution::normal(0.0, 1e-8);     // H

    void validate() const {
        if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("similarity parameter t must be >= 0");
    }
};

/// Sample median of n i.i.d. draws from G, drawn through the uniform order
/// statistics: odd n = 2k+1 uses U_(k+1) ~ Beta(k+1, k+1); even n = 2k uses
/// U_(k+1) ~ Beta(k+1, k) and U_(k) = U_(k+1) * V^(1/k), averaging the two
/// quantiles.
template <class Engine>
double sample_median_shock(std::uint64_t n, const ShockDistribution& g, Engine& rng) {
    if (n == 0) throw std::invalid_argument("median of an empty population");
    const auto k = static_cast<double>(n / 2);
    if (n % 2 == 1) {
        const double u = boost::random::beta_distribution<double>(k + 1.0, k + 1.0)(rng);
        return g.quantile(u);
    }
    const double upper = boost::random::beta_distribution<double>(k + 1.0, k)(rng);
    const double lower = upper * std::pow(uniform_open01(rng), 1.0 / k);
    return 0.5 * (g.quantile(lower) + g.quantile(upper));
}

/// Draws mu_i ~ H and lambda_i = t * mu_i + median shock, i = 1..m.
template <class Engine>
void sample_delegate_ideals(const FederationSpec& fed, const PreferenceModel& model, Engine& rng,
                            std::span<double> lambda, std::span<double> mu) {
    const auto m = fed.size();
    if (lambda.size() != m || mu.size() != m) throw std::invalid_argument("output spans must have length m");
    for (std::size_t i = 0; i < m; ++i) {
        mu[i] = model.constituency.sample(rng);
        lambda[i] = model.t * mu[i] + sample_median_shock(fed.population(i), model.idiosyncratic, rng);
    }
}

template <class Engine>
std::vector<double> sample_delegate_ideals(const FederationSpec& fed, const PreferenceModel& model, Engine& rng) {
    std::vector<double> lambda(fed.size()), mu(fed.size());
    sample_delegate_ideals(fed, model, rng, lambda, mu);
    return lambda;
}

/// Sorts constituencies by ascending ideal point (ties: lower index first)
/// and returns the index at which the cumulative weight first exceeds the
/// quota. `order` is scratch space of length m.
inline std::size_t pivotal_index(std::span<const double> lambda, const WeightedVotingGame& game,
                                 std::span<std::size_t> order) {
    const auto m = game.players();
    if (lambda.size() != m || order.size() != m)
        throw std::invalid_argument("ideal point vector length must equal the number of players");
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lambda[a] < lambda[b] || (lambda[a] == lambda[b] && a < b);
    });
    Weight acc = 0;
    for (auto i : order) {
        acc += game.weight(i);
        if (game.is_winning_weight(acc)) return i;
    }
    return order.back();  // unreachable: the grand coalition always wins
}

inline std::size_t pivotal_index(std::span<const double> lambda, const WeightedVotingGame& game) {
    std::vector<std::size_t> order(lambda.size());
    return pivotal_index(lambda, game, order);
}

struct PivotEstimate {
    std::vector<double> pi_hat;
    std::vector<double> std_err;
    std::vector<std::uint64_t> counts;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;

    /// Sum of per-component standard errors: noise proxy for L1 quantities.
    double std_err_sum() const { return std::accumulate(std_err.begin(), std_err.end(), 0.0); }
};

inline PivotEstimate make_pivot_estimate(std::vector<std::uint64_t> counts, std::uint64_t replications,
                                         std::uint64_t seed) {
    PivotEstimate est;
    const auto r = static_cast<double>(replications);
    for (auto c : counts) {
        const double p = static_cast<double>(c) / r;
        est.pi_hat.push_back(p);
        est.std_err.push_back(std::sqrt(p * (1.0 - p) / r));
    }
    est.counts = std::move(counts);
    est.replications = replications;
    est.seed = seed;
    return est;
}

/// Estimates pi_i(t), the probability that constituency i's delegate is
/// pivotal. Replication r always draws from substream(seed, r), so the
/// estimate is identical for any worker count.
inline PivotEstimate estimate_pivot_probabilities(const FederationSpec& fed, const WeightedVotingGame& game,
                                                  const PreferenceModel& model, std::uint64_t replications,
                                                  std::uint64_t seed, std::size_t workers = 0) {
    model.validate();
    if (replications == 0) throw std::invalid_argument("replications must be at least 1");
    const auto m = fed.size();
    if (game.players() != m)
        throw std::invalid_argument("game has " + std::to_string(game.players()) + " players but the federation has " +
                                    std::to_string(m) + " constituencies");
    workers = workers == 0 ? default_workers() : workers;
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(m, 0));
    parallel_chunks(replications, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::vector<double> lambda(m), mu(m);
        std::vector<std::size_t> order(m);
        auto& counts = partial[chunk];
        for (auto r = begin; r < end; ++r) {
            auto rng = substream(seed, r);
            sample_delegate_ideals(fed, model, rng, lambda, mu);
            ++counts[pivotal_index(lambda, game, order)];
        }
    });
    std::vector<std::uint64_t> counts(m, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < m; ++i) counts[i] += p[i];
    return make_pivot_estimate(std::move(counts), replications, seed);
}

/// Per-voter influence p_i = pi_i / n_i for voters of constituency i.
inline std::vector<double> voter_influence(std::span<const double> pi, const FederationSpec& fed) {
    if (pi.size() != fed.size()) throw std::invalid_argument("pivot vector length must equal the number of constituencies");
    std::vector<double> out(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) out[i] = pi[i] / static_cast<double>(fed.population(i));
    return out;
}

inline std::vector<double> voter_influence(const PivotEstimate& est, const FederationSpec& fed) {
    return voter_influence(est.pi_hat, fed);
}

inline std::vector<double> voter_influence(const PowerVector& pv, const FederationSpec& fed) {
    return voter_influence(pv.to_doubles(), fed);
}

/// L1 distance between voter-level influences and the egalitarian (1/n,...,1/n),
/// evaluated as sum_i |pi_i - n_i/n|.
inline double fairness_deviation(std::span<const double> pi, const FederationSpec& fed) {
    if (pi.size() != fed.size()) throw std::invalid_argument("pivot vector length must equal the number of constituencies");
    const auto n = static_cast<double>(fed.total());
    double acc = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) acc += std::abs(pi[i] - static_cast<double>(fed.population(i)) / n);
    return acc;
}

struct OrderingMatch {
    double rate = 0.0;
    double std_err = 0.0;
    std::uint64_t replications = 0;
};

/// Fraction of replications in which delegates' ideal points are ordered
/// exactly like the constituency shocks mu.
inline OrderingMatch ordering_match_rate(const FederationSpec& fed, const PreferenceModel& model,
                                         std::uint64_t replications, std::uint64_t seed, std::size_t workers = 0) {
    model.validate();
    if (!(model.t > 0.0)) throw std::invalid_argument("ordering match rate requires t > 0");
    if (replications == 0) throw std::invalid_argument("replications must be at least 1");
    const auto m = fed.size();
    workers = workers == 0 ? default_workers() : workers;
    std::vector<std::uint64_t> matches(workers, 0);
    parallel_chunks(replications, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::vector<double> lambda(m), mu(m);
        std::vector<std::size_t> by_lambda(m), by_mu(m);
        for (auto r = begin; r < end; ++r) {
            auto rng = substream(seed, r);
            sample_delegate_ideals(fed, model, rng, lambda, mu);
            std::iota(by_lambda.begin(), by_lambda.end(), std::size_t{0});
            std::iota(by_mu.begin(), by_mu.end(), std::size_t{0});
            std::sort(by_lambda.begin(), by_lambda.end(), [&](auto a, auto b) { return lambda[a] < lambda[b]; });
            std::sort(by_mu.begin(), by_mu.end(), [&](auto a, auto b) { return mu[a] < mu[b]; });
            if (by_lambda == by_mu) ++matches[chunk];
        }
    });
    OrderingMatch out;
    out.replications = replications;
    out.rate = static_cast<double>(std::accumulate(matches.begin(), matches.end(), std::uint64_t{0})) /
               static_cast<double>(replications);
    out.std_err = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(replications));
    return out;
}

}  // namespace twotier
