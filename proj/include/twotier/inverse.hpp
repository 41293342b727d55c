#pragma once

// Inverse Shapley-Shubik problem: find a weighted voting game whose exact
// SSI is as close as possible to a target vector.

#include "twotier/canonical.hpp"
#include "twotier/errors.hpp"
#include "twotier/game.hpp"
#include "twotier/parallel.hpp"
#include "twotier/power.hpp"
#include "twotier/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace twotier {

enum class Norm { L1, L2, Linf };

inline Norm parse_norm(std::string_view s) {
    if (s == "L1" || s == "l1") return Norm::L1;
    if (s == "L2" || s == "l2") return Norm::L2;
    if (s == "Linf" || s == "linf" || s == "LINF") return Norm::Linf;
    throw std::invalid_argument("unknown norm '" + std::string(s) + "' (expected L1, L2 or Linf)");
}

inline std::string to_string(Norm n) {
    switch (n) {
        case Norm::L1: return "L1";
        case Norm::L2: return "L2";
        case Norm::Linf: return "Linf";
    }
    return "?";
}

inline double distance(std::span<const double> v, std::span<const double> target, Norm norm) {
    if (v.size() != target.size())
        throw std::invalid_argument("distance: length mismatch (" + std::to_string(v.size()) + " vs " +
                                    std::to_string(target.size()) + ")");
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = std::abs(v[i] - target[i]);
        switch (norm) {
            case Norm::L1: acc += d; break;
            case Norm::L2: acc += d * d; break;
            case Norm::Linf: acc = std::max(acc, d); break;
        }
    }
    return norm == Norm::L2 ? std::sqrt(acc) : acc;
}

inline double distance(const PowerVector& v, std::span<const double> target, Norm norm) {
    const auto d = v.to_doubles();
    return distance(d, target, norm);
}

/// Integer apportionment of `total` proportional to `shares` by largest
/// remainders; ties go to the lower index.
inline std::vector<Weight> largest_remainder(std::span<const double> shares, Weight total) {
    if (shares.empty()) throw std::invalid_argument("largest_remainder: empty share vector");
    const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
    if (!(sum > 0.0)) throw std::invalid_argument("largest_remainder: shares must have a positive sum");
    std::vector<Weight> out(shares.size());
    std::vector<double> rem(shares.size());
    Weight assigned = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        if (shares[i] < 0.0) throw std::invalid_argument("largest_remainder: negative share");
        const double exact = shares[i] / sum * static_cast<double>(total);
        out[i] = static_cast<Weight>(std::floor(exact));
        rem[i] = exact - std::floor(exact);
        assigned += out[i];
    }
    std::vector<std::size_t> order(shares.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
        ++out[order[k]];
        ++assigned;
    }
    // floating point can overshoot by one unit in pathological cases
    for (std::size_t k = order.size(); assigned > total && k-- > 0;) {
        if (out[order[k]] > 0) {
            --out[order[k]];
            --assigned;
        }
    }
    return out;
}

struct SolverParams {
    std::size_t restarts = 40;
    std::size_t max_steps = 100000;
    std::uint64_t seed = 1;
    std::size_t workers = 0;  // 0 = hardware concurrency
};

inline constexpr double kTargetSumTolerance = 1e-9;
inline constexpr double kDistanceTieTolerance = 1e-12;
inline constexpr double kDefaultExhaustiveBudget = 5e7;
inline constexpr std::size_t kMaxExhaustivePlayers = 6;

class InverseProblemSpec {
public:
    InverseProblemSpec(std::vector<double> target, Quota quota, Norm norm, Weight weight_sum_bound,
                       SolverParams params = {})
        : params(params), target_(std::move(target)), quota_(quota), norm_(norm), bound_(weight_sum_bound) {
        if (target_.empty()) throw std::invalid_argument("target must have at least one component");
        if (bound_ == 0) throw std::invalid_argument("weight sum bound must be positive");
        double sum = 0.0;
        for (double v : target_) {
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("target components must be non-negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kTargetSumTolerance)
            throw std::invalid_argument("target components must sum to 1 (got " + std::to_string(sum) + ")");
        for (auto& v : target_) v /= sum;
    }

    std::span<const double> target() const { return target_; }
    std::size_t players() const { return target_.size(); }
    const Quota& quota() const { return quota_; }
    Norm norm() const { return norm_; }
    Weight weight_sum_bound() const { return bound_; }

    SolverParams params;
    double exhaustive_budget = kDefaultExhaustiveBudget;
    double power_budget = kDefaultPowerBudget;

private:
    std::vector<double> target_;
    Quota quota_;
    Norm norm_;
    Weight bound_;
};

enum class SolveMethod { exhaustive, local_search };

inline std::string to_string(SolveMethod m) { return m == SolveMethod::exhaustive ? "exhaustive" : "local_search"; }

struct SolverDiagnostics {
    std::size_t steps = 0;           // grid points visited or improving moves taken
    std::size_t restarts = 0;
    std::size_t evaluations = 0;     // exact SSI computations
    std::size_t classes = 0;         // distinct labelled games seen (exhaustive)
    bool optimality_certified = false;
};

class InverseSolution {
public:
    InverseSolution(WeightedVotingGame game, PowerVector ssi, std::span<const double> target, Norm norm,
                    SolveMethod method, SolverDiagnostics diagnostics)
        : game_(std::move(game)),
          ssi_(std::move(ssi)),
          distance_(twotier::distance(ssi_, target, norm)),
          method_(method),
          diagnostics_(diagnostics) {}

    const WeightedVotingGame& game() const { return game_; }
    const PowerVector& ssi() const { return ssi_; }
    double distance() const { return distance_; }
    SolveMethod method() const { return method_; }
    const SolverDiagnostics& diagnostics() const { return diagnostics_; }

private:
    WeightedVotingGame game_;
    PowerVector ssi_;
    double distance_;
    SolveMethod method_;
    SolverDiagnostics diagnostics_;
};

namespace detail {

// Tie-break among equally distant games: smaller weight sum, then the
// lexicographically smaller non-increasingly sorted weight vector, then the
// lexicographically larger raw vector.
inline bool tie_less(std::span<const Weight> a, std::span<const Weight> b) {
    const auto sa = std::accumulate(a.begin(), a.end(), Weight{0});
    const auto sb = std::accumulate(b.begin(), b.end(), Weight{0});
    if (sa != sb) return sa < sb;
    std::vector<Weight> ca(a.begin(), a.end()), cb(b.begin(), b.end());
    std::sort(ca.begin(), ca.end(), std::greater<>());
    std::sort(cb.begin(), cb.end(), std::greater<>());
    if (ca != cb) return ca < cb;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

struct Candidate {
    std::vector<Weight> weights;
    double distance = std::numeric_limits<double>::infinity();
};

inline bool better(const Candidate& a, const Candidate& b) {
    if (b.weights.empty()) return !a.weights.empty();
    if (a.weights.empty()) return false;
    if (std::abs(a.distance - b.distance) > kDistanceTieTolerance) return a.distance < b.distance;
    return tie_less(a.weights, b.weights);
}

inline double binomial(double n, double k) {
    double r = 1.0;
    for (double j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

}  // namespace detail

/// Labelled winning family of a small game as a bitmask over coalitions.
inline std::uint64_t winning_family_key(std::span<const Weight> w, const Quota& q) {
    const auto sums = subset_weights(w);
    const auto total = sums.back();
    const auto cap = q.floor_of(total);
    std::uint64_t key = 0;
    for (std::size_t mask = 0; mask < sums.size(); ++mask)
        if (sums[mask] > cap) key |= std::uint64_t{1} << mask;
    return key;
}

/// Number of non-zero weight vectors of length m with sum <= bound.
inline double grid_size(std::size_t m, Weight bound) {
    return detail::binomial(static_cast<double>(bound) + static_cast<double>(m), static_cast<double>(m)) - 1.0;
}

/// Complete enumeration of every weight vector with sum <= bound.
/// The result is a certified global minimum over that grid.
inline InverseSolution solve_exhaustive(const InverseProblemSpec& spec) {
    const auto m = spec.players();
    if (m > kMaxExhaustivePlayers)
        throw std::invalid_argument("exhaustive search supports at most " + std::to_string(kMaxExhaustivePlayers) +
                                    " players, got " + std::to_string(m));
    const auto bound = spec.weight_sum_bound();
    if (grid_size(m, bound) > spec.exhaustive_budget)
        throw BudgetExceeded("exhaustive grid of " + std::to_string(grid_size(m, bound)) +
                             " weight vectors exceeds the budget");

    // one representative per labelled winning family
    std::unordered_map<std::uint64_t, std::vector<Weight>> families;
    SolverDiagnostics diag;
    std::vector<Weight> w(m, 0);
    std::vector<Weight> sums(std::size_t{1} << m, 0);
    auto visit = [&] {
        for (std::size_t mask = 1; mask < sums.size(); ++mask)
            sums[mask] = sums[mask & (mask - 1)] + w[static_cast<std::size_t>(std::countr_zero(mask))];
        const auto total = sums.back();
        if (total == 0) return;
        ++diag.steps;
        const auto cap = spec.quota().floor_of(total);
        std::uint64_t key = 0;
        for (std::size_t mask = 0; mask < sums.size(); ++mask)
            if (sums[mask] > cap) key |= std::uint64_t{1} << mask;
        auto [it, inserted] = families.try_emplace(key, w);
        if (!inserted && detail::tie_less(w, it->second)) it->second = w;
    };
    auto rec = [&](auto&& self, std::size_t pos, Weight left) -> void {
        if (pos == m) {
            visit();
            return;
        }
        for (Weight v = 0; v <= left; ++v) {
            w[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, bound);

    detail::Candidate best;
    for (const auto& [key, rep] : families) {
        const auto ssi = shapley_shubik(WeightedVotingGame(rep, spec.quota()), spec.power_budget);
        ++diag.evaluations;
        detail::Candidate c{rep, distance(ssi, spec.target(), spec.norm())};
        if (detail::better(c, best)) best = std::move(c);
    }
    diag.classes = families.size();
    diag.optimality_certified = true;

    WeightedVotingGame game(best.weights, spec.quota());
    auto ssi = shapley_shubik(game, spec.power_budget);
    return {std::move(game), std::move(ssi), spec.target(), spec.norm(), SolveMethod::exhaustive, diag};
}

namespace detail {

struct ClimbResult {
    Candidate best;
    std::size_t steps = 0;
    std::size_t evaluations = 0;
};

inline double evaluate(const InverseProblemSpec& spec, const std::vector<Weight>& w) {
    return distance(shapley_shubik(WeightedVotingGame(w, spec.quota()), spec.power_budget), spec.target(),
                    spec.norm());
}

// Best-improvement hill climbing over the +-1 single-coordinate
// neighbourhood, weights kept non-negative, not all zero, and with sum
// within the bound.
inline ClimbResult climb(const InverseProblemSpec& spec, std::vector<Weight> start) {
    ClimbResult out;
    const auto bound = spec.weight_sum_bound();
    Weight total = std::accumulate(start.begin(), start.end(), Weight{0});
    Candidate current{start, evaluate(spec, start)};
    ++out.evaluations;
    auto w = current.weights;
    while (out.steps < spec.params.max_steps) {
        Candidate step;
        for (std::size_t i = 0; i < w.size(); ++i) {
            for (int dir : {-1, +1}) {
                if (dir < 0 && (w[i] == 0 || total == 1)) continue;
                if (dir > 0 && total >= bound) continue;
                w[i] = dir < 0 ? w[i] - 1 : w[i] + 1;
                Candidate c{w, evaluate(spec, w)};
                ++out.evaluations;
                w[i] = dir < 0 ? w[i] + 1 : w[i] - 1;
                if (c.distance < current.distance - kDistanceTieTolerance && better(c, step)) step = std::move(c);
            }
        }
        if (step.weights.empty()) break;
        total = std::accumulate(step.weights.begin(), step.weights.end(), Weight{0});
        current = std::move(step);
        w = current.weights;
        ++out.steps;
    }
    out.best = std::move(current);
    return out;
}

inline std::vector<Weight> restart_point(const InverseProblemSpec& spec, std::size_t restart) {
    const auto m = spec.players();
    const auto bound = spec.weight_sum_bound();
    if (restart == 0) return largest_remainder(spec.target(), bound);

    auto rng = substream(spec.params.seed, restart);
    if (restart % 2 == 0) {
        // uniform over {w >= 0 : sum(w) <= bound}: m sorted distinct cut
        // points in {0..bound+m-1} (stars and bars)
        std::vector<Weight> cuts;
        const Weight slots = bound + m;
        while (cuts.size() < m) {
            const Weight c = rng() % slots;
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<Weight> w(m);
        Weight prev = 0;
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = cuts[i] - prev - (i == 0 ? 0 : 1);
            prev = cuts[i];
        }
        if (std::accumulate(w.begin(), w.end(), Weight{0}) == 0) w[rng() % m] = 1;
        return w;
    }

    // target perturbed towards a random simplex point, at a log-uniform
    // total: coarse grids make single-unit moves change the game
    const Weight lo = std::min<Weight>(bound, std::max<Weight>(1, m));
    const double span = static_cast<double>(bound - lo + 1);
    const auto total = std::min<Weight>(bound, lo + static_cast<Weight>(std::floor(std::pow(span, uniform_open01(rng)))) - 1);
    const double mix = uniform_open01(rng);
    std::vector<double> noise(m);
    double noise_sum = 0.0;
    for (auto& e : noise) noise_sum += (e = -std::log(uniform_open01(rng)));
    std::vector<double> shares(m);
    for (std::size_t i = 0; i < m; ++i) shares[i] = (1.0 - mix) * spec.target()[i] + mix * noise[i] / noise_sum;
    return largest_remainder(shares, total);
}

}  // namespace detail

/// Seeded multi-restart hill climbing. Restart 0 starts from proportional
/// weights at the full weight bound, even restarts from uniform grid points,
/// odd restarts from random perturbations of the target at random totals.
inline InverseSolution solve_local_search(const InverseProblemSpec& spec) {
    const auto restarts = std::max<std::size_t>(1, spec.params.restarts);
    std::vector<detail::ClimbResult> results(restarts);
    parallel_chunks(restarts, spec.params.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (auto r = begin; r < end; ++r) results[r] = detail::climb(spec, detail::restart_point(spec, r));
    });

    SolverDiagnostics diag;
    diag.restarts = restarts;
    detail::Candidate best;
    for (auto& r : results) {
        diag.steps += r.steps;
        diag.evaluations += r.evaluations;
        if (detail::better(r.best, best)) best = r.best;
    }
    WeightedVotingGame game(best.weights, spec.quota());
    auto ssi = shapley_shubik(game, spec.power_budget);
    return {std::move(game), std::move(ssi), spec.target(), spec.norm(), SolveMethod::local_search, diag};
}

}  // namespace twotier
