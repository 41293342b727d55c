#pragma once

// Weight allocation rules and fairness experiments over a grid of t.

#include "twotier/inverse.hpp"
#include "twotier/io.hpp"
#include "twotier/median_sim.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace twotier {

enum class WeightRule { proportional, square_root, shapley_inverse };

inline WeightRule parse_weight_rule(std::string_view s) {
    if (s == "proportional") return WeightRule::proportional;
    if (s == "square_root") return WeightRule::square_root;
    if (s == "shapley_inverse") return WeightRule::shapley_inverse;
    throw std::invalid_argument("unknown weight rule '" + std::string(s) +
                                "' (expected proportional, square_root or shapley_inverse)");
}

inline std::string to_string(WeightRule r) {
    switch (r) {
        case WeightRule::proportional: return "proportional";
        case WeightRule::square_root: return "square_root";
        case WeightRule::shapley_inverse: return "shapley_inverse";
    }
    return "?";
}

enum class InverseMethod { automatic, exhaustive, local_search };

inline InverseMethod parse_inverse_method(std::string_view s) {
    if (s == "auto") return InverseMethod::automatic;
    if (s == "exhaustive") return InverseMethod::exhaustive;
    if (s == "local_search") return InverseMethod::local_search;
    throw std::invalid_argument("unknown inverse method '" + std::string(s) + "' (expected auto, exhaustive or local_search)");
}

struct InverseOptions {
    Norm norm = Norm::L1;
    Weight weight_sum_bound = 1000;
    InverseMethod method = InverseMethod::automatic;
    SolverParams params;
};

/// Exhaustive search when the game is small enough to enumerate, local
/// search otherwise (or as requested).
inline InverseSolution solve_inverse(const InverseProblemSpec& spec, InverseMethod method) {
    if (method == InverseMethod::exhaustive) return solve_exhaustive(spec);
    if (method == InverseMethod::local_search) return solve_local_search(spec);
    if (spec.players() <= kMaxExhaustivePlayers &&
        grid_size(spec.players(), spec.weight_sum_bound()) <= spec.exhaustive_budget)
        return solve_exhaustive(spec);
    return solve_local_search(spec);
}

inline InverseSolution solve_linear_shapley(const FederationSpec& fed, Quota q, const InverseOptions& opts) {
    InverseProblemSpec spec(fed.shares(), q, opts.norm, opts.weight_sum_bound, opts.params);
    return solve_inverse(spec, opts.method);
}

struct WeightRuleOptions {
    Weight total = 1000;  // weight total for proportional and square_root
    InverseOptions inverse;
};

inline WeightedVotingGame build_weights(const FederationSpec& fed, WeightRule rule, Quota q,
                                        const WeightRuleOptions& opts = {}) {
    switch (rule) {
        case WeightRule::proportional: {
            const auto shares = fed.shares();
            return {largest_remainder(shares, opts.total), q};
        }
        case WeightRule::square_root: {
            std::vector<double> roots;
            for (const auto& c : fed.constituencies()) roots.push_back(std::sqrt(static_cast<double>(c.population)));
            return {largest_remainder(roots, opts.total), q};
        }
        case WeightRule::shapley_inverse:
            return solve_linear_shapley(fed, q, opts.inverse).game();
    }
    throw std::invalid_argument("unknown weight rule");
}

struct ExperimentConfig {
    std::filesystem::path federation;
    Quota quota;
    std::vector<double> t_grid{0, 1, 2, 5, 10, 20};
    std::uint64_t replications = 100000;
    std::uint64_t seed = 1;
    std::vector<WeightRule> rules{WeightRule::proportional, WeightRule::shapley_inverse};
    WeightRuleOptions weights;
    ShockDistribution idiosyncratic = ShockDistribution::uniform(-0.5, 0.5);
    ShockDistribution constituency = ShockDistribution::normal(0.0, 1e-8);
    std::filesystem::path output;
    std::filesystem::path games_output;  // defaults to <output>.games
    std::size_t workers = 0;

    void validate() const {
        if (t_grid.empty()) throw std::invalid_argument("t_grid must not be empty");
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            if (!(t_grid[i] >= 0.0)) throw std::invalid_argument("t_grid values must be non-negative");
            if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t_grid must be strictly increasing");
        }
        if (replications == 0) throw std::invalid_argument("replications must be at least 1");
        if (rules.empty()) throw std::invalid_argument("at least one weight rule is required");
    }
};

inline ExperimentConfig parse_experiment_config(const KeyValueConfig& kv) {
    ExperimentConfig cfg;
    cfg.federation = kv.path("federation");
    cfg.quota = parse_quota(kv.get("quota", "1/2"));
    if (kv.has("t_grid")) cfg.t_grid = parse_real_list(kv.get("t_grid"), "t_grid");
    if (kv.has("replications")) cfg.replications = parse_count(kv.get("replications"), "replications");
    if (kv.has("seed")) cfg.seed = parse_count(kv.get("seed"), "seed");
    if (kv.has("rules")) {
        cfg.rules.clear();
        for (const auto& r : split_list(kv.get("rules"))) cfg.rules.push_back(parse_weight_rule(r));
    }
    if (kv.has("weight_total")) cfg.weights.total = parse_count(kv.get("weight_total"), "weight_total");
    auto& inv = cfg.weights.inverse;
    inv.norm = parse_norm(kv.get("inverse_norm", "L1"));
    if (kv.has("inverse_bound")) inv.weight_sum_bound = parse_count(kv.get("inverse_bound"), "inverse_bound");
    inv.method = parse_inverse_method(kv.get("inverse_method", "auto"));
    if (kv.has("inverse_restarts")) inv.params.restarts = parse_count(kv.get("inverse_restarts"), "inverse_restarts");
    if (kv.has("inverse_max_steps")) inv.params.max_steps = parse_count(kv.get("inverse_max_steps"), "inverse_max_steps");
    inv.params.seed = cfg.seed;
    if (kv.has("g")) cfg.idiosyncratic = parse_distribution(kv.get("g"));
    if (kv.has("h")) cfg.constituency = parse_distribution(kv.get("h"));
    if (kv.has("workers")) cfg.workers = parse_count(kv.get("workers"), "workers");
    inv.params.workers = cfg.workers;
    cfg.output = kv.path("output");
    cfg.games_output = kv.has("games_output") ? kv.path("games_output") : std::filesystem::path(cfg.output.string() + ".games");
    if (const auto extra = kv.unused_keys(); !extra.empty()) throw FormatError("unknown config key '" + extra.front() + "'");
    cfg.validate();
    return cfg;
}

struct ExperimentRow {
    double t = 0;
    WeightRule rule = WeightRule::proportional;
    double deviation = 0;
    double std_err_proxy = 0;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

struct RuleGame {
    WeightRule rule;
    WeightedVotingGame game;
    PowerVector ssi;
    std::optional<InverseSolution> solution;  // shapley_inverse only
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;  // ordered by (t, rule)
    std::vector<RuleGame> games;

    const ExperimentRow& row(double t, WeightRule rule) const {
        for (const auto& r : rows)
            if (r.t == t && r.rule == rule) return r;
        throw std::out_of_range("no experiment row for t=" + std::to_string(t) + ", rule " + to_string(rule));
    }
};

inline std::string format_number(double x) {
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

inline std::string results_csv(const ExperimentResult& res) {
    std::ostringstream out;
    out << "t,rule,deviation,std_err_proxy,replications,seed\n";
    for (const auto& r : res.rows)
        out << format_number(r.t) << ',' << to_string(r.rule) << ',' << format_number(r.deviation) << ','
            << format_number(r.std_err_proxy) << ',' << r.replications << ',' << r.seed << '\n';
    return out.str();
}

inline std::string power_list(const PowerVector& pv) {
    std::string s;
    for (std::size_t i = 0; i < pv.size(); ++i) s += (i ? "," : "") + to_string(pv[i]);
    return s;
}

inline std::string games_text(const ExperimentResult& res) {
    std::ostringstream out;
    for (const auto& g : res.games) {
        out << "[" << to_string(g.rule) << "]\n";
        out << "game = " << to_string(g.game) << '\n';
        out << "ssi = " << power_list(g.ssi) << '\n';
        if (g.solution)
            out << "inverse = " << to_string(g.solution->method()) << ", distance "
                << format_number(g.solution->distance()) << ", certified "
                << (g.solution->diagnostics().optimality_certified ? "yes" : "no") << '\n';
    }
    return out.str();
}

/// Runs every (t, rule) cell. All cells share the configured seed, so rules
/// are compared on common random numbers.
inline ExperimentResult compute_experiment(const ExperimentConfig& cfg, const FederationSpec& fed) {
    cfg.validate();
    ExperimentResult res;
    for (auto rule : cfg.rules) {
        std::optional<InverseSolution> sol;
        if (rule == WeightRule::shapley_inverse) sol = solve_linear_shapley(fed, cfg.quota, cfg.weights.inverse);
        auto game = sol ? sol->game() : build_weights(fed, rule, cfg.quota, cfg.weights);
        auto ssi = shapley_shubik(game);
        res.games.push_back({rule, std::move(game), std::move(ssi), std::move(sol)});
    }
    for (double t : cfg.t_grid) {
        PreferenceModel model{t, cfg.idiosyncratic, cfg.constituency};
        for (const auto& g : res.games) {
            const auto est = estimate_pivot_probabilities(fed, g.game, model, cfg.replications, cfg.seed, cfg.workers);
            res.rows.push_back({t, g.rule, fairness_deviation(est.pi_hat, fed), est.std_err_sum(), cfg.replications, cfg.seed});
        }
    }
    return res;
}

/// Computes the experiment and writes the results CSV and the companion
/// games file. Partial output is removed on failure.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("error writing " + p.string());
    };
    try {
        const auto fed = load_federation(cfg.federation);
        auto res = compute_experiment(cfg, fed);
        write(cfg.output, results_csv(res));
        write(cfg.games_output, games_text(res));
        return res;
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(cfg.output, ec);
        std::filesystem::remove(cfg.games_output, ec);
        throw;
    }
}

}  // namespace twotier
