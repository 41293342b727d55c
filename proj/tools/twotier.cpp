// Command-line front end: power indices, inverse search, game enumeration,
// pivot simulation and fairness experiments.

#include "twotier/canonical.hpp"
#include "twotier/experiment.hpp"
#include "twotier/inverse.hpp"
#include "twotier/io.hpp"
#include "twotier/median_sim.hpp"
#include "twotier/power.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

using namespace twotier;

namespace {

std::string fixed(double x, int digits = 6) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << x;
    return out.str();
}

void print_power(const WeightedVotingGame& game, bool with_banzhaf) {
    const auto ssi = shapley_shubik(game);
    std::vector<Rational> bz;
    if (with_banzhaf) bz = banzhaf(game);
    std::cout << "game: " << to_string(game) << '\n';
    std::cout << "player,weight,ssi,ssi_decimal" << (with_banzhaf ? ",banzhaf,banzhaf_decimal" : "") << '\n';
    for (std::size_t i = 0; i < game.players(); ++i) {
        std::cout << i + 1 << ',' << game.weight(i) << ',' << to_string(ssi[i]) << ',' << fixed(to_double(ssi[i]));
        if (with_banzhaf) std::cout << ',' << to_string(bz[i]) << ',' << fixed(to_double(bz[i]));
        std::cout << '\n';
    }
}

struct InverseArgs {
    std::string target;
    std::string federation;
    std::string quota = "1/2";
    std::string norm = "L1";
    std::string method = "auto";
    Weight bound = 100;
    SolverParams params;
};

int run_inverse(const InverseArgs& a) {
    std::vector<double> target;
    std::vector<std::string> names;
    if (!a.federation.empty()) {
        const auto fed = load_federation(a.federation);
        target = fed.shares();
        for (const auto& c : fed.constituencies()) names.push_back(c.name);
    } else {
        target = parse_real_list(a.target, "target");
        const double sum = std::accumulate(target.begin(), target.end(), 0.0);
        if (!(sum > 0)) throw std::invalid_argument("target must have a positive sum");
        for (auto& x : target) x /= sum;
        for (std::size_t i = 0; i < target.size(); ++i) names.push_back(std::to_string(i + 1));
    }
    InverseProblemSpec spec(target, parse_quota(a.quota), parse_norm(a.norm), a.bound, a.params);
    const auto sol = solve_inverse(spec, parse_inverse_method(a.method));
    const auto& d = sol.diagnostics();
    std::cout << "game: " << to_string(sol.game()) << '\n';
    std::cout << "distance: " << format_number(sol.distance()) << " (" << to_string(spec.norm()) << ")\n";
    std::cout << "method: " << to_string(sol.method()) << ", certified optimal: "
              << (d.optimality_certified ? "yes" : "no") << ", evaluations: " << d.evaluations << '\n';
    std::cout << "player,target,weight,ssi,ssi_decimal\n";
    for (std::size_t i = 0; i < target.size(); ++i)
        std::cout << names[i] << ',' << fixed(spec.target()[i]) << ',' << sol.game().weight(i) << ','
                  << to_string(sol.ssi()[i]) << ',' << fixed(to_double(sol.ssi()[i])) << '\n';
    return 0;
}

int run_enumerate(std::size_t m, const std::string& q, Weight bound) {
    const auto cat = enumerate_game_classes(m, parse_quota(q), bound);
    std::cout << cat.size() << " classes (m=" << m << ", q=" << cat.quota.str() << ", weight bound " << bound << ")\n";
    std::cout << "representative,ssi\n";
    for (const auto& c : cat.classes) {
        const WeightedVotingGame g(c.representative, cat.quota);
        std::string w;
        for (std::size_t i = 0; i < m; ++i) w += (i ? " " : "") + std::to_string(c.representative[i]);
        std::string s;
        const auto ssi = shapley_shubik(g);
        for (std::size_t i = 0; i < m; ++i) s += (i ? " " : "") + to_string(ssi[i]);
        std::cout << w << ',' << s << '\n';
    }
    return 0;
}

// Single pivot-probability estimate for one game over one federation.
int run_simulate(const std::string& path) {
    const auto kv = KeyValueConfig::load(path);
    const auto fed = load_federation(kv.path("federation"));
    const auto quota = parse_quota(kv.get("quota", "1/2"));
    std::optional<WeightedVotingGame> game;
    if (kv.has("weights")) {
        std::vector<Weight> w;
        for (const auto& x : split_list(kv.get("weights"))) w.push_back(parse_count(x, "weight"));
        game.emplace(std::move(w), quota);
    }
    const auto rule = parse_weight_rule(kv.get("rule", "proportional"));
    WeightRuleOptions opts;
    if (kv.has("weight_total")) opts.total = parse_count(kv.get("weight_total"), "weight_total");
    if (kv.has("inverse_bound")) opts.inverse.weight_sum_bound = parse_count(kv.get("inverse_bound"), "inverse_bound");
    if (kv.has("inverse_restarts")) opts.inverse.params.restarts = parse_count(kv.get("inverse_restarts"), "inverse_restarts");
    PreferenceModel model;
    model.t = parse_double(kv.get("t", "0"), "t");
    if (kv.has("g")) model.idiosyncratic = parse_distribution(kv.get("g"));
    if (kv.has("h")) model.constituency = parse_distribution(kv.get("h"));
    const auto reps = kv.has("replications") ? parse_count(kv.get("replications"), "replications") : std::uint64_t{100000};
    const auto seed = kv.has("seed") ? parse_count(kv.get("seed"), "seed") : std::uint64_t{1};
    const auto workers = kv.has("workers") ? parse_count(kv.get("workers"), "workers") : std::uint64_t{0};
    opts.inverse.params.seed = seed;
    opts.inverse.params.workers = workers;
    if (const auto extra = kv.unused_keys(); !extra.empty()) throw FormatError("unknown config key '" + extra.front() + "'");
    if (!game) game.emplace(build_weights(fed, rule, quota, opts));

    const auto est = estimate_pivot_probabilities(fed, *game, model, reps, seed, workers);
    const auto ssi = shapley_shubik(*game);
    std::cout << "game: " << to_string(*game) << '\n';
    std::cout << "t: " << format_number(model.t) << ", replications: " << reps << ", seed: " << seed << '\n';
    std::cout << "name,population,weight,ssi,pi_hat,std_err\n";
    for (std::size_t i = 0; i < fed.size(); ++i)
        std::cout << fed[i].name << ',' << fed[i].population << ',' << game->weight(i) << ',' << fixed(to_double(ssi[i]))
                  << ',' << fixed(est.pi_hat[i]) << ',' << fixed(est.std_err[i]) << '\n';
    std::cout << "deviation: " << format_number(fairness_deviation(est.pi_hat, fed))
              << " (noise proxy " << format_number(est.std_err_sum()) << ")\n";
    return 0;
}

int run_experiment_cmd(const std::string& path) {
    const auto cfg = parse_experiment_config(KeyValueConfig::load(path));
    const auto res = run_experiment(cfg);
    std::cout << games_text(res) << '\n' << results_csv(res);
    std::cout << "wrote " << cfg.output.string() << " and " << cfg.games_output.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted voting games and two-tier fairness experiments"};
    app.require_subcommand(1);

    std::string game_text;
    bool with_banzhaf = false;
    auto* power = app.add_subcommand("power", "Exact Shapley-Shubik (and Banzhaf) indices of a game");
    power->add_option("game", game_text, "Game record, e.g. '1/2; 42,25,24,9'")->required();
    power->add_flag("--banzhaf", with_banzhaf, "Also print raw Banzhaf measures");

    InverseArgs inv;
    auto* inverse = app.add_subcommand("inverse", "Weights whose Shapley-Shubik index best matches a target");
    inverse->add_option("target", inv.target, "Comma-separated target shares (normalized to sum 1)");
    inverse->add_option("--federation", inv.federation, "Use population shares from a name,population CSV");
    inverse->add_option("--quota", inv.quota, "Relative quota, e.g. 1/2 or 0.74")->capture_default_str();
    inverse->add_option("--norm", inv.norm, "L1, L2 or Linf")->capture_default_str();
    inverse->add_option("--bound", inv.bound, "Maximum weight sum")->capture_default_str();
    inverse->add_option("--method", inv.method, "auto, exhaustive or local_search")->capture_default_str();
    inverse->add_option("--restarts", inv.params.restarts, "Local search restarts")->capture_default_str();
    inverse->add_option("--max-steps", inv.params.max_steps, "Local search steps per restart")->capture_default_str();
    inverse->add_option("--seed", inv.params.seed, "Random seed")->capture_default_str();
    inverse->add_option("--workers", inv.params.workers, "Worker threads (0 = all cores)")->capture_default_str();

    std::size_t players = 0;
    std::string quota_text;
    Weight bound = 8;
    auto* enumerate = app.add_subcommand("enumerate", "Structurally distinct weighted games for m players");
    enumerate->add_option("m", players, "Number of players")->required();
    enumerate->add_option("q", quota_text, "Relative quota")->required();
    enumerate->add_option("--bound", bound, "Maximum single weight")->capture_default_str();

    std::string config;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo pivot probabilities for one game");
    simulate->add_option("config", config, "key = value config file")->required()->check(CLI::ExistingFile);
    auto* experiment = app.add_subcommand("experiment", "Fairness deviation across weight rules and t");
    experiment->add_option("config", config, "key = value config file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (power->parsed()) {
            print_power(parse_game(game_text), with_banzhaf);
            return 0;
        }
        if (inverse->parsed()) {
            if (inv.target.empty() == inv.federation.empty())
                throw std::invalid_argument("give either a target or --federation");
            return run_inverse(inv);
        }
        if (enumerate->parsed()) return run_enumerate(players, quota_text, bound);
        if (simulate->parsed()) return run_simulate(config);
        if (experiment->parsed()) return run_experiment_cmd(config);
    } catch (const std::exception& e) {
        std::cerr << "twotier: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
