// Acceptance suite. `acceptance <n>` checks criterion n, `acceptance` checks
// all of them. Each prints one line: "criterion N: PASS|FAIL <details>".
// Exit status is 0 only if every requested criterion passes.

#include "twotier/canonical.hpp"
#include "twotier/experiment.hpp"
#include "twotier/inverse.hpp"
#include "twotier/median_sim.hpp"
#include "twotier/power.hpp"

#include "oracles.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace twotier;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
    }
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double x, int digits = 6) {
    std::ostringstream out;
    out.precision(digits);
    out << x;
    return out.str();
}

std::string list(const PowerVector& pv) { return "(" + power_list(pv) + ")"; }

PowerVector rationals(std::initializer_list<std::pair<int, int>> xs) {
    PowerVector pv;
    for (auto [n, d] : xs) pv.values.emplace_back(n, d);
    return pv;
}

void exact_fixtures(Outcome& out) {
    Stopwatch clock;
    const auto a = shapley_shubik(parse_game("1/2; 42,25,24,9"));
    const auto b = shapley_shubik(parse_game("1/2; 40,25,25,10"));
    const double secs = clock.seconds();
    out.check(a == rationals({{1, 2}, {1, 6}, {1, 6}, {1, 6}}), "[1/2; 42,25,24,9] -> " + list(a));
    out.check(b == rationals({{5, 12}, {1, 4}, {1, 4}, {1, 12}}), "[1/2; 40,25,25,10] -> " + list(b));
    out.check(secs < 1.0, "runtime " + num(secs, 3) + " s < 1 s");
}

void enumeration(Outcome& out) {
    Stopwatch clock;
    const auto at8 = enumerate_game_classes(4, Quota::half(), 8);
    const auto at12 = enumerate_game_classes(4, Quota::half(), 12);
    const double secs = clock.seconds();
    out.check(at8.size() == 9, "bound 8: " + std::to_string(at8.size()) + " classes (want 9)");
    bool same = at8.size() == at12.size();
    for (std::size_t i = 0; same && i < at8.size(); ++i) same = at8.classes[i].signature == at12.classes[i].signature;
    out.check(same, "bound 12: " + std::to_string(at12.size()) + " classes, identical set");
    out.check(secs < 60.0, "runtime " + num(secs, 3) + " s < 60 s");
}

void inverse_optimum(Outcome& out) {
    const std::vector<double> target{0.49, 0.33, 0.09, 0.09};
    constexpr Weight kBound = 100;
    InverseProblemSpec exact_spec(target, Quota::half(), Norm::L1, kBound);
    const auto exact = solve_exhaustive(exact_spec);
    const auto want = rationals({{5, 12}, {1, 4}, {1, 4}, {1, 12}});
    out.check(exact.ssi() == want, "exhaustive (bound " + std::to_string(kBound) + ") SSI " + list(exact.ssi()) +
                                       " at L1 " + num(exact.distance(), 8) + ", want " + list(want) + " at L1 " +
                                       num(distance(want, target, Norm::L1), 8));
    out.check(exact.diagnostics().optimality_certified, "certified optimum");
    SolverParams params;
    params.restarts = 20;
    InverseProblemSpec local_spec(target, Quota::half(), Norm::L1, kBound, params);
    const auto local = solve_local_search(local_spec);
    out.check(std::abs(local.distance() - exact.distance()) <= 1e-12,
              "local search (20 restarts) L1 " + num(local.distance(), 12) + " vs certified " + num(exact.distance(), 12));
}

void oracle_equivalence(Outcome& out) {
    Stopwatch clock;
    constexpr Weight kBound = 8;
    std::size_t games = 0, mismatches = 0;
    for (const Quota q : {Quota(1, 2), Quota(2, 3), Quota(37, 50)})
        for (std::size_t m = 1; m <= 6; ++m)
            for (const auto& c : enumerate_game_classes(m, q, kBound).classes) {
                const WeightedVotingGame g(c.representative, q);
                ++games;
                if (shapley_shubik(g) != shapley_permutation_oracle(g)) ++mismatches;
            }
    const double secs = clock.seconds();
    out.check(mismatches == 0, std::to_string(games) + " classes (m <= 6, weight bound " + std::to_string(kBound) +
                                   ", q in {1/2, 2/3, 37/50}), " + std::to_string(mismatches) + " mismatches");
    out.check(secs < 300.0, "runtime " + num(secs, 3) + " s < 300 s");
}

void penrose(Outcome& out) {
    const auto d = penrose_decisiveness(101);
    const double exact = to_double(d.exact);
    const double rel = std::abs(exact - d.approx) / exact;
    out.check(rel < 0.005, "n=101 exact " + num(exact, 10) + ", approx " + num(d.approx, 10) + ", rel gap " + num(rel, 4));
    bool decreasing = true;
    Rational prev = 2;
    for (std::uint64_t n = 1; n <= 1001; n += 2) {
        const auto v = penrose_decisiveness(n).exact;
        decreasing = decreasing && v < prev;
        prev = v;
    }
    out.check(decreasing, "exact strictly decreasing over n = 1, 3, ..., 1001");
}

void compare_to_shapley(Outcome& out, const FederationSpec& fed, double t, std::uint64_t reps) {
    const auto game = parse_game("1/2; 42,25,24,9");
    Stopwatch clock;
    const auto est = estimate_pivot_probabilities(fed, game, PreferenceModel{t}, reps, 1);
    const double secs = clock.seconds();
    const auto phi = shapley_shubik(game).to_doubles();
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double z = std::abs(est.pi_hat[i] - phi[i]) / est.std_err[i];
        out.check(z <= 3.0, "pi_" + std::to_string(i + 1) + " " + num(est.pi_hat[i], 5) + " vs " + num(phi[i], 5) +
                                " (" + num(z, 3) + " SE)");
    }
    out.check(secs < 60.0, "runtime " + num(secs, 3) + " s < 60 s");
}

void convergence(Outcome& out) {
    const std::uint64_t sizes[] = {4000000, 2500000, 2400000, 900000};
    compare_to_shapley(out, FederationSpec::from_sizes(sizes), 100.0, 100000);
}

void iid_recovery(Outcome& out) {
    const std::uint64_t sizes[] = {1000000, 1000000, 1000000, 1000000};
    compare_to_shapley(out, FederationSpec::from_sizes(sizes), 0.0, 100000);
}

void sample_size_effect(Outcome& out) {
    constexpr std::uint64_t n = 10001;
    constexpr std::size_t m = 25;
    std::vector<std::uint64_t> sizes(m);
    for (std::size_t i = 0; i < m; ++i) sizes[i] = i % 2 == 0 ? n : 4 * n;
    const auto fed = FederationSpec::from_sizes(sizes);
    const WeightedVotingGame game(std::vector<Weight>(m, 1), Quota::half());
    Stopwatch clock;
    const auto est = estimate_pivot_probabilities(fed, game, PreferenceModel{0.0}, 1000000, 1);
    const double secs = clock.seconds();
    double small = 0, big = 0;
    std::size_t ns = 0, nb = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (sizes[i] == n) {
            small += est.pi_hat[i];
            ++ns;
        } else {
            big += est.pi_hat[i];
            ++nb;
        }
    }
    const double ratio = (big / nb) / (small / ns);
    out.check(ratio >= 1.7 && ratio <= 2.3, "big:small pivot ratio " + num(ratio, 4) + " in [1.7, 2.3]");
    out.check(secs < 300.0, "runtime " + num(secs, 3) + " s < 300 s");
}

void sampler_fidelity(Outcome& out) {
    constexpr std::size_t kSamples = 100000;
    const double critical = oracle::ks_critical(0.01, kSamples, kSamples);
    for (const auto& g : {ShockDistribution::uniform(-0.5, 0.5), ShockDistribution::normal(0.0, 1.0)}) {
        for (std::uint64_t n : {3, 11, 101}) {
            SplitMix64 fast(1000 + n), slow(5000 + n);
            std::vector<double> a(kSamples), b(kSamples), scratch;
            for (auto& x : a) x = sample_median_shock(n, g, fast);
            for (auto& x : b) x = oracle::brute_force_median(n, g, slow, scratch);
            const double d = oracle::ks_statistic(a, b);
            out.check(d < critical, g.str() + " n=" + std::to_string(n) + " KS " + num(d, 4));
        }
    }
    out.detail << "; critical " << num(critical, 4);
}

void fairness_reproduction(Outcome& out) {
    Stopwatch clock;
    const auto fed = load_federation(TWOTIER_DATA_DIR "/eu28.csv");
    auto run = [&](Quota q) {
        ExperimentConfig cfg;
        cfg.quota = q;
        cfg.t_grid = {1, 2, 5, 10, 20};
        cfg.replications = 100000;
        cfg.seed = 1;
        cfg.weights.total = 10000;
        cfg.weights.inverse.weight_sum_bound = 500;
        cfg.weights.inverse.method = InverseMethod::local_search;
        cfg.weights.inverse.params.restarts = 4;
        return compute_experiment(cfg, fed);
    };
    const auto high = run(Quota(37, 50));
    const auto low = run(Quota(1, 2));
    auto gap = [](const ExperimentResult& r, double t) {
        return r.row(t, WeightRule::proportional).deviation - r.row(t, WeightRule::shapley_inverse).deviation;
    };
    for (double t : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        const auto& p = high.row(t, WeightRule::proportional);
        const auto& s = high.row(t, WeightRule::shapley_inverse);
        const double noise = 3.0 * std::max(p.std_err_proxy, s.std_err_proxy);
        std::string what = "t=" + num(t) + " inverse " + num(s.deviation, 4) + " < proportional " + num(p.deviation, 4);
        bool ok = s.deviation < p.deviation;
        if (t >= 5) {
            what += ", gap " + num(gap(high, t), 4) + " > " + num(noise, 4);
            ok = ok && gap(high, t) > noise;
        }
        out.check(ok, what);
    }
    const double at10 = high.row(10, WeightRule::shapley_inverse).deviation;
    out.check(at10 < 0.05, "inverse deviation at t=10 " + num(at10, 4) + " < 0.05");
    out.check(gap(low, 10) < gap(high, 10),
              "t=10 gap at q=1/2 " + num(gap(low, 10), 4) + " < gap at q=37/50 " + num(gap(high, 10), 4));
    const double secs = clock.seconds();
    out.check(secs < 1800.0, "runtime " + num(secs, 4) + " s < 1800 s");
}

void ordering_convergence(Outcome& out) {
    const std::uint64_t sizes[] = {1000000, 1000000, 1000000, 1000000};
    const auto fed = FederationSpec::from_sizes(sizes);
    constexpr std::uint64_t kReps = 100000;
    OrderingMatch prev;
    bool first = true;
    for (double t : {1.0, 2.0, 5.0, 10.0, 50.0}) {
        const auto r = ordering_match_rate(fed, PreferenceModel{t}, kReps, 1);
        std::string what = "t=" + num(t) + " rate " + num(r.rate, 4);
        if (!first) {
            const double se = std::sqrt(prev.std_err * prev.std_err + r.std_err * r.std_err);
            out.check(r.rate >= prev.rate - 2.0 * se, what + " >= previous - 2 SE");
        } else {
            out.detail << what;
        }
        prev = r;
        first = false;
    }
    const auto top = ordering_match_rate(fed, PreferenceModel{100.0}, kReps, 1);
    out.check(top.rate > 0.99, "t=100 rate " + num(top.rate, 4) + " > 0.99");
}

const std::vector<std::function<void(Outcome&)>> kCriteria = {
    exact_fixtures, enumeration,  inverse_optimum,    oracle_equivalence,    penrose,           convergence,
    iid_recovery,   sample_size_effect, sampler_fidelity, fairness_reproduction, ordering_convergence,
};

bool run_criterion(std::size_t n) {
    Outcome out;
    try {
        kCriteria.at(n - 1)(out);
    } catch (const std::exception& e) {
        out.check(false, std::string("error: ") + e.what());
    }
    std::cout << "criterion " << n << ": " << (out.pass ? "PASS" : "FAIL") << "  " << out.detail.str() << std::endl;
    return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::size_t> which;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "all") continue;
        std::size_t n = 0;
        try {
            n = std::stoul(arg);
        } catch (const std::exception&) {
        }
        if (n < 1 || n > kCriteria.size()) {
            std::cerr << "usage: acceptance [1-" << kCriteria.size() << " | all]...\n";
            return 2;
        }
        which.push_back(n);
    }
    if (which.empty())
        for (std::size_t n = 1; n <= kCriteria.size(); ++n) which.push_back(n);
    bool all = true;
    for (auto n : which) all = run_criterion(n) && all;
    return all ? 0 : 1;
}
