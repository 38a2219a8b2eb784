#include "fdst/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "fdst/errors.hpp"
#include "fdst/published_values.hpp"

namespace fdst {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = trial + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return seed ^ (z ^ (z >> 31));
}

namespace {

TrialResult run_trial(const SimulateConfig& cfg, int k) {
    TrialResult t;
    t.trial = k;
    t.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(k));
    t.n = cfg.n;
    t.r = cfg.r;
    Rng rng(t.seed);
    const SpanningTreeResult* res = nullptr;
    LazyRunResult lazy;
    GraphRunResult graph;
    if (cfg.mode == RunMode::Lazy) {
        lazy = run_lazy(cfg.n, cfg.r, rng, {cfg.sample_stride, false, false});
        res = &lazy.result;
        t.rho1_empirical = lazy.rho1_empirical;
        t.trajectory = std::move(lazy.trajectory);
    } else {
        RegularSample sample = sample_simple_regular(cfg.n, cfg.r, rng);
        while (!is_connected(sample.graph)) {
            ++t.disconnected_samples;
            sample = sample_simple_regular(cfg.n, cfg.r, rng);
        }
        graph = run_on_graph(sample.graph, rng);
        res = &graph.result;
        if (graph.phase2_start_step) {
            t.rho1_empirical = static_cast<double>(*graph.phase2_start_step) / cfg.n;
        }
    }
    t.full_degree_count = res->full_degree_count;
    t.tree_full_degree_count = res->tree_full_degree_count;
    t.leaf_count = res->leaf_count;
    t.phase1_full_degree_count = res->phase1_full_degree_count;
    t.spanning = res->spanning;
    return t;
}

std::pair<double, double> mean_stddev(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
    return {mean, std::sqrt(var)};
}

std::map<std::string, std::string> parse_params(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidInput("expected key=value in '" + text + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

int int_param(const std::map<std::string, std::string>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw InvalidInput("missing parameter '" + key + "'");
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw InvalidInput("parameter '" + key + "' is not an integer");
    }
}

nlohmann::json edges_json(const std::vector<Edge>& edges) {
    nlohmann::json out = nlohmann::json::array();
    for (const Edge& e : edges) out.push_back({e.u, e.v});
    return out;
}

}  // namespace

SimulateSummary run_simulations(const SimulateConfig& cfg) {
    if (cfg.trials < 0) throw InvalidInput("trials must be >= 0");
    SimulateSummary out;
    out.config = cfg;
    out.trials.resize(cfg.trials);
    if (cfg.trials > 0) {
        // Validate (n, r) once up front so errors surface before threads start.
        if (cfg.r < 3 || cfg.n < 1 || (static_cast<long long>(cfg.n) * cfg.r) % 2 != 0) {
            throw InvalidInput("need r >= 3, n >= 1 and r*n even");
        }
        if (cfg.mode == RunMode::Graph && cfg.r > cfg.n - 1) throw InvalidInput("need r <= n - 1");

        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const int threads = cfg.threads > 0 ? cfg.threads
                                            : static_cast<int>(std::min<unsigned>(cfg.trials, hw));
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(threads);
        auto worker = [&](int id) {
            try {
                for (int k = next++; k < cfg.trials; k = next++) out.trials[k] = run_trial(cfg, k);
            } catch (...) {
                errors[id] = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        for (int i = 1; i < threads; ++i) pool.emplace_back(worker, i);
        worker(0);
        for (auto& th : pool) th.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    std::vector<double> fractions;
    for (const TrialResult& t : out.trials) fractions.push_back(t.full_fraction());
    std::tie(out.mean_full_fraction, out.stddev_full_fraction) = mean_stddev(fractions);
    return out;
}

TableReport reproduce_table(const IntegrationOptions& options, double tolerance) {
    TableReport rep;
    rep.tolerance = tolerance;
    rep.pass = true;
    for (const auto& row : published::kBounds) {
        const TrajectoryResult res = integrate_two_phase(row.r, options);
        TableRow out;
        out.r = row.r;
        out.f_computed = res.f_r;
        out.f_published = row.f_r;
        out.u_r = res.u_r;
        out.abs_delta = std::abs(res.f_r - row.f_r);
        out.rho1 = res.rho1;
        out.rho2 = res.rho2;
        rep.pass = rep.pass && out.abs_delta <= tolerance;
        rep.rows.push_back(out);
    }
    return rep;
}

CompareReport compare_with_ode(const CompareConfig& cfg, const TrajectoryResult& ode,
                               const SimulateSummary& sims) {
    if (ode.r != sims.config.r) {
        throw InvalidInput("simulation r=" + std::to_string(sims.config.r) +
                           " does not match ODE r=" + std::to_string(ode.r));
    }
    CompareReport rep;
    rep.r = ode.r;
    rep.tolerance = cfg.tolerance;
    rep.mean_full_fraction = sims.mean_full_fraction;
    rep.stddev_full_fraction = sims.stddev_full_fraction;
    const Trajectory reference = to_trajectory(ode);
    for (const TrialResult& t : sims.trials) {
        auto dev = trajectory_deviation(t.trajectory, reference);
        if (rep.deviations.empty()) {
            rep.deviations = dev;
        } else {
            for (std::size_t i = 0; i < dev.size(); ++i) {
                rep.deviations[i].sup = std::max(rep.deviations[i].sup, dev[i].sup);
            }
        }
        rep.per_trial.push_back(std::move(dev));
    }
    rep.pass = !rep.per_trial.empty() &&
               std::all_of(rep.deviations.begin(), rep.deviations.end(),
                           [&](const VariableDeviation& d) { return d.sup <= cfg.tolerance; });
    return rep;
}

CompareReport run_compare(const CompareConfig& cfg) {
    if (cfg.simulate.mode != RunMode::Lazy) throw InvalidInput("compare needs lazy-mode trajectories");
    const TrajectoryResult ode = integrate_two_phase(cfg.simulate.r, cfg.integration);
    const SimulateSummary sims = run_simulations(cfg.simulate);
    return compare_with_ode(cfg, ode, sims);
}

Graph graph_from_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return named_graph(spec);
    const std::string kind = spec.substr(0, colon);
    const auto params = parse_params(spec.substr(colon + 1));
    if (kind == "prism") return construct_prism_torus(int_param(params, "r"), int_param(params, "m"));
    if (kind == "grid") return construct_grid_torus(int_param(params, "delta"), int_param(params, "m"));
    if (kind == "cycle") return cycle_graph(int_param(params, "n"));
    throw InvalidInput("unknown construction '" + kind + "'");
}

nlohmann::json to_json(const TrialResult& t) {
    nlohmann::json j{
        {"trial", t.trial},
        {"n", t.n},
        {"r", t.r},
        {"seed", t.seed},
        {"full_degree_count", t.full_degree_count},
        {"tree_full_degree_count", t.tree_full_degree_count},
        {"leaf_count", t.leaf_count},
        {"phase1_full_degree_count", t.phase1_full_degree_count},
        {"rho1_empirical", t.rho1_empirical ? nlohmann::json(*t.rho1_empirical) : nlohmann::json()},
        {"spanning", t.spanning},
    };
    if (t.disconnected_samples > 0) j["disconnected_samples"] = t.disconnected_samples;
    return j;
}

nlohmann::json to_json(const SimulateSummary& s) {
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialResult& t : s.trials) trials.push_back(to_json(t));
    return {
        {"r", s.config.r},
        {"n", s.config.n},
        {"seed", s.config.seed},
        {"mode", s.config.mode == RunMode::Lazy ? "lazy" : "graph"},
        {"trials", trials},
        {"aggregate",
         {{"count", s.trials.size()},
          {"mean_full_fraction", s.mean_full_fraction},
          {"stddev_full_fraction", s.stddev_full_fraction}}},
    };
}

nlohmann::json to_json(const StateVector& s) {
    nlohmann::json z = nlohmann::json::array();
    for (int i = 1; i <= s.r; ++i) z.push_back(s.untouched(i));
    return {{"x", s.x}, {"z", z}, {"zL", s.leaf()}, {"zF", s.full()}, {"zM", s.points()}};
}

nlohmann::json to_json(const TrajectoryResult& t) {
    return {
        {"r", t.r},
        {"rho1", t.rho1},
        {"rho2", t.rho2},
        {"f_r", t.f_r},
        {"u_r", t.u_r},
        {"phase1_end_state", to_json(t.phase1_end_state)},
    };
}

nlohmann::json to_json(const TableReport& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TableRow& row : t.rows) {
        rows.push_back({{"r", row.r},
                        {"f_r_computed", row.f_computed},
                        {"f_r_published", row.f_published},
                        {"u_r", row.u_r},
                        {"abs_delta", row.abs_delta},
                        {"rho1", row.rho1},
                        {"rho2", row.rho2}});
    }
    return {{"rows", rows}, {"tolerance", t.tolerance}, {"pass", t.pass}};
}

nlohmann::json to_json(const CompareReport& c) {
    auto devs = [](const std::vector<VariableDeviation>& d) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& v : d) j[v.name] = v.sup;
        return j;
    };
    nlohmann::json per_trial = nlohmann::json::array();
    for (const auto& d : c.per_trial) per_trial.push_back(devs(d));
    return {
        {"r", c.r},
        {"sup_deviation", devs(c.deviations)},
        {"per_trial_sup_deviation", per_trial},
        {"mean_full_fraction", c.mean_full_fraction},
        {"stddev_full_fraction", c.stddev_full_fraction},
        {"tolerance", c.tolerance},
        {"pass", c.pass},
    };
}

nlohmann::json to_json(const ExactResult& e, const PropositionReport& checks) {
    nlohmann::json j{
        {"n", e.n},
        {"phi", e.phi},
        {"lambda", e.lambda},
        {"gamma_c", e.gamma_c},
        {"witnesses",
         {{"full_degree", e.witness_full},
          {"tree", edges_json(e.witness_tree)},
          {"cds", e.witness_cds}}},
        {"checks",
         {{"lower_bound", checks.lower_bound},
          {"upper_bound", std::isfinite(checks.upper_bound) ? nlohmann::json(checks.upper_bound)
                                                            : nlohmann::json()},
          {"sandwich", checks.sandwich},
          {"lambda_equals_n_minus_gamma_c", checks.lambda_gamma},
          {"leaf_identity", checks.leaf_identity ? nlohmann::json(*checks.leaf_identity)
                                                 : nlohmann::json()},
          {"leaf_identity_slack", checks.leaf_identity_slack},
          {"all_pass", checks.all_pass()}}},
    };
    if (e.phi_trees) j["phi_trees"] = *e.phi_trees;
    return j;
}

}  // namespace fdst
