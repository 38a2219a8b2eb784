#pragma once

// Reproducible experiments built on the library: seeded parallel trials,
// ODE/table reproduction, simulation-vs-ODE comparison, exact oracle runs.
// Every function here is deterministic in its config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdst/compare.hpp"
#include "fdst/exact.hpp"
#include "fdst/greedy.hpp"
#include "fdst/ode.hpp"

namespace fdst {

/// Exit-code contract shared by the CLI and the acceptance binary.
enum ExitCode : int {
    kExitOk = 0,
    kExitTolerance = 1,
    kExitUsage = 2,
    kExitInternal = 3,
};

/// seed xor splitmix64(trial).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial);

enum class RunMode { Lazy, Graph };

struct SimulateConfig {
    int r = 3;
    int n = 100000;
    int trials = 10;
    std::uint64_t seed = 1;
    RunMode mode = RunMode::Lazy;
    std::int64_t sample_stride = 0;
    /// 0 = min(trials, hardware threads).
    int threads = 0;
};

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    int n = 0;
    int r = 0;
    int full_degree_count = 0;
    int tree_full_degree_count = 0;
    int leaf_count = 0;
    int phase1_full_degree_count = 0;
    std::optional<double> rho1_empirical;
    bool spanning = true;
    /// Graph mode: disconnected samples drawn before a connected one.
    int disconnected_samples = 0;
    Trajectory trajectory;  // lazy mode only

    double full_fraction() const { return static_cast<double>(full_degree_count) / n; }
};

struct SimulateSummary {
    SimulateConfig config;
    std::vector<TrialResult> trials;  // ordered by trial index
    double mean_full_fraction = 0.0;
    double stddev_full_fraction = 0.0;
};

SimulateSummary run_simulations(const SimulateConfig& config);

struct TableRow {
    int r = 0;
    double f_computed = 0.0;
    double f_published = 0.0;
    double u_r = 0.0;
    double abs_delta = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

struct TableReport {
    std::vector<TableRow> rows;
    double tolerance = 1e-3;
    bool pass = false;
};

TableReport reproduce_table(const IntegrationOptions& options = {}, double tolerance = 1e-3);

struct CompareConfig {
    SimulateConfig simulate;
    IntegrationOptions integration;
    double tolerance = 0.01;
};

struct CompareReport {
    int r = 0;
    /// Per variable, the largest sup deviation over all trials.
    std::vector<VariableDeviation> deviations;
    /// Per trial, per variable.
    std::vector<std::vector<VariableDeviation>> per_trial;
    double mean_full_fraction = 0.0;
    double stddev_full_fraction = 0.0;
    double tolerance = 0.01;
    bool pass = false;
};

CompareReport compare_with_ode(const CompareConfig& config, const TrajectoryResult& ode,
                               const SimulateSummary& sims);
CompareReport run_compare(const CompareConfig& config);

/// Builds "k4", "petersen", ..., "prism:r=3,m=5", "grid:delta=4,m=4" or
/// "cycle:n=6".
Graph graph_from_spec(const std::string& spec);

nlohmann::json to_json(const TrialResult& t);
nlohmann::json to_json(const SimulateSummary& s);
nlohmann::json to_json(const StateVector& s);
nlohmann::json to_json(const TrajectoryResult& t);
nlohmann::json to_json(const TableReport& t);
nlohmann::json to_json(const CompareReport& c);
nlohmann::json to_json(const ExactResult& e, const PropositionReport& checks);

}  // namespace fdst
