#pragma once

// Greedy full-degree spanning tree construction.
//
// The algorithm grows a forest by repeatedly processing a vertex: a live leaf
// of the forest if one exists, otherwise an untouched vertex. When at most one
// neighbour of the processed vertex already lies in the forest, its whole star
// is added and it becomes a full-degree vertex.
//
// Two drivers share this rule:
//   * graph mode runs on a concrete simple regular graph, removing hit
//     vertices from the candidate sets on failure;
//   * lazy mode runs on the configuration model, revealing pairing partners
//     only when a vertex is processed and tracking unrevealed points per
//     vertex, so the class counts follow the one-step expectations used by
//     the ODE module.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdst/random_graph.hpp"

namespace fdst {

enum class VertexClass : std::uint8_t {
    L,             // forest leaf with r-1 unrevealed points, waiting to be processed
    Z,             // outside the forest; index = number of unrevealed points (1..r)
    ZDead,         // outside the forest, no unrevealed points left
    TreeLeafDead,  // forest vertex that will never be processed
    TreeInternal,  // forest vertex with extra edges but not full degree
    FullDegree,
};

const char* to_string(VertexClass c);

enum class Op : std::uint8_t { Op1, Op2 };

struct StepOutcome {
    Op op = Op::Op1;
    Vertex processed = 0;
    bool success = false;
    /// Partner vertices revealed (lazy) or neighbours (graph), with their class
    /// before the step.
    std::vector<std::pair<Vertex, VertexClass>> partners;
};

struct TrajectorySample {
    double x = 0.0;           // t / n
    std::vector<double> z;    // |Z_1|/n .. |Z_r|/n
    double z_leaf = 0.0;      // |L|/n
    double z_full = 0.0;      // F/n
    double z_points = 0.0;    // M/n
    int phase = 1;
};

struct Trajectory {
    int r = 0;
    int sample_stride = 1;
    std::vector<TrajectorySample> samples;
};

struct SpanningTreeResult {
    std::vector<Edge> tree;
    /// Vertices the algorithm made full degree.
    int full_degree_count = 0;
    /// Vertices with tree degree r after completion (>= full_degree_count).
    int tree_full_degree_count = 0;
    int leaf_count = 0;
    int phase1_full_degree_count = 0;
    /// False only in lazy mode when the projected multigraph is disconnected;
    /// the tree is then a spanning forest.
    bool spanning = true;
};

struct GraphRunResult {
    SpanningTreeResult result;
    std::vector<Vertex> full_degree;
    /// Step index (1-based, the initial star is step 0) of the first
    /// untouched-vertex selection, if any.
    std::optional<std::int64_t> phase2_start_step;
};

/// Graph mode. Throws InvalidInput on disconnected graphs or r < 3.
GraphRunResult run_on_graph(const RegularGraph& g, Rng& rng);

struct LazyOptions {
    /// Steps between trajectory samples; 0 picks ceil(n / 1000).
    std::int64_t sample_stride = 0;
    bool record_steps = false;
    /// Verify class/point bookkeeping and forest acyclicity after every step.
    bool check_every_step = false;
};

struct LazyRunResult {
    SpanningTreeResult result;
    Trajectory trajectory;
    /// t/n at the first untouched-vertex step.
    std::optional<double> rho1_empirical;
    std::int64_t steps = 0;
    /// Pairing completed after the run (partners of never-revealed points drawn
    /// uniformly at the end).
    Pairing pairing;
    std::vector<StepOutcome> step_log;
};

/// Lazy mode on the configuration model. Requires r*n even and r >= 3.
LazyRunResult run_lazy(int n, int r, Rng& rng, const LazyOptions& options = {});

/// Extends an acyclic forest to a spanning tree using edges of g, scanning
/// candidate edges in lexicographic order. Throws InvariantViolation if the
/// forest has a cycle or an added edge touches a vertex already saturated
/// in the forest, InvalidInput if g is disconnected.
std::vector<Edge> complete_to_spanning_tree(std::span<const Edge> forest, const Graph& g);

/// Same for arbitrary candidate edges (loops skipped). Returns a spanning
/// forest if the candidates do not connect all n vertices.
std::vector<Edge> complete_forest(int n, std::span<const Edge> forest,
                                  std::span<const Edge> candidates,
                                  std::span<const int> capacity);

struct TrajectorySummary {
    std::size_t samples = 0;
    std::optional<double> phase1_end_x;
    std::optional<double> phase1_end_full;
    double final_x = 0.0;
    double final_full = 0.0;
    double max_leaf = 0.0;
};

/// Throws InvalidInput on an empty trajectory.
TrajectorySummary trajectory_stats(const Trajectory& traj);

std::string trajectory_csv_header(int r);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Reads the CSV written above; r is inferred from the column count.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace fdst
