#pragma once

// Exact brute-force values of phi (max full-degree vertices over spanning
// trees), lambda (max leaves) and gamma_C (min connected dominating set) for
// small graphs, the extremal constructions, and the identity checkers.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdst/random_graph.hpp"

namespace fdst {

struct PhiResult {
    int phi = 0;
    /// Vertices of full degree in witness_tree.
    std::vector<Vertex> witness_set;
    std::vector<Edge> witness_tree;
};

/// Visits every spanning tree of a connected graph. The callback receives
/// the tree edges and the tree degree of every vertex.
void for_each_spanning_tree(
    const Graph& g,
    const std::function<void(std::span<const Edge>, std::span<const int>)>& visit);

/// Matrix-tree count (floating point; exact for the small graphs used here).
double spanning_tree_count(const Graph& g);

/// Maximum over all enumerated spanning trees. Throws SizeGuardExceeded
/// above max_vertices, InvalidInput on disconnected graphs.
PhiResult phi_exact_trees(const Graph& g, int max_vertices = 16);

/// Largest vertex set whose stars together form a forest, found by
/// branch and bound with an undo-able union-find.
PhiResult phi_exact_stars(const Graph& g, int max_vertices = 24);

/// Maximum leaf count over all enumerated spanning trees.
int max_leaves_exact_trees(const Graph& g, int max_vertices = 16);

struct LambdaGammaResult {
    int lambda = 0;
    int gamma_c = 0;
    std::vector<Vertex> witness_cds;
    /// Spanning tree whose leaves are exactly the vertices outside witness_cds.
    std::vector<Edge> witness_tree;
    /// Set when lambda was also obtained by spanning-tree enumeration.
    std::optional<int> lambda_enumerated;
};

struct LambdaGammaOptions {
    int max_vertices = 20;
    /// Cross-check lambda by enumeration when n is at most this...
    int enumerate_max_vertices = 12;
    /// ...and the graph has at most this many spanning trees.
    double enumerate_max_trees = 5e5;
};

/// Minimum connected dominating set by increasing-size subset search;
/// lambda = n - gamma_C. Needs a connected graph with n >= 3.
LambdaGammaResult lambda_gamma_exact(const Graph& g, const LambdaGammaOptions& options = {});

struct ExactResult {
    int n = 0;
    int phi = 0;
    int lambda = 0;
    int gamma_c = 0;
    std::vector<Vertex> witness_full;
    std::vector<Edge> witness_tree;
    std::vector<Vertex> witness_cds;
    /// phi from tree enumeration when it was run; must equal phi.
    std::optional<int> phi_trees;
};

/// All three parameters; phi from the star oracle, cross-checked against
/// tree enumeration when n <= trees_max_vertices. Disagreement throws
/// InvariantViolation.
ExactResult exact_parameters(const Graph& g, int trees_max_vertices = 12);

struct PropositionReport {
    double lower_bound = 0.0;  // n / (Delta(Delta-1) + 1)
    double upper_bound = 0.0;  // (n-2) / (delta-1), +inf when delta <= 1
    bool sandwich = false;
    double sandwich_slack_low = 0.0;
    double sandwich_slack_high = 0.0;
    bool lambda_gamma = false;  // lambda == n - gamma_C
    /// Regular graphs only: lambda == phi + 2 (r = 3) or lambda >= (r-2) phi + 2 (r >= 4).
    std::optional<bool> leaf_identity;
    int leaf_identity_slack = 0;

    bool all_pass() const { return sandwich && lambda_gamma && leaf_identity.value_or(true); }
};

PropositionReport check_propositions(const Graph& g, const ExactResult& exact);

/// K_{r-1} x C_m; vertex (layer j, slot k) has index j(r-1) + k.
RegularGraph construct_prism_torus(int r, int m);
/// One vertex per layer for layers 0..m-3; their stars form a forest.
std::vector<Vertex> prism_torus_witness(int r, int m);
/// (K_{d/2} x K_{d/2}) x C_m for even d >= 4.
RegularGraph construct_grid_torus(int delta, int m);

/// Stars of the given vertices form a forest (so they can all be full degree).
bool stars_form_forest(const Graph& g, std::span<const Vertex> set);

Graph cycle_graph(int n);
/// k4, k33, prism, cube, petersen, mobius-kantor. Throws InvalidInput otherwise.
RegularGraph named_graph(const std::string& name);
std::vector<std::string> named_graph_names();

/// Pairwise non-isomorphic connected cubic graphs on n vertices (n even,
/// 4 <= n <= 8), by brute-force generation and canonical relabeling.
std::vector<RegularGraph> connected_cubic_graphs(int n);

}  // namespace fdst
