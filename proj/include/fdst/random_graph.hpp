#pragma once

// Configuration-model sampling and the small graph types shared by the
// greedy algorithm, the exact oracles and the CLI.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace fdst {

using Rng = std::mt19937_64;
using Vertex = std::uint32_t;
using Point = std::uint32_t;

struct Edge {
    Vertex u;
    Vertex v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge with u <= v.
inline Edge normalized(Edge e) { return e.u <= e.v ? e : Edge{e.v, e.u}; }

/// Uniform draw from {0, ..., bound - 1}.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

/// Perfect matching on r*n configuration points; point p lives in bucket p / r.
struct Pairing {
    int n = 0;
    int r = 0;
    std::vector<Point> match;

    Vertex bucket(Point p) const { return p / static_cast<Point>(r); }
    std::size_t points() const { return match.size(); }
    /// Fixed-point-free involution covering all r*n points.
    bool valid() const;
};

struct MultiGraph {
    int n = 0;
    std::vector<Edge> edges;  // loops allowed, repeated pairs allowed

    /// Loops count twice.
    std::vector<int> degrees() const;
};

/// Simple undirected graph with sorted adjacency lists.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::span<const Edge> edges);

    int n() const { return static_cast<int>(adj_.size()); }
    std::size_t edge_count() const;
    std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
    int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
    int min_degree() const;
    int max_degree() const;
    bool has_edge(Vertex u, Vertex v) const;
    /// Edges with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<Vertex>> adj_;
};

/// Simple graph in which every vertex has degree r.
class RegularGraph : public Graph {
public:
    RegularGraph() = default;
    /// Throws InvalidInput unless the edge list describes a simple r-regular graph.
    RegularGraph(int n, int r, std::span<const Edge> edges);
    explicit RegularGraph(Graph g);

    int r() const { return r_; }

private:
    int r_ = 0;
};

Pairing sample_pairing(int n, int r, Rng& rng);
MultiGraph project(const Pairing& p);
bool is_simple(const MultiGraph& g);

struct RegularSample {
    RegularGraph graph;
    int rejections = 0;
};

/// Rejection sampling over the configuration model: uniform over simple
/// r-regular graphs on n labeled vertices. Connectivity is not enforced.
RegularSample sample_simple_regular(int n, int r, Rng& rng, int max_attempts = 100000);

bool is_connected(const Graph& g);
/// Connectivity of a multigraph, ignoring edge multiplicities.
bool is_connected(const MultiGraph& g);

/// "n r" header followed by one "u v" line per edge, u < v, 0-indexed.
RegularGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const RegularGraph& g);
/// One "p q" line per matched pair, p < q.
void write_pairing(std::ostream& out, const Pairing& p);

}  // namespace fdst
