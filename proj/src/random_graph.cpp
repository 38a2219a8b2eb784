#include "fdst/random_graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "fdst/errors.hpp"

namespace fdst {

namespace {

constexpr Point kNoPoint = std::numeric_limits<Point>::max();

void check_degree_args(int n, int r) {
    if (n < 1 || r < 2) {
        throw InvalidInput("need n >= 1 and r >= 2, got n=" + std::to_string(n) +
                           " r=" + std::to_string(r));
    }
    if ((static_cast<long long>(n) * r) % 2 != 0) {
        throw InvalidInput("r*n must be even, got n=" + std::to_string(n) +
                           " r=" + std::to_string(r));
    }
}

}  // namespace

bool Pairing::valid() const {
    if (n < 1 || r < 1) return false;
    if (match.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(r)) return false;
    for (Point p = 0; p < match.size(); ++p) {
        const Point q = match[p];
        if (q >= match.size() || q == p || match[q] != p) return false;
    }
    return true;
}

std::vector<int> MultiGraph::degrees() const {
    std::vector<int> deg(n, 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

Graph::Graph(int n, std::span<const Edge> edges) : adj_(n) {
    for (const Edge& e : edges) {
        if (e.u >= static_cast<Vertex>(n) || e.v >= static_cast<Vertex>(n)) {
            throw InvalidInput("edge endpoint out of range");
        }
        if (e.u == e.v) throw InvalidInput("loop at vertex " + std::to_string(e.u));
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
    }
    for (auto& list : adj_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
            throw InvalidInput("repeated edge");
        }
    }
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& list : adj_) twice += list.size();
    return twice / 2;
}

int Graph::min_degree() const {
    int d = std::numeric_limits<int>::max();
    for (const auto& list : adj_) d = std::min(d, static_cast<int>(list.size()));
    return adj_.empty() ? 0 : d;
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& list : adj_) d = std::max(d, static_cast<int>(list.size()));
    return d;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < adj_.size(); ++u) {
        for (Vertex v : adj_[u]) {
            if (u < v) out.push_back({u, v});
        }
    }
    return out;
}

RegularGraph::RegularGraph(int n, int r, std::span<const Edge> edges)
    : RegularGraph(Graph(n, edges)) {
    if (n > 0 && r_ != r) {
        throw InvalidInput("graph is " + std::to_string(r_) + "-regular, expected " +
                           std::to_string(r));
    }
    r_ = r;
}

RegularGraph::RegularGraph(Graph g) : Graph(std::move(g)) {
    r_ = n() > 0 ? degree(0) : 0;
    for (Vertex v = 0; v < static_cast<Vertex>(n()); ++v) {
        if (degree(v) != r_) {
            throw InvalidInput("vertex " + std::to_string(v) + " has degree " +
                               std::to_string(degree(v)) + ", expected " + std::to_string(r_));
        }
    }
}

Pairing sample_pairing(int n, int r, Rng& rng) {
    check_degree_args(n, r);
    const Point total = static_cast<Point>(n) * static_cast<Point>(r);

    // Pool of unmatched points with O(1) swap-remove.
    std::vector<Point> pool(total);
    std::vector<Point> pos(total);
    for (Point p = 0; p < total; ++p) pool[p] = pos[p] = p;
    auto remove = [&](Point p) {
        const Point i = pos[p];
        const Point last = pool.back();
        pool[i] = last;
        pos[last] = i;
        pool.pop_back();
        pos[p] = kNoPoint;
    };

    Pairing out{n, r, std::vector<Point>(total, kNoPoint)};
    for (Point p = 0; p < total; ++p) {
        if (pos[p] == kNoPoint) continue;
        remove(p);
        const Point q = pool[uniform_below(rng, pool.size())];
        remove(q);
        out.match[p] = q;
        out.match[q] = p;
    }
    return out;
}

MultiGraph project(const Pairing& p) {
    MultiGraph g{p.n, {}};
    g.edges.reserve(p.points() / 2);
    for (Point a = 0; a < p.points(); ++a) {
        const Point b = p.match[a];
        if (a < b) g.edges.push_back(normalized({p.bucket(a), p.bucket(b)}));
    }
    return g;
}

bool is_simple(const MultiGraph& g) {
    std::vector<Edge> edges;
    edges.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        if (e.u == e.v) return false;
        edges.push_back(normalized(e));
    }
    std::sort(edges.begin(), edges.end());
    return std::adjacent_find(edges.begin(), edges.end()) == edges.end();
}

RegularSample sample_simple_regular(int n, int r, Rng& rng, int max_attempts) {
    check_degree_args(n, r);
    if (r < 3 || r > n - 1) {
        throw InvalidInput("need 3 <= r <= n-1, got n=" + std::to_string(n) +
                           " r=" + std::to_string(r));
    }
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        MultiGraph g = project(sample_pairing(n, r, rng));
        if (is_simple(g)) return {RegularGraph(n, r, g.edges), attempt};
    }
    throw AttemptsExhausted("no simple graph after " + std::to_string(max_attempts) +
                            " pairings (n=" + std::to_string(n) + " r=" + std::to_string(r) + ")");
}

namespace {

template <class Neighbors>
bool reaches_all(int n, Neighbors&& neighbors) {
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

}  // namespace

bool is_connected(const Graph& g) {
    return reaches_all(g.n(), [&](Vertex v) { return g.neighbors(v); });
}

bool is_connected(const MultiGraph& g) {
    std::vector<std::vector<Vertex>> adj(g.n);
    for (const Edge& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return reaches_all(g.n, [&](Vertex v) -> const std::vector<Vertex>& { return adj[v]; });
}

RegularGraph read_graph(std::istream& in) {
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw InvalidInput("graph file: missing header");
    int n = 0;
    int r = 0;
    {
        std::istringstream header(line);
        if (!(header >> n >> r) || n < 1 || r < 0) throw InvalidInput("graph file: bad header");
    }
    std::vector<Edge> edges;
    while (next_line()) {
        std::istringstream row(line);
        long long u = 0;
        long long v = 0;
        if (!(row >> u >> v)) throw InvalidInput("graph file: bad edge line '" + line + "'");
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw InvalidInput("graph file: endpoint out of range in '" + line + "'");
        }
        if (u >= v) throw InvalidInput("graph file: expected u < v in '" + line + "'");
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    return RegularGraph(n, r, edges);
}

void write_graph(std::ostream& out, const RegularGraph& g) {
    out << g.n() << ' ' << g.r() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_pairing(std::ostream& out, const Pairing& p) {
    for (Point a = 0; a < p.points(); ++a) {
        if (a < p.match[a]) out << a << ' ' << p.match[a] << '\n';
    }
}

}  // namespace fdst
