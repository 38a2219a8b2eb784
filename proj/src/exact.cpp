#include "fdst/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>

#include "fdst/errors.hpp"
#include "fdst/greedy.hpp"
#include "fdst/union_find.hpp"

namespace fdst {

namespace {

void guard(const Graph& g, int max_vertices, const char* what) {
    if (g.n() > max_vertices) {
        throw SizeGuardExceeded(std::string(what) + ": n = " + std::to_string(g.n()) +
                                " exceeds guard " + std::to_string(max_vertices));
    }
    if (!is_connected(g)) throw InvalidInput(std::string(what) + ": graph is disconnected");
}

/// Connectivity of the edges chosen so far plus the undecided suffix.
bool connected_with(int n, std::span<const Edge> chosen, std::span<const Edge> rest) {
    UnionFind uf(n);
    for (const Edge& e : chosen) uf.unite(e.u, e.v);
    for (const Edge& e : rest) {
        if (uf.components() == 1) break;
        uf.unite(e.u, e.v);
    }
    return uf.components() == 1;
}

}  // namespace

void for_each_spanning_tree(
    const Graph& g,
    const std::function<void(std::span<const Edge>, std::span<const int>)>& visit) {
    const int n = g.n();
    if (!is_connected(g)) throw InvalidInput("spanning tree enumeration: graph is disconnected");
    const std::vector<Edge> edges = g.edges();
    std::vector<Edge> chosen;
    std::vector<int> deg(n, 0);
    UnionFind uf(n, /*rollback=*/true);

    // Branch on each edge: contract it (include) unless it closes a cycle,
    // delete it (exclude) unless the rest would disconnect the graph.
    const auto recurse = [&](auto&& self, std::size_t idx) -> void {
        if (chosen.size() == static_cast<std::size_t>(n - 1)) {
            visit(chosen, deg);
            return;
        }
        if (idx == edges.size()) return;
        const Edge e = edges[idx];
        const std::size_t mark = uf.checkpoint();
        if (uf.unite(e.u, e.v)) {
            chosen.push_back(e);
            ++deg[e.u];
            ++deg[e.v];
            self(self, idx + 1);
            --deg[e.u];
            --deg[e.v];
            chosen.pop_back();
            uf.rollback(mark);
        }
        if (connected_with(n, chosen, std::span(edges).subspan(idx + 1))) self(self, idx + 1);
    };
    if (n <= 1) {
        visit(chosen, deg);
        return;
    }
    recurse(recurse, 0);
}

double spanning_tree_count(const Graph& g) {
    const int n = g.n();
    if (n <= 1) return 1.0;
    const int k = n - 1;
    // Reduced Laplacian (drop vertex 0), Gaussian elimination with pivoting.
    std::vector<double> a(static_cast<std::size_t>(k) * k, 0.0);
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * k + j]; };
    for (Vertex v = 1; v < static_cast<Vertex>(n); ++v) {
        at(v - 1, v - 1) = g.degree(v);
        for (Vertex w : g.neighbors(v)) {
            if (w != 0) at(v - 1, w - 1) -= 1.0;
        }
    }
    double det = 1.0;
    for (int c = 0; c < k; ++c) {
        int pivot = c;
        for (int i = c + 1; i < k; ++i) {
            if (std::abs(at(i, c)) > std::abs(at(pivot, c))) pivot = i;
        }
        if (at(pivot, c) == 0.0) return 0.0;
        if (pivot != c) {
            for (int j = 0; j < k; ++j) std::swap(at(c, j), at(pivot, j));
            det = -det;
        }
        det *= at(c, c);
        for (int i = c + 1; i < k; ++i) {
            const double f = at(i, c) / at(c, c);
            for (int j = c; j < k; ++j) at(i, j) -= f * at(c, j);
        }
    }
    return std::round(det);
}

PhiResult phi_exact_trees(const Graph& g, int max_vertices) {
    guard(g, max_vertices, "phi_exact_trees");
    PhiResult best;
    best.phi = -1;
    for_each_spanning_tree(g, [&](std::span<const Edge> tree, std::span<const int> deg) {
        int full = 0;
        for (Vertex v = 0; v < deg.size(); ++v) full += deg[v] == g.degree(v);
        if (full > best.phi) {
            best.phi = full;
            best.witness_tree.assign(tree.begin(), tree.end());
        }
    });
    std::vector<int> deg(g.n(), 0);
    for (const Edge& e : best.witness_tree) {
        ++deg[e.u];
        ++deg[e.v];
    }
    for (Vertex v = 0; v < static_cast<Vertex>(g.n()); ++v) {
        if (deg[v] == g.degree(v)) best.witness_set.push_back(v);
    }
    return best;
}

int max_leaves_exact_trees(const Graph& g, int max_vertices) {
    guard(g, max_vertices, "max_leaves_exact_trees");
    int best = 0;
    for_each_spanning_tree(g, [&](std::span<const Edge>, std::span<const int> deg) {
        best = std::max(best, static_cast<int>(std::count(deg.begin(), deg.end(), 1)));
    });
    return best;
}

bool stars_form_forest(const Graph& g, std::span<const Vertex> set) {
    std::vector<char> member(g.n(), 0);
    for (Vertex v : set) member[v] = 1;
    UnionFind uf(g.n());
    for (Vertex v : set) {
        for (Vertex w : g.neighbors(v)) {
            if (member[w] && w < v) continue;  // shared edge, added once from the smaller end
            if (!uf.unite(v, w)) return false;
        }
    }
    return true;
}

PhiResult phi_exact_stars(const Graph& g, int max_vertices) {
    guard(g, max_vertices, "phi_exact_stars");
    const int n = g.n();
    // No spanning tree has more than (n-2)/(delta-1) full-degree vertices.
    int cap = n;
    if (g.min_degree() >= 2) cap = (n - 2) / (g.min_degree() - 1);

    UnionFind uf(n, /*rollback=*/true);
    std::vector<char> member(n, 0);
    std::vector<Vertex> current;
    std::vector<Vertex> best;

    const auto recurse = [&](auto&& self, Vertex v) -> void {
        if (current.size() > best.size()) best = current;
        if (static_cast<int>(best.size()) >= cap) return;
        if (v == static_cast<Vertex>(n)) return;
        if (current.size() + (n - v) <= best.size()) return;

        const std::size_t mark = uf.checkpoint();
        bool ok = true;
        for (Vertex w : g.neighbors(v)) {
            if (member[w]) continue;  // edge already present through w's star
            if (!uf.unite(v, w)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            member[v] = 1;
            current.push_back(v);
            self(self, v + 1);
            current.pop_back();
            member[v] = 0;
        }
        uf.rollback(mark);
        self(self, v + 1);
    };
    recurse(recurse, 0);

    PhiResult out;
    out.phi = static_cast<int>(best.size());
    out.witness_set = best;
    std::vector<Edge> forest;
    std::vector<char> in_set(n, 0);
    for (Vertex v : best) in_set[v] = 1;
    for (Vertex v : best) {
        for (Vertex w : g.neighbors(v)) {
            if (in_set[w] && w < v) continue;
            forest.push_back(normalized({v, w}));
        }
    }
    out.witness_tree = complete_to_spanning_tree(forest, g);
    return out;
}

LambdaGammaResult lambda_gamma_exact(const Graph& g, const LambdaGammaOptions& opt) {
    guard(g, std::min(opt.max_vertices, 31), "lambda_gamma_exact");
    const int n = g.n();
    if (n < 3) throw InvalidInput("lambda_gamma_exact needs n >= 3");

    using Mask = std::uint32_t;
    const Mask all = (Mask{1} << n) - 1;
    std::vector<Mask> adj(n, 0);
    std::vector<Mask> closed(n, 0);
    std::vector<int> top(n, 0);  // largest index in the closed neighbourhood
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
        closed[v] = Mask{1} << v;
        top[v] = static_cast<int>(v);
        for (Vertex w : g.neighbors(v)) {
            adj[v] |= Mask{1} << w;
            top[v] = std::max(top[v], static_cast<int>(w));
        }
        closed[v] |= adj[v];
    }
    auto induced_connected = [&](Mask set) {
        Mask reached = set & (~set + 1);  // lowest member
        Mask frontier = reached;
        while (frontier) {
            Mask next = 0;
            for (Mask f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
            next &= set & ~reached;
            reached |= next;
            frontier = next;
        }
        return reached == set;
    };

    std::optional<Mask> found;
    // Chooses `left` more vertices with index >= start. The lowest undominated
    // vertex must be dominated by something still choosable.
    const auto search = [&](auto&& self, int start, int left, Mask chosen, Mask dominated) -> bool {
        if (dominated == all) {
            if (left == 0 && induced_connected(chosen)) {
                found = chosen;
                return true;
            }
            if (left == 0) return false;
        }
        if (left == 0 || start >= n) return false;
        if (dominated != all) {
            const int u = std::countr_zero(~dominated & all);
            if (top[u] < start) return false;
        }
        for (int v = start; v <= n - left; ++v) {
            if (self(self, v + 1, left - 1, chosen | (Mask{1} << v), dominated | closed[v])) {
                return true;
            }
        }
        return false;
    };

    const int lower = std::max(1, (n + g.max_degree()) / (g.max_degree() + 1));
    for (int k = lower; k <= n && !found; ++k) search(search, 0, k, 0, 0);
    if (!found) throw InvariantViolation("no connected dominating set found");

    LambdaGammaResult out;
    for (Mask m = *found; m; m &= m - 1) out.witness_cds.push_back(std::countr_zero(m));
    out.gamma_c = static_cast<int>(out.witness_cds.size());
    out.lambda = n - out.gamma_c;

    // Witness: BFS tree inside the set, every other vertex hung on a set neighbour.
    std::vector<char> in_set(n, 0);
    for (Vertex v : out.witness_cds) in_set[v] = 1;
    std::vector<char> seen(n, 0);
    std::vector<Vertex> queue{out.witness_cds.front()};
    seen[queue.front()] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const Vertex v = queue[i];
        for (Vertex w : g.neighbors(v)) {
            if (in_set[w] && !seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
                out.witness_tree.push_back(normalized({v, w}));
            }
        }
    }
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
        if (in_set[v]) continue;
        for (Vertex w : g.neighbors(v)) {
            if (in_set[w]) {
                out.witness_tree.push_back(normalized({v, w}));
                break;
            }
        }
    }

    if (n <= opt.enumerate_max_vertices && spanning_tree_count(g) <= opt.enumerate_max_trees) {
        out.lambda_enumerated = max_leaves_exact_trees(g, opt.enumerate_max_vertices);
        if (*out.lambda_enumerated != out.lambda) {
            throw InvariantViolation("lambda by enumeration (" + std::to_string(*out.lambda_enumerated) +
                                     ") differs from n - gamma_C (" + std::to_string(out.lambda) + ")");
        }
    }
    return out;
}

ExactResult exact_parameters(const Graph& g, int trees_max_vertices) {
    ExactResult out;
    out.n = g.n();
    const PhiResult stars = phi_exact_stars(g);
    out.phi = stars.phi;
    out.witness_full = stars.witness_set;
    out.witness_tree = stars.witness_tree;
    if (g.n() <= trees_max_vertices) {
        out.phi_trees = phi_exact_trees(g, trees_max_vertices).phi;
        if (*out.phi_trees != out.phi) {
            throw InvariantViolation("phi oracles disagree: trees " + std::to_string(*out.phi_trees) +
                                     ", stars " + std::to_string(out.phi));
        }
    }
    const LambdaGammaResult lg = lambda_gamma_exact(g);
    out.lambda = lg.lambda;
    out.gamma_c = lg.gamma_c;
    out.witness_cds = lg.witness_cds;
    return out;
}

PropositionReport check_propositions(const Graph& g, const ExactResult& exact) {
    PropositionReport rep;
    const double n = g.n();
    const int big = g.max_degree();
    const int small = g.min_degree();
    rep.lower_bound = n / (big * (big - 1) + 1);
    rep.upper_bound = small >= 2 ? (n - 2) / (small - 1) : std::numeric_limits<double>::infinity();
    rep.sandwich_slack_low = exact.phi - rep.lower_bound;
    rep.sandwich_slack_high = rep.upper_bound - exact.phi;
    rep.sandwich = rep.sandwich_slack_low >= 0 && rep.sandwich_slack_high >= 0;
    rep.lambda_gamma = exact.lambda == g.n() - exact.gamma_c;
    if (big == small && big >= 3) {
        const int r = big;
        rep.leaf_identity_slack = exact.lambda - ((r - 2) * exact.phi + 2);
        rep.leaf_identity = r == 3 ? rep.leaf_identity_slack == 0 : rep.leaf_identity_slack >= 0;
    }
    return rep;
}

RegularGraph construct_prism_torus(int r, int m) {
    if (r < 3 || m < 3) throw InvalidInput("prism torus needs r >= 3 and m >= 3");
    const int k = r - 1;
    std::vector<Edge> edges;
    for (int j = 0; j < m; ++j) {
        const Vertex base = static_cast<Vertex>(j * k);
        const Vertex next = static_cast<Vertex>(((j + 1) % m) * k);
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) edges.push_back({base + a, base + b});
            edges.push_back(normalized({base + a, next + a}));
        }
    }
    return RegularGraph(m * k, r, edges);
}

std::vector<Vertex> prism_torus_witness(int r, int m) {
    if (r < 3 || m < 3) throw InvalidInput("prism torus needs r >= 3 and m >= 3");
    std::vector<Vertex> set;
    for (int j = 0; j + 2 < m; ++j) set.push_back(static_cast<Vertex>(j * (r - 1)));
    return set;
}

RegularGraph construct_grid_torus(int delta, int m) {
    if (delta < 4 || delta % 2 != 0 || m < 3) {
        throw InvalidInput("grid torus needs even delta >= 4 and m >= 3");
    }
    const int a = delta / 2;
    const int layer = a * a;
    auto id = [&](int j, int row, int col) { return static_cast<Vertex>(j * layer + row * a + col); };
    std::vector<Edge> edges;
    for (int j = 0; j < m; ++j) {
        for (int row = 0; row < a; ++row) {
            for (int col = 0; col < a; ++col) {
                for (int c2 = col + 1; c2 < a; ++c2) edges.push_back({id(j, row, col), id(j, row, c2)});
                for (int r2 = row + 1; r2 < a; ++r2) edges.push_back({id(j, row, col), id(j, r2, col)});
                edges.push_back(normalized({id(j, row, col), id((j + 1) % m, row, col)}));
            }
        }
    }
    return RegularGraph(m * layer, delta, edges);
}

Graph cycle_graph(int n) {
    if (n < 3) throw InvalidInput("cycle needs n >= 3");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back(normalized({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n)}));
    return Graph(n, edges);
}

namespace {

/// Generalized Petersen graph GP(k, s): outer cycle, spokes, inner star polygon.
RegularGraph generalized_petersen(int k, int s) {
    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        const auto u = static_cast<Vertex>(i);
        edges.push_back(normalized({u, static_cast<Vertex>((i + 1) % k)}));
        edges.push_back({u, static_cast<Vertex>(k + i)});
        edges.push_back(normalized({static_cast<Vertex>(k + i), static_cast<Vertex>(k + (i + s) % k)}));
    }
    return RegularGraph(2 * k, 3, edges);
}

}  // namespace

std::vector<std::string> named_graph_names() {
    return {"k4", "k33", "prism", "cube", "petersen", "mobius-kantor"};
}

RegularGraph named_graph(const std::string& name) {
    if (name == "k4") {
        std::vector<Edge> e;
        for (Vertex u = 0; u < 4; ++u)
            for (Vertex v = u + 1; v < 4; ++v) e.push_back({u, v});
        return RegularGraph(4, 3, e);
    }
    if (name == "k33") {
        std::vector<Edge> e;
        for (Vertex u = 0; u < 3; ++u)
            for (Vertex v = 3; v < 6; ++v) e.push_back({u, v});
        return RegularGraph(6, 3, e);
    }
    if (name == "prism") return construct_prism_torus(3, 3);
    if (name == "cube") return construct_prism_torus(3, 4);
    if (name == "petersen") return generalized_petersen(5, 2);
    if (name == "mobius-kantor") return generalized_petersen(8, 3);
    throw InvalidInput("unknown graph '" + name + "'");
}

std::vector<RegularGraph> connected_cubic_graphs(int n) {
    if (n < 4 || n > 8 || n % 2 != 0) throw InvalidInput("cubic corpus supports n in {4, 6, 8}");

    // Bit index of edge (u, v), u < v, in a lower-triangular layout.
    auto bit = [](int u, int v) { return v * (v - 1) / 2 + u; };

    std::vector<int> deficit(n, 3);
    std::vector<Edge> edges;
    std::set<std::uint64_t> canon_seen;
    std::vector<RegularGraph> out;
    std::vector<int> perm(n);

    auto canonical = [&](const std::vector<Edge>& es) {
        std::iota(perm.begin(), perm.end(), 0);
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        do {
            std::uint64_t code = 0;
            for (const Edge& e : es) {
                int a = perm[e.u];
                int b = perm[e.v];
                if (a > b) std::swap(a, b);
                code |= std::uint64_t{1} << bit(a, b);
            }
            best = std::min(best, code);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    };

    // Vertex 0 is adjacent to 1, 2, 3 without loss of generality; every
    // later vertex picks its remaining neighbours among higher indices.
    const auto fill = [&](auto&& self, int u) -> void {
        while (u < n && deficit[u] == 0) ++u;
        if (u == n) {
            const Graph g(n, edges);
            if (!is_connected(g)) return;
            if (canon_seen.insert(canonical(edges)).second) out.emplace_back(g);
            return;
        }
        const auto choose = [&](auto&& pick, int from, int left) -> void {
            if (left == 0) {
                self(self, u + 1);
                return;
            }
            for (int w = from; w < n; ++w) {
                if (deficit[w] == 0) continue;
                --deficit[w];
                --deficit[u];
                edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(w)});
                pick(pick, w + 1, left - 1);
                edges.pop_back();
                ++deficit[u];
                ++deficit[w];
            }
        };
        choose(choose, u + 1, deficit[u]);
    };
    for (Vertex w = 1; w <= 3; ++w) {
        edges.push_back({0, w});
        --deficit[w];
    }
    deficit[0] = 0;
    fill(fill, 1);
    return out;
}

}  // namespace fdst
