#include "fdst/greedy.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fdst/errors.hpp"
#include "fdst/union_find.hpp"

namespace fdst {

namespace {

constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

/// Vertex set with O(1) insert, erase and uniform sampling (swap-remove).
class IndexedSet {
public:
    explicit IndexedSet(std::size_t universe) : pos_(universe, kAbsent) {}

    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    bool contains(Vertex v) const { return pos_[v] != kAbsent; }

    void insert(Vertex v) {
        if (contains(v)) return;
        pos_[v] = static_cast<std::uint32_t>(items_.size());
        items_.push_back(v);
    }

    void erase(Vertex v) {
        const std::uint32_t i = pos_[v];
        if (i == kAbsent) return;
        const Vertex last = items_.back();
        items_[i] = last;
        pos_[last] = i;
        items_.pop_back();
        pos_[v] = kAbsent;
    }

    Vertex sample(Rng& rng) const { return items_[uniform_below(rng, items_.size())]; }

private:
    std::vector<Vertex> items_;
    std::vector<std::uint32_t> pos_;
};

struct TreeCounts {
    int leaves = 0;
    int saturated = 0;
};

TreeCounts count_tree(int n, int r, std::span<const Edge> tree) {
    std::vector<int> deg(n, 0);
    for (const Edge& e : tree) {
        ++deg[e.u];
        ++deg[e.v];
    }
    TreeCounts c;
    for (int d : deg) {
        if (d == 1) ++c.leaves;
        if (d == r) ++c.saturated;
    }
    return c;
}

bool in_forest(VertexClass c) {
    return c == VertexClass::L || c == VertexClass::TreeLeafDead ||
           c == VertexClass::TreeInternal || c == VertexClass::FullDegree;
}

}  // namespace

const char* to_string(VertexClass c) {
    switch (c) {
        case VertexClass::L: return "L";
        case VertexClass::Z: return "Z";
        case VertexClass::ZDead: return "Z0_dead";
        case VertexClass::TreeLeafDead: return "tree_leaf_dead";
        case VertexClass::TreeInternal: return "tree_internal";
        case VertexClass::FullDegree: return "full_degree";
    }
    return "?";
}

std::vector<Edge> complete_forest(int n, std::span<const Edge> forest,
                                  std::span<const Edge> candidates,
                                  std::span<const int> capacity) {
    UnionFind uf(n);
    std::vector<int> deg(n, 0);
    std::vector<Edge> out;
    out.reserve(n > 0 ? n - 1 : 0);
    for (const Edge& e : forest) {
        if (!uf.unite(e.u, e.v)) {
            throw InvariantViolation("input forest contains a cycle through edge (" +
                                     std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
        ++deg[e.u];
        ++deg[e.v];
        out.push_back(normalized(e));
    }

    std::vector<Edge> order(candidates.begin(), candidates.end());
    for (Edge& e : order) e = normalized(e);
    std::sort(order.begin(), order.end());
    for (const Edge& e : order) {
        if (uf.components() == 1) break;
        if (e.u == e.v || !uf.unite(e.u, e.v)) continue;
        if (deg[e.u] >= capacity[e.u] || deg[e.v] >= capacity[e.v]) {
            throw InvariantViolation("completion edge touches saturated vertex");
        }
        ++deg[e.u];
        ++deg[e.v];
        out.push_back(e);
    }
    return out;
}

std::vector<Edge> complete_to_spanning_tree(std::span<const Edge> forest, const Graph& g) {
    if (!is_connected(g)) throw InvalidInput("graph is disconnected");
    for (const Edge& e : forest) {
        if (e.u >= static_cast<Vertex>(g.n()) || e.v >= static_cast<Vertex>(g.n()) ||
            !g.has_edge(e.u, e.v)) {
            throw InvalidInput("forest edge not in graph");
        }
    }
    std::vector<int> capacity(g.n());
    for (Vertex v = 0; v < static_cast<Vertex>(g.n()); ++v) capacity[v] = g.degree(v);
    const auto candidates = g.edges();
    auto tree = complete_forest(g.n(), forest, candidates, capacity);
    if (g.n() > 0 && tree.size() != static_cast<std::size_t>(g.n() - 1)) {
        throw InvariantViolation("completion did not produce n-1 edges");
    }
    return tree;
}

GraphRunResult run_on_graph(const RegularGraph& g, Rng& rng) {
    const int n = g.n();
    const int r = g.r();
    if (r < 3) throw InvalidInput("graph mode needs r >= 3");
    if (!is_connected(g)) throw InvalidInput("graph mode needs a connected graph");

    std::vector<VertexClass> cls(n, VertexClass::Z);
    std::vector<char> in_tree(n, 0);
    IndexedSet leaves(n);
    IndexedSet untouched(n);
    std::vector<Edge> forest;
    GraphRunResult out;

    auto add_star = [&](Vertex v) {
        const bool v_in_tree = in_tree[v];
        for (Vertex w : g.neighbors(v)) {
            // A vertex already in the forest has its single forest neighbour as parent.
            if (!(v_in_tree && in_tree[w])) forest.push_back(normalized({v, w}));
            if (!in_tree[w]) {
                in_tree[w] = 1;
                if (untouched.contains(w)) {
                    untouched.erase(w);
                    leaves.insert(w);
                    cls[w] = VertexClass::L;
                } else {
                    cls[w] = VertexClass::TreeLeafDead;
                }
            } else if (cls[w] != VertexClass::FullDegree && cls[w] != VertexClass::L) {
                cls[w] = VertexClass::TreeInternal;
            }
        }
        in_tree[v] = 1;
        cls[v] = VertexClass::FullDegree;
        out.full_degree.push_back(v);
    };

    const Vertex start = static_cast<Vertex>(uniform_below(rng, n));
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) untouched.insert(v);
    untouched.erase(start);
    add_star(start);

    std::int64_t step = 0;
    int phase1_full = -1;
    while (!leaves.empty() || !untouched.empty()) {
        ++step;
        Vertex v = 0;
        bool from_leaves = !leaves.empty();
        if (from_leaves) {
            v = leaves.sample(rng);
            leaves.erase(v);
        } else {
            if (!out.phase2_start_step) {
                out.phase2_start_step = step;
                phase1_full = static_cast<int>(out.full_degree.size());
            }
            v = untouched.sample(rng);
            untouched.erase(v);
        }

        int tree_neighbours = 0;
        for (Vertex w : g.neighbors(v)) tree_neighbours += in_tree[w];
        if (tree_neighbours <= 1) {
            add_star(v);
        } else {
            for (Vertex w : g.neighbors(v)) {
                if (untouched.contains(w)) {
                    untouched.erase(w);
                    cls[w] = VertexClass::ZDead;
                } else if (leaves.contains(w)) {
                    leaves.erase(w);
                    cls[w] = VertexClass::TreeLeafDead;
                }
            }
            cls[v] = from_leaves ? VertexClass::TreeLeafDead : VertexClass::ZDead;
        }
    }

    SpanningTreeResult& res = out.result;
    res.tree = complete_to_spanning_tree(forest, g);
    res.full_degree_count = static_cast<int>(out.full_degree.size());
    res.phase1_full_degree_count = phase1_full >= 0 ? phase1_full : res.full_degree_count;
    const TreeCounts counts = count_tree(n, r, res.tree);
    res.leaf_count = counts.leaves;
    res.tree_full_degree_count = counts.saturated;
    return out;
}

namespace {

/// Lazy-mode state: classes, unrevealed points, the point pool and the forest.
class LazyRun {
public:
    LazyRun(int n, int r, Rng& rng, const LazyOptions& opt)
        : n_(n), r_(r), rng_(rng), opt_(opt),
          cls_(n, VertexClass::Z), unrevealed_(n, static_cast<std::uint8_t>(r)),
          z_count_(r + 1, 0), leaves_(n), untouched_(n),
          pool_(static_cast<std::size_t>(n) * r), pool_pos_(pool_.size()),
          match_(pool_.size(), kAbsent), uf_(n) {
        for (Point p = 0; p < pool_.size(); ++p) pool_[p] = pool_pos_[p] = p;
        for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) untouched_.insert(v);
        z_count_[r] = n;
        stride_ = opt.sample_stride > 0 ? opt.sample_stride : (n + 999) / 1000;
    }

    LazyRunResult run() {
        LazyRunResult out;
        out.trajectory.r = r_;
        out.trajectory.sample_stride = static_cast<int>(stride_);
        sample(out.trajectory);

        // Seed the forest with one star; retried only if the star collapses
        // on a loop or a double edge.
        while (full_ == 0 && !untouched_.empty()) {
            const Vertex v = untouched_.sample(rng_);
            take_untouched(v);
            process(v, Op::Op2, out);
            after_step(out);
        }

        while (!leaves_.empty() || !untouched_.empty()) {
            if (!leaves_.empty()) {
                const Vertex v = leaves_.sample(rng_);
                leaves_.erase(v);
                process(v, Op::Op1, out);
            } else {
                if (phase_ == 1) {
                    phase_ = 2;
                    out.rho1_empirical = static_cast<double>(t_) / n_;
                    phase1_full_ = full_;
                }
                const Vertex v = untouched_.sample(rng_);
                take_untouched(v);
                process(v, Op::Op2, out);
            }
            after_step(out);
        }
        if (t_ % stride_ != 0) sample(out.trajectory);

        out.steps = t_;
        finish_pairing(out);
        return out;
    }

    void check_invariants() const {
        std::size_t points = 0;
        std::size_t leaves = 0;
        std::vector<std::size_t> z(r_ + 1, 0);
        for (Vertex v = 0; v < static_cast<Vertex>(n_); ++v) {
            const int u = unrevealed_[v];
            points += u;
            switch (cls_[v]) {
                case VertexClass::L:
                    if (u != r_ - 1 || !leaves_.contains(v)) fail("L vertex bookkeeping", v);
                    ++leaves;
                    break;
                case VertexClass::Z:
                    if (u < 1) fail("Z vertex without points", v);
                    ++z[u];
                    if ((u == r_) != untouched_.contains(v)) fail("Z_r membership", v);
                    break;
                case VertexClass::ZDead:
                case VertexClass::FullDegree:
                    if (u != 0) fail("exhausted vertex with points", v);
                    break;
                default:
                    break;
            }
        }
        if (points != pool_.size()) fail("M differs from sum of unrevealed points", 0);
        if (leaves != leaves_.size()) fail("L size", 0);
        for (int i = 1; i <= r_; ++i) {
            if (z[i] != static_cast<std::size_t>(z_count_[i])) fail("Z_i count", static_cast<Vertex>(i));
        }
    }

private:
    [[noreturn]] static void fail(const std::string& what, Vertex v) {
        throw InvariantViolation("lazy run: " + what + " (vertex " + std::to_string(v) + ")");
    }

    void take_untouched(Vertex v) {
        untouched_.erase(v);
        --z_count_[r_];
    }

    void remove_point(Point p) {
        const Point i = pool_pos_[p];
        const Point last = pool_.back();
        pool_[i] = last;
        pool_pos_[last] = i;
        pool_.pop_back();
        pool_pos_[p] = kAbsent;
    }

    /// Pairs p with a uniform unrevealed point. The partner's unrevealed
    /// count is left for the caller unless the pair is a loop.
    Vertex reveal(Point p) {
        remove_point(p);
        const Point q = pool_[uniform_below(rng_, pool_.size())];
        remove_point(q);
        match_[p] = q;
        match_[q] = p;
        --unrevealed_[p / r_];
        if (q / r_ == p / r_) --unrevealed_[q / r_];
        return q / r_;
    }

    void add_edge(Vertex a, Vertex b) {
        if (!uf_.unite(a, b)) fail("forest edge closes a cycle", a);
        forest_.push_back(normalized({a, b}));
    }

    void process(Vertex v, Op op, LazyRunResult& out) {
        const VertexClass own = cls_[v];
        hits_.clear();
        bool collapsed = false;
        for (int k = 0; k < r_; ++k) {
            const Point p = static_cast<Point>(v) * r_ + k;
            if (pool_pos_[p] == kAbsent) continue;
            const Vertex w = reveal(p);
            if (w == v) {
                collapsed = true;
                continue;
            }
            hits_.push_back({w, cls_[w]});
        }
        int forest_hits = 0;
        for (std::size_t i = 0; i < hits_.size(); ++i) {
            forest_hits += in_forest(hits_[i].second);
            for (std::size_t j = 0; j < i; ++j) {
                if (hits_[j].first == hits_[i].first) collapsed = true;
            }
        }
        const bool success =
            !collapsed && (op == Op::Op1 ? forest_hits == 0 : forest_hits <= 1);

        for (const auto& hit : hits_) {
            const Vertex w = hit.first;
            // Classes are read live: a repeated partner only occurs on failure.
            const int before = unrevealed_[w]--;
            const VertexClass c = cls_[w];
            if (c == VertexClass::Z) {
                --z_count_[before];
                if (before == r_) untouched_.erase(w);
                if (success) {
                    if (before == r_) {
                        cls_[w] = VertexClass::L;
                        leaves_.insert(w);
                    } else {
                        cls_[w] = VertexClass::TreeLeafDead;
                    }
                } else if (before == 1) {
                    cls_[w] = VertexClass::ZDead;
                } else {
                    ++z_count_[before - 1];
                }
            } else if (c == VertexClass::L) {
                leaves_.erase(w);
                cls_[w] = success ? VertexClass::TreeInternal : VertexClass::TreeLeafDead;
            } else if (success && in_forest(c)) {
                cls_[w] = VertexClass::TreeInternal;
            }
            if (success) add_edge(v, w);
        }

        if (success) {
            cls_[v] = VertexClass::FullDegree;
            ++full_;
        } else {
            cls_[v] = own == VertexClass::L ? VertexClass::TreeLeafDead : VertexClass::ZDead;
        }

        if (opt_.record_steps) out.step_log.push_back({op, v, success, hits_});
    }

    void after_step(LazyRunResult& out) {
        ++t_;
        if (opt_.check_every_step) check_invariants();
        if (t_ % stride_ == 0) sample(out.trajectory);
    }

    void sample(Trajectory& traj) const {
        TrajectorySample s;
        const double scale = 1.0 / n_;
        s.x = static_cast<double>(t_) * scale;
        s.z.resize(r_);
        for (int i = 1; i <= r_; ++i) s.z[i - 1] = z_count_[i] * scale;
        s.z_leaf = static_cast<double>(leaves_.size()) * scale;
        s.z_full = full_ * scale;
        s.z_points = static_cast<double>(pool_.size()) * scale;
        s.phase = phase_;
        traj.samples.push_back(std::move(s));
    }

    void finish_pairing(LazyRunResult& out) {
        for (Point p = 0; p < match_.size(); ++p) {
            if (pool_pos_[p] == kAbsent) continue;
            const Vertex w = reveal(p);
            if (w != p / static_cast<Point>(r_)) --unrevealed_[w];
        }
        out.pairing = Pairing{n_, r_, match_};
        const MultiGraph mg = project(out.pairing);
        const std::vector<int> capacity(n_, r_);
        SpanningTreeResult& res = out.result;
        res.tree = complete_forest(n_, forest_, mg.edges, capacity);
        res.spanning = res.tree.size() == static_cast<std::size_t>(n_ - 1);
        res.full_degree_count = full_;
        res.phase1_full_degree_count = phase_ == 1 ? full_ : phase1_full_;
        const TreeCounts counts = count_tree(n_, r_, res.tree);
        res.leaf_count = counts.leaves;
        res.tree_full_degree_count = counts.saturated;
    }

    int n_;
    int r_;
    Rng& rng_;
    LazyOptions opt_;
    std::vector<VertexClass> cls_;
    std::vector<std::uint8_t> unrevealed_;
    std::vector<int> z_count_;
    IndexedSet leaves_;
    IndexedSet untouched_;
    std::vector<Point> pool_;
    std::vector<Point> pool_pos_;
    std::vector<Point> match_;
    UnionFind uf_;
    std::vector<Edge> forest_;
    std::vector<std::pair<Vertex, VertexClass>> hits_;
    std::int64_t stride_ = 1;
    std::int64_t t_ = 0;
    int full_ = 0;
    int phase1_full_ = 0;
    int phase_ = 1;
};

}  // namespace

LazyRunResult run_lazy(int n, int r, Rng& rng, const LazyOptions& options) {
    if (r < 3 || r > 255) throw InvalidInput("lazy mode needs 3 <= r <= 255");
    if (n < 1 || (static_cast<long long>(n) * r) % 2 != 0) {
        throw InvalidInput("lazy mode needs n >= 1 and r*n even");
    }
    LazyRun run(n, r, rng, options);
    return run.run();
}

TrajectorySummary trajectory_stats(const Trajectory& traj) {
    if (traj.samples.empty()) throw InvalidInput("empty trajectory");
    TrajectorySummary s;
    s.samples = traj.samples.size();
    for (const TrajectorySample& row : traj.samples) {
        s.max_leaf = std::max(s.max_leaf, row.z_leaf);
        if (row.phase == 2 && !s.phase1_end_x) {
            s.phase1_end_x = row.x;
            s.phase1_end_full = row.z_full;
        }
    }
    s.final_x = traj.samples.back().x;
    s.final_full = traj.samples.back().z_full;
    return s;
}

std::string trajectory_csv_header(int r) {
    std::string h = "x";
    for (int i = 1; i <= r; ++i) h += ",z" + std::to_string(i);
    h += ",zL,zF,zM,phase";
    return h;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const auto old_precision = out.precision(12);
    out << trajectory_csv_header(traj.r) << '\n';
    for (const TrajectorySample& s : traj.samples) {
        out << s.x;
        for (double z : s.z) out << ',' << z;
        out << ',' << s.z_leaf << ',' << s.z_full << ',' << s.z_points << ',' << s.phase << '\n';
    }
    out.precision(old_precision);
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("trajectory csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto columns = std::count(line.begin(), line.end(), ',') + 1;
    const int r = static_cast<int>(columns) - 5;
    if (r < 1 || line != trajectory_csv_header(r)) {
        throw InvalidInput("trajectory csv: unexpected header '" + line + "'");
    }
    Trajectory traj;
    traj.r = r;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        TrajectorySample s;
        s.z.resize(r);
        row >> s.x;
        for (double& z : s.z) row >> z;
        row >> s.z_leaf >> s.z_full >> s.z_points >> s.phase;
        if (!row) throw InvalidInput("trajectory csv: malformed row");
        traj.samples.push_back(std::move(s));
    }
    return traj;
}

}  // namespace fdst
