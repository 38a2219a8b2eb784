#include <doctest.h>

#include <array>
#include <map>
#include <cmath>
#include <sstream>

#include "fdst/errors.hpp"
#include "fdst/exact.hpp"
#include "fdst/greedy.hpp"
#include "fdst/ode.hpp"
#include "fdst/union_find.hpp"

using namespace fdst;

namespace {

bool is_spanning_tree(const Graph& g, const std::vector<Edge>& tree) {
    if (tree.size() != static_cast<std::size_t>(g.n() - 1)) return false;
    UnionFind uf(g.n());
    for (const Edge& e : tree) {
        if (!g.has_edge(e.u, e.v) || !uf.unite(e.u, e.v)) return false;
    }
    return uf.components() == 1;
}

std::vector<int> tree_degrees(int n, const std::vector<Edge>& tree) {
    std::vector<int> deg(n, 0);
    for (const Edge& e : tree) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

}  // namespace

TEST_CASE("run_on_graph: K4 always gives one full-degree vertex and three leaves") {
    const RegularGraph k4 = named_graph("k4");
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const GraphRunResult out = run_on_graph(k4, rng);
        CHECK(out.result.full_degree_count == 1);
        CHECK(out.result.leaf_count == 3);
        CHECK(is_spanning_tree(k4, out.result.tree));
    }
}

TEST_CASE("run_on_graph: K33") {
    const RegularGraph k33 = named_graph("k33");
    std::array<int, 4> seen{};
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed);
        const int f = run_on_graph(k33, rng).result.full_degree_count;
        REQUIRE(f >= 1);
        REQUIRE(f <= 2);
        ++seen[f];
    }
    MESSAGE("K33 outcomes: F=1 x" << seen[1] << ", F=2 x" << seen[2]);
}

TEST_CASE("run_on_graph: input validation") {
    std::vector<Edge> two;
    for (Vertex base : {0u, 4u})
        for (Vertex u = 0; u < 4; ++u)
            for (Vertex v = u + 1; v < 4; ++v) two.push_back({base + u, base + v});
    Rng rng(1);
    CHECK_THROWS_AS(run_on_graph(RegularGraph(8, 3, two), rng), InvalidInput);
    const RegularGraph c5(Graph(cycle_graph(5)));
    CHECK_THROWS_AS(run_on_graph(c5, rng), InvalidInput);
}

TEST_CASE("run_on_graph: full-degree vertices own all their edges, leaf identity holds") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int r = 3 + trial % 3;
        const int n = 2 * (6 + trial % 9);
        RegularGraph g = sample_simple_regular(n, r, rng).graph;
        if (!is_connected(g)) continue;
        const GraphRunResult out = run_on_graph(g, rng);
        const auto& res = out.result;
        REQUIRE(is_spanning_tree(g, res.tree));
        const auto deg = tree_degrees(n, res.tree);
        for (Vertex v : out.full_degree) CHECK(deg[v] == r);
        CHECK(res.tree_full_degree_count >= res.full_degree_count);
        CHECK(res.leaf_count >= (r - 2) * res.tree_full_degree_count + 2);
        if (r == 3) CHECK(res.leaf_count == res.tree_full_degree_count + 2);
    }
}

TEST_CASE("complete_to_spanning_tree") {
    const RegularGraph k4 = named_graph("k4");
    const auto from_empty = complete_to_spanning_tree({}, k4);
    CHECK(from_empty.size() == 3);
    CHECK(is_spanning_tree(k4, from_empty));

    const std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}};
    CHECK(complete_to_spanning_tree(star, k4) == star);

    const std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}};
    CHECK(complete_to_spanning_tree(path, k4) == path);

    const std::vector<Edge> cycle{{0, 1}, {1, 2}, {0, 2}};
    CHECK_THROWS_AS(complete_to_spanning_tree(cycle, k4), InvariantViolation);

    const std::vector<Edge> foreign{{0, 4}};
    CHECK_THROWS_AS(complete_to_spanning_tree(foreign, named_graph("cube")), InvalidInput);
}

TEST_CASE("run_lazy: initial sample and per-step bookkeeping") {
    for (int r = 3; r <= 6; ++r) {
        Rng rng(static_cast<std::uint64_t>(r));
        LazyOptions opt;
        opt.sample_stride = 1;
        opt.record_steps = true;
        opt.check_every_step = true;
        const int n = 600;
        const LazyRunResult out = run_lazy(n, r, rng, opt);
        const auto& rows = out.trajectory.samples;
        REQUIRE(rows.size() == static_cast<std::size_t>(out.steps + 1));
        CHECK(rows[0].x == 0.0);
        CHECK(rows[0].z[r - 1] == 1.0);
        CHECK(rows[0].z_points == doctest::Approx(r));
        CHECK(rows[0].z_leaf == 0.0);
        CHECK(rows[0].z_full == 0.0);
        REQUIRE(out.step_log.size() == static_cast<std::size_t>(out.steps));

        for (std::size_t k = 1; k < rows.size(); ++k) {
            const long drop = std::lround((rows[k - 1].z_points - rows[k].z_points) * n);
            const StepOutcome& step = out.step_log[k - 1];
            // A loop at the processed vertex consumes two of its own points at once.
            long loops = 0;
            for (Point p = step.processed * r; p < (step.processed + 1) * r; ++p) {
                loops += out.pairing.bucket(out.pairing.match[p]) == step.processed;
            }
            loops /= 2;
            CHECK(drop == (step.op == Op::Op1 ? 2 * (r - 1) : 2 * r) - 2 * loops);
            CHECK(rows[k].z_full >= rows[k - 1].z_full);
            CHECK(rows[k].x > rows[k - 1].x);
            if (step.op == Op::Op1) {
                bool outside = true;
                for (const auto& [w, c] : step.partners) outside = outside && c == VertexClass::Z;
                // Success needs every revealed partner outside the forest.
                if (step.success) CHECK(outside);
            }
        }
        CHECK(out.pairing.valid());
        CHECK(out.result.full_degree_count <= n / (r - 1));
    }
}

TEST_CASE("run_lazy: completed pairing is uniform (n=2, r=3, 15 matchings)") {
    std::map<std::vector<Point>, int> counts;
    const int runs = 30000;
    for (int i = 0; i < runs; ++i) {
        Rng rng(static_cast<std::uint64_t>(i) * 7919 + 3);
        ++counts[run_lazy(2, 3, rng).pairing.match];
    }
    REQUIRE(counts.size() == 15);
    const double expected = runs / 15.0;
    double chi2 = 0.0;
    for (const auto& [m, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
    MESSAGE("chi-square (14 dof): " << chi2);
    CHECK(chi2 < 36.12);  // 0.999 quantile
}

TEST_CASE("run_lazy: invalid arguments") {
    Rng rng(1);
    CHECK_THROWS_AS(run_lazy(5, 3, rng), InvalidInput);
    CHECK_THROWS_AS(run_lazy(10, 2, rng), InvalidInput);
}

TEST_CASE("run_lazy vs ODE at n = 1e5, r = 3") {
    Rng rng(11);
    const LazyRunResult out = run_lazy(100000, 3, rng);
    const Trajectory ode = to_trajectory(integrate_two_phase(3));

    // |L|/n at x = 0.3
    const TrajectorySample* at = nullptr;
    for (const auto& s : out.trajectory.samples) {
        if (std::abs(s.x - 0.3) < 1e-9) at = &s;
    }
    REQUIRE(at != nullptr);
    double ode_leaf = 0.0;
    for (std::size_t k = 1; k < ode.samples.size(); ++k) {
        if (ode.samples[k].x >= 0.3) {
            const auto& a = ode.samples[k - 1];
            const auto& b = ode.samples[k];
            ode_leaf = a.z_leaf + (0.3 - a.x) / (b.x - a.x) * (b.z_leaf - a.z_leaf);
            break;
        }
    }
    CHECK(std::abs(at->z_leaf - ode_leaf) < 0.01);

    REQUIRE(out.rho1_empirical.has_value());
    CHECK(std::abs(*out.rho1_empirical - 0.6485) <= 0.01);
    CHECK(std::abs(out.result.phase1_full_degree_count / 1e5 - 0.4375) <= 0.01);
    CHECK(std::abs(out.result.full_degree_count / 1e5 - 0.4591) <= 0.01);
    CHECK(out.result.leaf_count >= out.result.full_degree_count + 2);
}

TEST_CASE("trajectory_stats") {
    Trajectory one{3, 1, {TrajectorySample{0.5, {0.1, 0.2, 0.3}, 0.05, 0.25, 1.0, 1}}};
    const TrajectorySummary s = trajectory_stats(one);
    CHECK(s.samples == 1);
    CHECK(s.final_x == 0.5);
    CHECK(s.final_full == 0.25);
    CHECK(s.max_leaf == 0.05);
    CHECK(!s.phase1_end_x.has_value());
    CHECK_THROWS_AS(trajectory_stats(Trajectory{}), InvalidInput);

    for (const auto& [r, f] : {std::pair{3, 0.4591}, std::pair{4, 0.2699}}) {
        Rng rng(static_cast<std::uint64_t>(100 + r));
        const auto summary = trajectory_stats(run_lazy(100000, r, rng).trajectory);
        CHECK(std::abs(summary.final_full - f) <= 0.01);
        REQUIRE(summary.phase1_end_x.has_value());
    }
}

TEST_CASE("graph mode on G(1e5, 3)") {
    Rng rng(2);
    RegularGraph g = sample_simple_regular(100000, 3, rng).graph;
    while (!is_connected(g)) g = sample_simple_regular(100000, 3, rng).graph;
    const GraphRunResult out = run_on_graph(g, rng);
    MESSAGE("graph mode F/n = " << out.result.full_degree_count / 1e5);
    CHECK(std::abs(out.result.full_degree_count / 1e5 - 0.4591) <= 0.01);
    CHECK(out.result.leaf_count == out.result.tree_full_degree_count + 2);
}

TEST_CASE("trajectory CSV round trip") {
    Rng rng(4);
    const Trajectory traj = run_lazy(2000, 4, rng).trajectory;
    std::stringstream buf;
    write_trajectory_csv(buf, traj);
    CHECK(buf.str().rfind("x,z1,z2,z3,z4,zL,zF,zM,phase\n", 0) == 0);
    const Trajectory back = read_trajectory_csv(buf);
    REQUIRE(back.r == 4);
    REQUIRE(back.samples.size() == traj.samples.size());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        CHECK(back.samples[k].x == doctest::Approx(traj.samples[k].x).epsilon(1e-10));
        CHECK(back.samples[k].z_full == doctest::Approx(traj.samples[k].z_full).epsilon(1e-10));
        CHECK(back.samples[k].phase == traj.samples[k].phase);
    }
    std::istringstream bad("x,z1,zL\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad), InvalidInput);
}
