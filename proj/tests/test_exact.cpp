#include <doctest.h>

#include <set>

#include "fdst/errors.hpp"
#include "fdst/exact.hpp"
#include "fdst/greedy.hpp"
#include "fdst/union_find.hpp"

using namespace fdst;

namespace {

// Path 0-1-...-(n-1) plus a pendant at 1: a tree.
Graph small_tree() {
    const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}};
    return Graph(6, e);
}

}  // namespace

TEST_CASE("spanning tree enumeration agrees with the matrix-tree count") {
    for (const auto& [name, count] :
         {std::pair{"k4", 16}, {"k33", 81}, {"prism", 75}, {"petersen", 2000}}) {
        const RegularGraph g = named_graph(name);
        long seen = 0;
        for_each_spanning_tree(g, [&](std::span<const Edge> tree, std::span<const int> deg) {
            ++seen;
            REQUIRE(tree.size() == static_cast<std::size_t>(g.n() - 1));
            UnionFind uf(g.n());
            int total = 0;
            for (const Edge& e : tree) REQUIRE(uf.unite(e.u, e.v));
            for (int d : deg) total += d;
            REQUIRE(total == 2 * (g.n() - 1));
        });
        CHECK(seen == count);
        CHECK(spanning_tree_count(g) == count);
    }
    CHECK(spanning_tree_count(cycle_graph(7)) == 7);
}

TEST_CASE("phi oracles on small graphs") {
    CHECK(phi_exact_trees(named_graph("k4")).phi == 1);
    CHECK(phi_exact_stars(named_graph("k4")).phi == 1);
    CHECK(phi_exact_stars(named_graph("k33")).phi == 2);
    CHECK(phi_exact_trees(named_graph("k33")).phi == 2);
    CHECK(phi_exact_stars(named_graph("petersen")).phi == 4);
    CHECK(phi_exact_trees(named_graph("petersen")).phi == 4);
    for (int n = 3; n <= 9; ++n) {
        CHECK(phi_exact_stars(cycle_graph(n)).phi == n - 2);
        CHECK(phi_exact_trees(cycle_graph(n)).phi == n - 2);
    }
    const Graph t = small_tree();
    CHECK(phi_exact_stars(t).phi == t.n());
    CHECK(phi_exact_trees(t).phi == t.n());

    // Witnesses: the set's stars are a forest and sit inside the witness tree.
    const RegularGraph p = named_graph("petersen");
    const PhiResult w = phi_exact_stars(p);
    CHECK(stars_form_forest(p, w.witness_set));
    std::set<Edge> tree(w.witness_tree.begin(), w.witness_tree.end());
    CHECK(tree.size() == 9);
    for (Vertex v : w.witness_set) {
        for (Vertex u : p.neighbors(v)) CHECK(tree.count(normalized({u, v})) == 1);
    }
}

TEST_CASE("lambda and gamma_C") {
    auto k4 = lambda_gamma_exact(named_graph("k4"));
    CHECK(k4.lambda == 3);
    CHECK(k4.gamma_c == 1);
    auto pet = lambda_gamma_exact(named_graph("petersen"));
    CHECK(pet.lambda == 6);
    CHECK(pet.gamma_c == 4);
    REQUIRE(pet.lambda_enumerated.has_value());
    CHECK(*pet.lambda_enumerated == 6);
    auto c6 = lambda_gamma_exact(cycle_graph(6));
    CHECK(c6.lambda == 2);
    CHECK(c6.gamma_c == 4);
    CHECK(c6.witness_cds.size() == 4);
    CHECK(c6.witness_tree.size() == 5);

    const ExactResult mk = exact_parameters(named_graph("mobius-kantor"));
    CHECK(mk.n == 16);
    CHECK(mk.phi == 6);
    CHECK(mk.gamma_c == 8);
    CHECK(mk.lambda == 8);
    CHECK(!mk.phi_trees.has_value());  // 16 > default trees guard

    const std::vector<Edge> one{{0, 1}};
    CHECK_THROWS_AS(lambda_gamma_exact(Graph(2, one)), InvalidInput);
}

TEST_CASE("prism torus construction") {
    const RegularGraph cube = construct_prism_torus(3, 4);
    CHECK(cube.n() == 8);
    CHECK(cube.r() == 3);
    CHECK(is_connected(cube));
    const RegularGraph p45 = construct_prism_torus(4, 5);
    CHECK(p45.n() == 15);
    CHECK(p45.r() == 4);
    CHECK_THROWS_AS(construct_prism_torus(2, 5), InvalidInput);
    CHECK_THROWS_AS(construct_prism_torus(3, 2), InvalidInput);

    for (int m = 3; m <= 8; ++m) {
        const RegularGraph g = construct_prism_torus(3, m);
        const std::vector<Vertex> w = prism_torus_witness(3, m);
        CHECK(w.size() == static_cast<std::size_t>(m - 2));
        CHECK(stars_form_forest(g, w));
        const int phi = phi_exact_stars(g).phi;
        CHECK(phi >= m - 2);
        CHECK(phi == (m == 3 ? 2 : m - 2));
    }
}

TEST_CASE("grid torus construction") {
    const RegularGraph g43 = construct_grid_torus(4, 3);
    CHECK(g43.n() == 12);
    CHECK(g43.r() == 4);
    const RegularGraph g63 = construct_grid_torus(6, 3);
    CHECK(g63.n() == 27);
    CHECK(g63.r() == 6);
    CHECK_THROWS_AS(construct_grid_torus(5, 3), InvalidInput);
    CHECK_THROWS_AS(construct_grid_torus(4, 2), InvalidInput);

    const RegularGraph g44 = construct_grid_torus(4, 4);
    CHECK(g44.n() == 16);
    CHECK(phi_exact_stars(g44).phi <= 4);
}

TEST_CASE("check_propositions") {
    const RegularGraph k4 = named_graph("k4");
    const PropositionReport a = check_propositions(k4, exact_parameters(k4));
    CHECK(a.all_pass());
    CHECK(a.lower_bound == doctest::Approx(4.0 / 7.0));
    CHECK(a.upper_bound == doctest::Approx(1.0));
    REQUIRE(a.leaf_identity.has_value());
    CHECK(*a.leaf_identity);
    CHECK(a.leaf_identity_slack == 0);

    const RegularGraph p = named_graph("petersen");
    const ExactResult pe = exact_parameters(p);
    const PropositionReport b = check_propositions(p, pe);
    CHECK(b.all_pass());
    CHECK(b.lower_bound == doctest::Approx(10.0 / 7.0));
    CHECK(b.upper_bound == doctest::Approx(4.0));
    CHECK(pe.lambda == pe.phi + 2);

    // A report built from wrong values must fail.
    ExactResult bad = pe;
    bad.lambda += 1;
    CHECK(!check_propositions(p, bad).all_pass());
}

TEST_CASE("connected cubic corpus") {
    CHECK(connected_cubic_graphs(4).size() == 1);
    CHECK(connected_cubic_graphs(6).size() == 2);
    CHECK(connected_cubic_graphs(8).size() == 5);
    CHECK_THROWS_AS(connected_cubic_graphs(10), InvalidInput);
    for (int n : {4, 6, 8}) {
        for (const RegularGraph& g : connected_cubic_graphs(n)) {
            CHECK(is_connected(g));
            const ExactResult e = exact_parameters(g);
            REQUIRE(e.phi_trees.has_value());
            CHECK(*e.phi_trees == e.phi);
            CHECK(e.lambda == e.phi + 2);
            CHECK(check_propositions(g, e).all_pass());
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                Rng rng(seed);
                CHECK(run_on_graph(g, rng).result.full_degree_count <= e.phi);
            }
        }
    }
}

TEST_CASE("size guards") {
    const RegularGraph big = construct_prism_torus(3, 9);  // 18 vertices
    CHECK_THROWS_AS(phi_exact_trees(big), SizeGuardExceeded);
    CHECK_THROWS_AS(phi_exact_stars(construct_prism_torus(3, 13)), SizeGuardExceeded);
    CHECK_THROWS_AS(lambda_gamma_exact(construct_prism_torus(3, 11)), SizeGuardExceeded);
    std::vector<Edge> two{{0, 1}, {2, 3}};
    CHECK_THROWS_AS(phi_exact_stars(Graph(4, two)), InvalidInput);
}
