#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "rigsim/coupling.hpp"
#include "rigsim/generators.hpp"
#include "rigsim/properties.hpp"

using namespace rigsim;

namespace {

Graph k4_minus_edge() { return Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}}); }

std::size_t matching_size(const Graph& g) {
    const auto mate = maximum_matching(g);
    std::size_t matched = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (mate[v] == v) continue;
        REQUIRE(mate[mate[v]] == v);
        REQUIRE(g.has_edge(v, mate[v]));
        ++matched;
    }
    return matched / 2;
}

// Every library checker against the brute-force oracle on one graph.
void agree_with_oracles(const Graph& g) {
    const oracle::Small s(g);
    CHECK(is_connected(g) == oracle::connected(s));
    for (std::size_t k = 1; k <= 3; ++k) {
        const bool expected = oracle::k_connected(s, static_cast<unsigned>(k));
        CHECK(is_k_connected(g, k) == expected);
        CHECK(is_k_connected_flow(g, k) == expected);
    }
    CHECK(has_perfect_matching(g) == oracle::perfect_matching(s));
    CHECK(matching_size(g) == oracle::max_matching(s));
    if (g.vertex_count() >= 3) {
        const bool ham = oracle::hamiltonian(s);
        const auto exact = hamilton_exact(g);
        CHECK(exact.status == (ham ? Verdict::yes : Verdict::no));
        if (exact.status == Verdict::yes) CHECK(is_hamilton_cycle(g, exact.certificate));
        const auto solved = hamilton_solve(g);
        CHECK(solved.status == (ham ? Verdict::yes : Verdict::no));
        if (solved.status == Verdict::yes) CHECK(is_hamilton_cycle(g, solved.certificate));
    }
}

}  // namespace

TEST_CASE("is_connected examples") {
    CHECK(is_connected(named::empty(1)));
    CHECK_FALSE(is_connected(named::empty(2)));
    CHECK_FALSE(is_connected(Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}})));
    CHECK(is_connected(named::cycle(5)));
}

TEST_CASE("is_k_connected examples") {
    CHECK(is_k_connected(named::cycle(5), 2));
    CHECK_FALSE(is_k_connected(named::cycle(5), 3));
    CHECK(is_k_connected(k4_minus_edge(), 2));
    CHECK(is_k_connected(named::complete(4), 3));
    CHECK_FALSE(is_k_connected(named::complete(4), 4));
    CHECK(is_k_connected(named::petersen(), 3));
    CHECK_FALSE(is_k_connected(named::petersen(), 4));
    CHECK(is_k_connected_flow(named::petersen(), 3));
    CHECK_FALSE(is_k_connected(named::star(4), 2));
    CHECK(articulation_points(named::star(4)) == std::vector<Vertex>{0});
    CHECK(articulation_points(named::path(4)) == std::vector<Vertex>{1, 2});
    CHECK(articulation_points(named::cycle(6)).empty());
}

TEST_CASE("has_perfect_matching examples") {
    CHECK(has_perfect_matching(named::path(2)));
    CHECK_FALSE(has_perfect_matching(named::cycle(5)));
    CHECK(has_perfect_matching(named::cycle(6)));
    CHECK_FALSE(has_perfect_matching(named::star(3)));
    CHECK(has_perfect_matching(named::petersen()));
    CHECK(matching_size(named::cycle(5)) == 2);
}

TEST_CASE("blossom needed: odd cycles hanging off a path") {
    // Triangle 0-1-2 with pendant paths 2-3 and 0-4-5: a perfect matching
    // exists only through the odd cycle.
    const Graph g = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {0, 4}, {4, 5}});
    CHECK(has_perfect_matching(g));
    CHECK(matching_size(g) == 3);
}

TEST_CASE("hamilton_solve examples") {
    const auto c5 = hamilton_solve(named::cycle(5));
    REQUIRE(c5.status == Verdict::yes);
    CHECK(is_hamilton_cycle(named::cycle(5), c5.certificate));

    const auto low = hamilton_solve(named::path(5));
    CHECK(low.status == Verdict::no);
    CHECK(low.reason == NoReason::min_degree_below_two);

    const auto petersen = hamilton_solve(named::petersen());
    CHECK(petersen.status == Verdict::no);
    CHECK(petersen.reason == NoReason::exhausted_search);

    // Two triangles sharing a vertex: min degree 2, connected, cut vertex 2.
    const Graph bowtie = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
    const auto bt = hamilton_solve(bowtie);
    CHECK(bt.status == Verdict::no);
    CHECK(bt.reason == NoReason::cut_vertex);
    CHECK(bt.witness == 2);

    CHECK_THROWS_AS(hamilton_solve(named::path(2)), std::invalid_argument);
}

TEST_CASE("hamilton_solve without the exact tier reports unresolved, never a wrong no") {
    HamiltonBudget budget;
    budget.exact_max_n = 0;
    budget.restarts = 3;
    const auto v = hamilton_solve(named::petersen(), budget);
    CHECK(v.status == Verdict::unresolved);

    const auto limited = hamilton_exact(named::petersen(), 5);
    CHECK(limited.status == Verdict::unresolved);
}

TEST_CASE("forced degree-2 conflicts are a sound no") {
    // Vertex 0 adjacent to three degree-2 vertices 1,2,3 which all meet 4.
    const Graph g = Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
    const auto v = hamilton_solve(g);
    CHECK(v.status == Verdict::no);
    CHECK_FALSE(oracle::hamiltonian(oracle::Small(g)));
}

TEST_CASE("min_degree_at_least examples") {
    CHECK(min_degree_at_least(named::cycle(5), 2));
    CHECK_FALSE(min_degree_at_least(named::cycle(5), 3));
    CHECK(min_degree_at_least(k4_minus_edge(), 2));
    CHECK(min_degree_at_least(named::empty(3), 0));
}

TEST_CASE("every graph on at most 6 vertices agrees with the oracles") {
    for (Vertex n = 1; n <= 6; ++n) {
        const unsigned pairs = n * (n - 1) / 2;
        for (std::uint64_t mask = 0; mask < (1ULL << pairs); ++mask) agree_with_oracles(oracle::from_mask(n, mask));
    }
}

TEST_CASE("random graphs on up to 10 vertices agree with the oracles") {
    CounterRng rng(Seed{100, 0});
    for (int trial = 0; trial < 150; ++trial) {
        const Vertex n = 7 + static_cast<Vertex>(rng.below(4));
        const double p = 0.2 + 0.6 * rng.uniform();
        agree_with_oracles(gen_gnp(n, p, Seed{101, static_cast<std::uint64_t>(trial)}));
    }
}

TEST_CASE("necessary-condition ordering holds on random graphs") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        const Graph g = gen_rig(30, 40, 0.05 + 0.001 * static_cast<double>(i % 50), Seed{102, i}).graph;
        for (std::size_t k = 1; k <= 3; ++k) {
            if (is_k_connected(g, k)) CHECK(min_degree_at_least(g, k));
            CHECK(is_k_connected(g, k) == is_k_connected_flow(g, k));
        }
        const auto h = hamilton_solve(g);
        if (h.status == Verdict::yes) {
            CHECK(is_hamilton_cycle(g, h.certificate));
            CHECK(min_degree_at_least(g, 2));
            CHECK(is_k_connected(g, 2));
        }
        if (has_perfect_matching(g)) {
            CHECK(min_degree_at_least(g, 1));
            CHECK(g.vertex_count() % 2 == 0);
        }
    }
}

TEST_CASE("increasing properties are monotone under nested samples") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        const auto [low, high] = couple_gnp_monotone(24, 0.12, 0.2, Seed{103, i});
        REQUIRE(is_subgraph(low, high));
        if (is_connected(low)) CHECK(is_connected(high));
        for (std::size_t k = 2; k <= 3; ++k)
            if (is_k_connected(low, k)) CHECK(is_k_connected(high, k));
        if (has_perfect_matching(low)) CHECK(has_perfect_matching(high));
        const auto hl = hamilton_solve(low);
        const auto hh = hamilton_solve(high);
        if (hl.status == Verdict::yes) CHECK(hh.status != Verdict::no);
    }
}

TEST_CASE("hamilton certificates validate on larger random intersection graphs") {
    std::size_t yes = 0;
    for (std::uint64_t i = 0; i < 40; ++i) {
        const Graph g = gen_rig(300, 90000, 0.00055, Seed{104, i}).graph;
        const auto h = hamilton_solve(g);
        if (h.status == Verdict::yes) {
            ++yes;
            CHECK(is_hamilton_cycle(g, h.certificate));
        }
        if (h.status == Verdict::no) CHECK(h.reason != NoReason::exhausted_search);
    }
    CHECK(yes > 0);
}
