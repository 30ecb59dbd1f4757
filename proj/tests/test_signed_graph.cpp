#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "sigtri/sampling.hpp"
#include "sigtri/signed_graph.hpp"

using namespace sigtri;

namespace {

// independent second enumeration: per edge, count apexes above both endpoints
std::uint64_t triangle_total_by_edges(const SignedGraph& g) {
    std::size_t n = g.vertex_count();
    std::vector<char> adj(n * n, 0);
    for (const auto& e : g.edges()) {
        adj[e.u * n + e.v] = 1;
        adj[e.v * n + e.u] = 1;
    }
    std::uint64_t total = 0;
    for (const auto& e : g.edges())
        for (std::size_t w = std::max(e.u, e.v) + 1; w < n; ++w)
            if (adj[e.u * n + w] && adj[e.v * n + w]) ++total;
    return total;
}

SignedGraph all_positive_k3() {
    return SignedGraph(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
}

}  // namespace

TEST_CASE("triangle classification on tiny graphs") {
    CHECK(count_triangles_exact(all_positive_k3()) == TriangleCounts{0, 0, 0, 1});

    SignedGraph path(3, {{0, 1, 1}, {1, 2, -1}});
    CHECK(count_triangles_exact(path) == TriangleCounts{0, 0, 0, 0});

    SignedGraph one_t1(3, {{0, 1, 1}, {0, 2, -1}, {1, 2, -1}});
    CHECK(count_triangles_exact(one_t1) == TriangleCounts{0, 1, 0, 0});
}

TEST_CASE("balance of count tuples") {
    CHECK(balance_exact({0, 0, 0, 1}) == 1.0);
    CHECK(balance_exact({1, 0, 1, 0}) == 0.0);
    CHECK(balance_exact({215, 676, 557, 147}) == doctest::Approx(0.516).epsilon(1e-3));
    CHECK_THROWS_AS(balance_exact({0, 0, 0, 0}), UndefinedBalanceError);
}

TEST_CASE("construction rejects bad edges") {
    CHECK_THROWS_AS(SignedGraph(3, {{0, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedGraph(3, {{0, 1, 1}, {1, 0, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedGraph(3, {{0, 3, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedGraph(3, {{0, 1, 2}}), std::invalid_argument);
    // reversed input is canonicalized, not rejected
    SignedGraph g(3, {{2, 0, -1}});
    CHECK(g.edges()[0].u == 0);
    CHECK(g.edges()[0].v == 2);
}

TEST_CASE("flip maps counts to their mirror and is an involution") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = generate_er_signed(14, 0.5, 0.3, seed);
        auto c = count_triangles_exact(g);
        auto cf = count_triangles_exact(g.flipped());
        CHECK(cf.t0 == c.t3);
        CHECK(cf.t1 == c.t2);
        CHECK(cf.t2 == c.t1);
        CHECK(cf.t3 == c.t0);
        CHECK(g.flipped().flipped().edges() == g.edges());
    }
}

TEST_CASE("totals agree with an independent enumeration order") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = generate_er_signed(16, 0.4, 0.5, seed);
        CHECK(count_triangles_exact(g).total() == triangle_total_by_edges(g));
    }
}

TEST_CASE("two-block sign-consistent graphs are fully balanced") {
    // + inside blocks {0..3} and {4..7}, - across: every triangle is balanced
    std::vector<SignedEdge> edges;
    for (Vertex u = 0; u < 8; ++u)
        for (Vertex v = u + 1; v < 8; ++v)
            edges.push_back({u, v, (u < 4) == (v < 4) ? +1 : -1});
    SignedGraph g(8, std::move(edges));
    auto c = count_triangles_exact(g);
    CHECK(c.total() == 56);  // complete graph on 8 vertices
    CHECK(balance_exact(c) == 1.0);
}

TEST_CASE("graph params on tiny graphs") {
    auto params = graph_params(all_positive_k3());
    CHECK(params.delta_e == 1);
    CHECK(params.delta_v == 1);
    CHECK(params.m == 3);

    auto empty = graph_params(SignedGraph(5, {}));
    CHECK(empty.delta_e == 0);
    CHECK(empty.delta_v == 0);
}

TEST_CASE("params dominate each other as required") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto g = generate_er_signed(13, 0.6, 0.5, seed);
        auto params = graph_params(g);
        auto total = count_triangles_exact(g).total();
        CHECK(params.delta_e <= params.delta_v);
        CHECK(params.delta_v <= total);
        if (g.vertex_count() >= 2) CHECK(params.delta_e <= g.vertex_count() - 2);
    }
}

TEST_CASE("random instances are reproducible and respect degenerate probabilities") {
    auto a = generate_er_signed(20, 0.5, 0.5, 77);
    auto b = generate_er_signed(20, 0.5, 0.5, 77);
    CHECK(a.edges() == b.edges());

    auto k3 = generate_er_signed(3, 1.0, 1.0, 5);
    CHECK(k3.edge_count() == 3);
    CHECK(count_triangles_exact(k3) == TriangleCounts{0, 0, 0, 1});

    auto none = generate_er_signed(10, 0.0, 0.5, 5);
    CHECK(none.edge_count() == 0);

    auto all_neg = generate_er_signed(10, 1.0, 0.0, 5);
    CHECK(all_neg.positive_edge_count() == 0);
    CHECK(all_neg.edge_count() == 45);
}
