#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "sigtri/sampling.hpp"
#include "sigtri/stream.hpp"

using namespace sigtri;

namespace {

std::vector<SignedEdge> sorted_edges(std::vector<SignedEdge> edges) {
    std::sort(edges.begin(), edges.end(), [](const SignedEdge& a, const SignedEdge& b) {
        return std::tuple(a.u, a.v, a.sign) < std::tuple(b.u, b.v, b.sign);
    });
    return edges;
}

}  // namespace

TEST_CASE("to_stream permutes the edge multiset") {
    auto g = generate_er_signed(12, 0.5, 0.5, 1);
    auto s1 = to_stream(g, 10);
    auto s2 = to_stream(g, 11);
    CHECK(s1.size() == g.edge_count());
    CHECK(sorted_edges(s1.items) == sorted_edges(g.edges()));
    CHECK(sorted_edges(s2.items) == sorted_edges(g.edges()));
    CHECK(s1.items != s2.items);  // different seeds, different order (whp)
    CHECK(to_stream(g, 10).items == s1.items);
}

TEST_CASE("exact counts ignore arrival order") {
    auto g = generate_er_signed(12, 0.6, 0.4, 3);
    auto base = count_triangles_exact(g);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto s = to_stream(g, seed);
        CHECK(count_triangles_exact(to_graph(s)) == base);
    }
}

TEST_CASE("stream transforms") {
    SignedEdgeStream s{4, {{0, 1, 1}, {0, 2, -1}, {1, 2, -1}, {2, 3, 1}}};

    auto pos = filter_positive(s);
    CHECK(pos.items == std::vector<SignedEdge>{{0, 1, 1}, {2, 3, 1}});

    auto stripped = strip_signs(s);
    CHECK(stripped.size() == s.size());
    for (const auto& e : stripped.items) CHECK(e.sign == 1);

    auto flipped = flip_signs(s);
    CHECK(flipped.items[0].sign == -1);
    CHECK(flipped.items[1].sign == 1);
    CHECK(flip_signs(flipped).items == s.items);

    CHECK(filter_positive(flip_signs(s)).size() == 2);  // the negative edges

    SignedEdgeStream all_neg{3, {{0, 1, -1}, {0, 2, -1}}};
    CHECK(filter_positive(all_neg).size() == 0);
    auto all_pos = strip_signs(all_neg);
    CHECK(filter_positive(all_pos).items == all_pos.items);
}

TEST_CASE("strip preserves the unsigned triangle count") {
    auto g = generate_er_signed(12, 0.5, 0.3, 9);
    auto s = to_stream(g, 4);
    auto total = count_triangles_exact(g).total();
    CHECK(count_triangles_exact(to_graph(strip_signs(s))).total() == total);
    CHECK(count_triangles_exact(to_graph(filter_positive(s))).total() ==
          count_triangles_exact(g).t3);
}

TEST_CASE("parse accepts the documented format") {
    auto s = parse_stream("3 3\n0 1 +\n0 2 -\n1 2 -\n");
    CHECK(s.n == 3);
    CHECK(s.items == std::vector<SignedEdge>{{0, 1, 1}, {0, 2, -1}, {1, 2, -1}});

    // reversed ids are canonicalized on arrival
    auto r = parse_stream("3 1\n2 1 +\n");
    CHECK(r.items[0].u == 1);
    CHECK(r.items[0].v == 2);
}

TEST_CASE("serialize then parse is the identity") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto g = generate_er_signed(15, 0.4, 0.6, seed);
        auto s = to_stream(g, seed + 100);
        auto round = parse_stream(serialize_stream(s));
        CHECK(round.n == s.n);
        CHECK(round.items == s.items);
    }
}

TEST_CASE("parse failures carry the offending line") {
    auto line_of = [](const char* text) {
        try {
            parse_stream(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("2 1\n0 0 +\n") == 2);           // self-loop
    CHECK(line_of("3 2\n0 1 +\n1 0 -\n") == 3);    // duplicate pair
    CHECK(line_of("2 1\n0 5 +\n") == 2);           // out of range
    CHECK(line_of("2 1\n0 1 *\n") == 2);           // bad sign
    CHECK(line_of("2 2\n0 1 +\n") == 3);           // truncated
    CHECK(line_of("2 1\n0 1 +\n9 9 +\n") == 3);    // extra content
    CHECK(line_of("x") == 1);                      // bad header
}
