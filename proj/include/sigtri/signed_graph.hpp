#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sigtri {

using Vertex = std::uint32_t;

// Undirected signed edge, canonically stored with u < v.
struct SignedEdge {
    Vertex u;
    Vertex v;
    int sign;  // +1 or -1

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

struct TriangleCounts {
    std::uint64_t t0 = 0;  // all negative
    std::uint64_t t1 = 0;  // exactly one positive
    std::uint64_t t2 = 0;
    std::uint64_t t3 = 0;  // all positive

    std::uint64_t total() const { return t0 + t1 + t2 + t3; }
    std::uint64_t balanced() const { return t1 + t3; }

    friend bool operator==(const TriangleCounts&, const TriangleCounts&) = default;
};

struct GraphParams {
    std::uint64_t delta_e = 0;  // max triangles on any edge
    std::uint64_t delta_v = 0;  // max triangles on any vertex
    std::size_t m = 0;
    Vertex n = 0;
};

class UndefinedBalanceError : public std::runtime_error {
public:
    UndefinedBalanceError() : std::runtime_error("balance undefined: graph has no triangles") {}
};

// Simple signed graph on dense vertex ids 0..n-1. Construction validates:
// no self-loops, no duplicate pairs, signs in {+1,-1}, endpoints < n.
// Edges are normalized to u < v; duplicates are an error, never merged.
class SignedGraph {
public:
    SignedGraph(Vertex n, std::vector<SignedEdge> edges);

    Vertex vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<SignedEdge>& edges() const { return edges_; }

    std::size_t positive_edge_count() const;

    // Negates every sign; an involution mapping T_j to T_{3-j}.
    SignedGraph flipped() const;

private:
    Vertex n_;
    std::vector<SignedEdge> edges_;
};

// Each pair present independently with probability p_edge, each present edge
// positive independently with probability p_plus. Bit-reproducible per seed.
SignedGraph generate_er_signed(Vertex n, double p_edge, double p_plus, std::uint64_t seed);

// Brute-force triple enumeration, classified by number of positive edges.
TriangleCounts count_triangles_exact(const SignedGraph& g);

// (t1+t3)/total; throws UndefinedBalanceError when total == 0.
double balance_exact(const TriangleCounts& c);

GraphParams graph_params(const SignedGraph& g);

}  // namespace sigtri
