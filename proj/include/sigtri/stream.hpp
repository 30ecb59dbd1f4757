#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sigtri/signed_graph.hpp"

namespace sigtri {

// Wedge/query semantics selector: signed T1 counting versus sign-blind
// counting of all triangles.
enum class StreamMode { SignedT1, UnsignedAll };

// Insertion-only ordered sequence of signed edges, u < v per arrival.
// Immutable after construction; estimators consume it through a plain
// forward pass, so a file-backed source is drop-in.
struct SignedEdgeStream {
    Vertex n = 0;
    std::vector<SignedEdge> items;

    std::size_t size() const { return items.size(); }
    auto begin() const { return items.begin(); }
    auto end() const { return items.end(); }
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Uniformly random arrival order under order_seed; edge multiset preserved.
SignedEdgeStream to_stream(const SignedGraph& g, std::uint64_t order_seed);

// Canonical (sorted) arrival order, used for fixture files.
SignedEdgeStream to_stream_canonical(const SignedGraph& g);

// Subsequence of positive edges, order preserved.
SignedEdgeStream filter_positive(const SignedEdgeStream& s);

// All signs set to +1, order preserved.
SignedEdgeStream strip_signs(const SignedEdgeStream& s);

// Every sign negated, order preserved.
SignedEdgeStream flip_signs(const SignedEdgeStream& s);

// Re-materializes the underlying graph (for exact oracles).
SignedGraph to_graph(const SignedEdgeStream& s);

// Text format: first line "n m", then m lines "u v s" with 0-based vertex
// ids and s in {+,-}. Arrivals are canonicalized to u < v; self-loops,
// duplicates and out-of-range ids are rejected with the offending line.
SignedEdgeStream parse_stream(std::string_view text);
std::string serialize_stream(const SignedEdgeStream& s);

SignedEdgeStream load_stream(const std::string& path);
void save_stream(const SignedEdgeStream& s, const std::string& path);

}  // namespace sigtri
