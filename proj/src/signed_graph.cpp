#include "sigtri/signed_graph.hpp"

#include <string>

#include "sigtri/sampling.hpp"

namespace sigtri {

namespace {

// Dense adjacency with signs: 0 absent, +1/-1 present.
std::vector<int8_t> sign_matrix(const SignedGraph& g) {
    std::size_t n = g.vertex_count();
    std::vector<int8_t> adj(n * n, 0);
    for (const auto& e : g.edges()) {
        adj[static_cast<std::size_t>(e.u) * n + e.v] = static_cast<int8_t>(e.sign);
        adj[static_cast<std::size_t>(e.v) * n + e.u] = static_cast<int8_t>(e.sign);
    }
    return adj;
}

}  // namespace

SignedGraph::SignedGraph(Vertex n, std::vector<SignedEdge> edges) : n_(n), edges_(std::move(edges)) {
    std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
    for (auto& e : edges_) {
        if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
        if (e.u >= n_ || e.v >= n_)
            throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ")");
        if (e.sign != 1 && e.sign != -1) throw std::invalid_argument("edge sign must be +1 or -1");
        if (e.u > e.v) std::swap(e.u, e.v);
        std::size_t key = static_cast<std::size_t>(e.u) * n_ + e.v;
        if (seen[key])
            throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ")");
        seen[key] = true;
    }
}

std::size_t SignedGraph::positive_edge_count() const {
    std::size_t c = 0;
    for (const auto& e : edges_)
        if (e.sign > 0) ++c;
    return c;
}

SignedGraph SignedGraph::flipped() const {
    std::vector<SignedEdge> out = edges_;
    for (auto& e : out) e.sign = -e.sign;
    return SignedGraph(n_, std::move(out));
}

SignedGraph generate_er_signed(Vertex n, double p_edge, double p_plus, std::uint64_t seed) {
    if (p_edge < 0.0 || p_edge > 1.0 || p_plus < 0.0 || p_plus > 1.0)
        throw std::invalid_argument("edge/sign probabilities must lie in [0,1]");
    Rng rng(seed);
    std::vector<SignedEdge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (!rng.bernoulli(p_edge)) continue;
            int sign = rng.bernoulli(p_plus) ? +1 : -1;
            edges.push_back({u, v, sign});
        }
    }
    return SignedGraph(n, std::move(edges));
}

TriangleCounts count_triangles_exact(const SignedGraph& g) {
    std::size_t n = g.vertex_count();
    auto adj = sign_matrix(g);
    TriangleCounts counts;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            int8_t sab = adj[a * n + b];
            if (sab == 0) continue;
            for (std::size_t c = b + 1; c < n; ++c) {
                int8_t sac = adj[a * n + c];
                int8_t sbc = adj[b * n + c];
                if (sac == 0 || sbc == 0) continue;
                int positives = (sab > 0) + (sac > 0) + (sbc > 0);
                switch (positives) {
                    case 0: ++counts.t0; break;
                    case 1: ++counts.t1; break;
                    case 2: ++counts.t2; break;
                    default: ++counts.t3; break;
                }
            }
        }
    }
    return counts;
}

double balance_exact(const TriangleCounts& c) {
    if (c.total() == 0) throw UndefinedBalanceError();
    return static_cast<double>(c.balanced()) / static_cast<double>(c.total());
}

GraphParams graph_params(const SignedGraph& g) {
    std::size_t n = g.vertex_count();
    auto adj = sign_matrix(g);
    GraphParams params;
    params.n = g.vertex_count();
    params.m = g.edge_count();

    std::vector<std::uint64_t> per_vertex(n, 0);
    for (const auto& e : g.edges()) {
        std::uint64_t on_edge = 0;
        for (std::size_t w = 0; w < n; ++w) {
            if (adj[e.u * n + w] != 0 && adj[e.v * n + w] != 0) ++on_edge;
        }
        params.delta_e = std::max(params.delta_e, on_edge);
        // each triangle on (u,v) touches u, v, and the apex w
        per_vertex[e.u] += on_edge;
        per_vertex[e.v] += on_edge;
    }
    // per_vertex counted each triangle twice per vertex: once for each of the
    // vertex's two edges in the triangle.
    for (std::size_t v = 0; v < n; ++v)
        params.delta_v = std::max(params.delta_v, per_vertex[v] / 2);
    return params;
}

}  // namespace sigtri
