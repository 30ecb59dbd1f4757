#include "sigtri/stream.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sigtri/sampling.hpp"

namespace sigtri {

SignedEdgeStream to_stream(const SignedGraph& g, std::uint64_t order_seed) {
    SignedEdgeStream s{g.vertex_count(), g.edges()};
    Rng rng(order_seed);
    // Fisher-Yates with our own bounded draw, so orders replay across builds.
    for (std::size_t i = s.items.size(); i > 1; --i) {
        std::size_t j = rng.bounded(i);
        std::swap(s.items[i - 1], s.items[j]);
    }
    return s;
}

SignedEdgeStream to_stream_canonical(const SignedGraph& g) {
    SignedEdgeStream s{g.vertex_count(), g.edges()};
    std::sort(s.items.begin(), s.items.end(), [](const SignedEdge& a, const SignedEdge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    return s;
}

SignedEdgeStream filter_positive(const SignedEdgeStream& s) {
    SignedEdgeStream out{s.n, {}};
    for (const auto& e : s.items)
        if (e.sign > 0) out.items.push_back(e);
    return out;
}

SignedEdgeStream strip_signs(const SignedEdgeStream& s) {
    SignedEdgeStream out = s;
    for (auto& e : out.items) e.sign = +1;
    return out;
}

SignedEdgeStream flip_signs(const SignedEdgeStream& s) {
    SignedEdgeStream out = s;
    for (auto& e : out.items) e.sign = -e.sign;
    return out;
}

SignedGraph to_graph(const SignedEdgeStream& s) { return SignedGraph(s.n, s.items); }

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line = 1;

    bool eof() const { return pos >= text.size(); }

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r'))
            ++pos;
    }

    void expect_newline(const char* context) {
        skip_space();
        if (pos < text.size() && text[pos] != '\n')
            throw ParseError(line, std::string("trailing characters after ") + context);
        if (pos < text.size()) {
            ++pos;
            ++line;
        }
    }

    std::uint64_t read_uint(const char* what) {
        skip_space();
        if (pos < text.size() && text[pos] == '\n') throw ParseError(line, std::string("missing ") + what);
        std::uint64_t value = 0;
        auto [next, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc() || next == text.data() + pos)
            throw ParseError(line, std::string("expected ") + what);
        pos = static_cast<std::size_t>(next - text.data());
        return value;
    }

    int read_sign() {
        skip_space();
        if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-'))
            throw ParseError(line, "expected sign '+' or '-'");
        int sign = text[pos] == '+' ? +1 : -1;
        ++pos;
        return sign;
    }
};

}  // namespace

SignedEdgeStream parse_stream(std::string_view text) {
    Cursor cur{text};
    std::uint64_t n = cur.read_uint("vertex count");
    std::uint64_t m = cur.read_uint("edge count");
    cur.expect_newline("header");
    if (n > std::numeric_limits<Vertex>::max()) throw ParseError(1, "vertex count too large");

    SignedEdgeStream s{static_cast<Vertex>(n), {}};
    s.items.reserve(m);
    std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
    for (std::uint64_t i = 0; i < m; ++i) {
        cur.skip_space();
        while (!cur.eof() && text[cur.pos] == '\n') {  // tolerate blank lines
            ++cur.pos;
            ++cur.line;
            cur.skip_space();
        }
        if (cur.eof()) throw ParseError(cur.line, "unexpected end of input: expected " +
                                                      std::to_string(m) + " edges, got " + std::to_string(i));
        std::size_t line = cur.line;
        std::uint64_t u = cur.read_uint("vertex id");
        std::uint64_t v = cur.read_uint("vertex id");
        int sign = cur.read_sign();
        cur.expect_newline("edge");
        if (u == v) throw ParseError(line, "self-loop at vertex " + std::to_string(u));
        if (u >= n || v >= n)
            throw ParseError(line, "vertex id out of range (n=" + std::to_string(n) + ")");
        if (u > v) std::swap(u, v);
        std::size_t key = u * n + v;
        if (seen[key])
            throw ParseError(line, "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        seen[key] = true;
        s.items.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), sign});
    }
    cur.skip_space();
    while (!cur.eof() && text[cur.pos] == '\n') {
        ++cur.pos;
        ++cur.line;
        cur.skip_space();
    }
    if (!cur.eof()) throw ParseError(cur.line, "extra content after " + std::to_string(m) + " edges");
    return s;
}

std::string serialize_stream(const SignedEdgeStream& s) {
    std::ostringstream out;
    out << s.n << ' ' << s.items.size() << '\n';
    for (const auto& e : s.items)
        out << e.u << ' ' << e.v << ' ' << (e.sign > 0 ? '+' : '-') << '\n';
    return out.str();
}

SignedEdgeStream load_stream(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open stream file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_stream(buf.str());
}

void save_stream(const SignedEdgeStream& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write stream file: " + path);
    out << serialize_stream(s);
}

}  // namespace sigtri
