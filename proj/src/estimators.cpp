#include "sigtri/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sigtri/sampling.hpp"
#include "sigtri/sketch_sim.hpp"

namespace sigtri {

namespace {

void check_rates(double p_e_rate, double p_v_rate) {
    if (!(p_e_rate > 0.0 && p_e_rate <= 1.0) || !(p_v_rate > 0.0 && p_v_rate <= 1.0))
        throw std::invalid_argument("sampling rates must lie in (0,1]");
}

void check_budget(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget) {
    if (m_budget == 0) throw std::invalid_argument("edge budget must be >= 1");
    if (k == 0 || k > m_budget) throw std::invalid_argument("k must lie in [1, m]");
    if (s.size() > m_budget)
        throw std::invalid_argument("stream longer than declared edge budget");
}

enum class WedgeKind { SignedT1, Unsigned, Balance };

struct PureTallies {
    double matched = 0.0;  // SignedT1 / Unsigned accumulator
    double bal = 0.0;
    double unbal = 0.0;
};

// Shared single pass of the edge+vertex sampling estimator. The wedge scan
// walks stored neighbours of the arriving endpoints instead of all of V;
// non-stored vertices cannot satisfy the membership test anyway.
PureTallies pure_classical_pass(const SignedEdgeStream& s, double p_e_rate, double p_v_rate,
                                std::uint64_t seed, WedgeKind kind) {
    check_rates(p_e_rate, p_v_rate);
    std::size_t n = s.n;
    Rng rng(seed);
    PairwiseHash h_v(p_v_rate, std::max<std::size_t>(n, 1), rng.next());
    std::vector<uint8_t> v_sampled(n);
    for (std::size_t u = 0; u < n; ++u) v_sampled[u] = h_v(u);

    std::vector<int8_t> stored(n * n, 0);
    std::vector<std::vector<Vertex>> nbrs(n);
    double weight = 1.0 / (p_v_rate * p_e_rate * p_e_rate);
    PureTallies out;

    for (const auto& e : s.items) {
        const auto& small = nbrs[e.u].size() <= nbrs[e.v].size() ? nbrs[e.u] : nbrs[e.v];
        Vertex other = nbrs[e.u].size() <= nbrs[e.v].size() ? e.v : e.u;
        for (Vertex u : small) {
            int8_t s_other = stored[static_cast<std::size_t>(u) * n + other];
            if (s_other == 0 || !v_sampled[u]) continue;
            int8_t s_own = stored[static_cast<std::size_t>(u) * n + (other == e.v ? e.u : e.v)];
            switch (kind) {
                case WedgeKind::Unsigned:
                    out.matched += weight;
                    break;
                case WedgeKind::SignedT1:
                    if (e.sign > 0 ? (s_own < 0 && s_other < 0) : (s_own != s_other))
                        out.matched += weight;
                    break;
                case WedgeKind::Balance: {
                    int positives = (e.sign > 0) + (s_own > 0) + (s_other > 0);
                    (positives % 2 == 1 ? out.bal : out.unbal) += weight;
                    break;
                }
            }
        }
        // edge hash drawn unconditionally so the trajectory consumes a fixed
        // number of random words per edge
        bool edge_sampled = rng.bernoulli(p_e_rate);
        if (edge_sampled && (v_sampled[e.u] || v_sampled[e.v])) {
            stored[static_cast<std::size_t>(e.u) * n + e.v] = static_cast<int8_t>(e.sign);
            stored[static_cast<std::size_t>(e.v) * n + e.u] = static_cast<int8_t>(e.sign);
            nbrs[e.u].push_back(e.v);
            nbrs[e.v].push_back(e.u);
        }
    }
    return out;
}

}  // namespace

double t1_pure_classical(const SignedEdgeStream& s, double p_e_rate, double p_v_rate,
                         std::uint64_t seed) {
    return pure_classical_pass(s, p_e_rate, p_v_rate, seed, WedgeKind::SignedT1).matched;
}

double t_all_pure_classical(const SignedEdgeStream& s, double p_e_rate, double p_v_rate,
                            std::uint64_t seed) {
    return pure_classical_pass(s, p_e_rate, p_v_rate, seed, WedgeKind::Unsigned).matched;
}

double tj_pure_classical(const SignedEdgeStream& s, int j, double p_e_rate, double p_v_rate,
                         std::uint64_t seed) {
    switch (j) {
        case 1: return t1_pure_classical(s, p_e_rate, p_v_rate, seed);
        case 2: return t1_pure_classical(flip_signs(s), p_e_rate, p_v_rate, seed);
        case 3: return t_all_pure_classical(filter_positive(s), p_e_rate, p_v_rate, seed);
        case 0: return t_all_pure_classical(filter_positive(flip_signs(s)), p_e_rate, p_v_rate, seed);
        default: throw std::invalid_argument("triangle type must be 0, 1, 2 or 3");
    }
}

double BalanceTallies::ratio() const {
    if (bal + unbal == 0.0) throw UndefinedBalanceError();
    return bal / (bal + unbal);
}

BalanceTallies balance_pure_classical(const SignedEdgeStream& s, double p_e_rate,
                                      double p_v_rate, std::uint64_t seed) {
    auto t = pure_classical_pass(s, p_e_rate, p_v_rate, seed, WedgeKind::Balance);
    return {t.bal, t.unbal};
}

namespace {

struct StoredEntry {
    Vertex head;
    Vertex tail;
    int8_t sign;
    std::uint32_t d_plus = 0;   // later edges on tail, by their sign
    std::uint32_t d_minus = 0;
};

double heavy_pass(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                  std::uint64_t seed, bool signed_mode) {
    check_budget(s, k, m_budget);
    Rng rng(seed);
    double md = static_cast<double>(m_budget);
    double kd = static_cast<double>(k);
    PairwiseHash h_v(clamp_probability(1.0 / std::sqrt(kd * md)), std::max<Vertex>(s.n, 1),
                     rng.next());
    double p_index = clamp_probability(std::sqrt(kd / md));
    double survive = 1.0 - 1.0 / kd;

    std::vector<StoredEntry> entries;  // expected O(1) live entries
    double total = 0.0;

    for (const auto& e : s.items) {
        // wedge scan: pair up entries with tails at both endpoints and a
        // common head, ascending in head for a reproducible summation order
        for (const auto& a : entries) {
            if (a.tail != e.u) continue;
            for (const auto& b : entries) {
                if (b.tail != e.v || b.head != a.head) continue;
                double exponent = -1.0;
                if (!signed_mode) {
                    exponent = a.d_plus + a.d_minus + b.d_plus + b.d_minus;
                } else if (e.sign > 0) {
                    if (a.sign < 0 && b.sign < 0)
                        exponent = a.d_plus + a.d_minus + b.d_plus + b.d_minus;
                } else {
                    // the positive arm only dies to negative neighbours, so
                    // its counter contributes d_minus alone
                    if (a.sign > 0 && b.sign < 0)
                        exponent = a.d_minus + b.d_plus + b.d_minus;
                    else if (a.sign < 0 && b.sign > 0)
                        exponent = a.d_plus + a.d_minus + b.d_minus;
                }
                if (exponent >= 0.0) total += 1.0 - std::pow(survive, exponent);
            }
        }
        for (auto& entry : entries) {
            if (entry.tail != e.u && entry.tail != e.v) continue;
            if (e.sign > 0)
                ++entry.d_plus;
            else
                ++entry.d_minus;
        }
        bool keep_uv = rng.bernoulli(p_index);
        bool keep_vu = rng.bernoulli(p_index);
        if (keep_uv && h_v(e.u)) entries.push_back({e.u, e.v, static_cast<int8_t>(e.sign)});
        if (keep_vu && h_v(e.v)) entries.push_back({e.v, e.u, static_cast<int8_t>(e.sign)});
    }
    return total;
}

double light_pass(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                  std::uint64_t seed, StreamMode mode) {
    if (s.size() == 0) return 0.0;
    check_budget(s, k, m_budget);
    Rng rng(seed);
    double km = static_cast<double>(k) * static_cast<double>(m_budget);
    double p_fire = 1.0 / static_cast<double>(k);
    SketchSim sketch(m_budget, s.n, mode);

    std::vector<Vertex> heads;
    std::size_t step = 0;
    for (const auto& e : s.items) {
        bool fire = rng.bernoulli(p_fire);
        if (fire) {
            heads = sketch.live_heads_for_tail(e.u);
            auto more = sketch.live_heads_for_tail(e.v);
            heads.insert(heads.end(), more.begin(), more.end());
            std::sort(heads.begin(), heads.end());
            heads.erase(std::unique(heads.begin(), heads.end()), heads.end());

            for (Vertex u : heads) {
                if (mode == StreamMode::SignedT1 && e.sign > 0) {
                    // only negative stored arms can close this wedge; heads
                    // holding positive items alone are certain-bot no-ops
                    if (sketch.sign_of(u, e.u) >= 0 && sketch.sign_of(u, e.v) >= 0) continue;
                    auto r = sketch.query_pair({u, e.u, -1}, {u, e.v, -1}, rng);
                    if (r != QueryOutcome::Bot) return static_cast<double>(static_cast<int>(r)) * km;
                } else if (mode == StreamMode::SignedT1) {
                    auto r = sketch.query_pair({u, e.u, +1}, {u, e.v, -1}, rng);
                    if (r != QueryOutcome::Bot) return static_cast<double>(static_cast<int>(r)) * km;
                    r = sketch.query_pair({u, e.u, -1}, {u, e.v, +1}, rng);
                    if (r != QueryOutcome::Bot) return static_cast<double>(static_cast<int>(r)) * km;
                } else {
                    auto r = sketch.query_pair({u, e.u, +1}, {u, e.v, +1}, rng);
                    if (r != QueryOutcome::Bot) return static_cast<double>(static_cast<int>(r)) * km;
                }
            }
        }
        sketch.insert(e.u, e.v, e.sign, step);
        ++step;
    }
    return 0.0;
}

}  // namespace

double t1_heavy_classical(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                          std::uint64_t seed) {
    return heavy_pass(s, k, m_budget, seed, true);
}

double t_all_heavy(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                   std::uint64_t seed) {
    return heavy_pass(s, k, m_budget, seed, false);
}

double t1_light_quantum(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                        std::uint64_t seed) {
    return light_pass(s, k, m_budget, seed, StreamMode::SignedT1);
}

double t_all_light(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                   std::uint64_t seed) {
    return light_pass(s, k, m_budget, seed, StreamMode::UnsignedAll);
}

}  // namespace sigtri
