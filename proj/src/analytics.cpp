#include "sigtri/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigtri {

namespace {

struct ArrivalIndex {
    std::size_t n;
    std::vector<std::int64_t> position;                         // n*n, -1 = absent
    std::vector<std::vector<std::pair<std::size_t, int>>> inc;  // per vertex: (pos, sign), sorted

    explicit ArrivalIndex(const SignedEdgeStream& s) : n(s.n), position(s.n * std::size_t{s.n}, -1), inc(s.n) {
        for (std::size_t i = 0; i < s.items.size(); ++i) {
            const auto& e = s.items[i];
            position[static_cast<std::size_t>(e.u) * n + e.v] = static_cast<std::int64_t>(i);
            position[static_cast<std::size_t>(e.v) * n + e.u] = static_cast<std::int64_t>(i);
            inc[e.u].push_back({i, e.sign});
            inc[e.v].push_back({i, e.sign});
        }
        // arrival order means each inc list is already sorted by position
    }

    std::int64_t pos(Vertex a, Vertex b) const { return position[static_cast<std::size_t>(a) * n + b]; }

    // Edges incident to x arriving strictly between positions lo and hi.
    std::pair<std::size_t, std::size_t> degrees_between(Vertex x, std::size_t lo, std::size_t hi) const {
        const auto& list = inc[x];
        auto first = std::upper_bound(list.begin(), list.end(), lo,
                                      [](std::size_t p, const auto& e) { return p < e.first; });
        std::size_t minus = 0, plus = 0;
        for (auto it = first; it != list.end() && it->first < hi; ++it) {
            if (it->second > 0)
                ++plus;
            else
                ++minus;
        }
        return {plus, minus};
    }
};

}  // namespace

KSplit oracle_k_split(const SignedEdgeStream& s, double k, StreamMode mode) {
    if (k < 1.0) throw std::invalid_argument("oracle_k_split: k must be >= 1");
    ArrivalIndex idx(s);
    double q = 1.0 - 1.0 / k;
    KSplit split;

    std::size_t n = s.n;
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            if (idx.pos(a, b) < 0) continue;
            for (Vertex c = b + 1; c < n; ++c) {
                if (idx.pos(a, c) < 0 || idx.pos(b, c) < 0) continue;

                struct Arm {
                    Vertex u, v;  // u shared later, v = tail
                    std::size_t pos;
                    int sign;
                };
                std::array<Arm, 3> es = {
                    Arm{a, b, static_cast<std::size_t>(idx.pos(a, b)), 0},
                    Arm{a, c, static_cast<std::size_t>(idx.pos(a, c)), 0},
                    Arm{b, c, static_cast<std::size_t>(idx.pos(b, c)), 0},
                };
                for (auto& e : es) {
                    const auto& item = s.items[e.pos];
                    e.sign = item.sign;
                }
                std::sort(es.begin(), es.end(), [](const Arm& x, const Arm& y) { return x.pos < y.pos; });

                if (mode == StreamMode::SignedT1) {
                    int positives = (es[0].sign > 0) + (es[1].sign > 0) + (es[2].sign > 0);
                    if (positives != 1) continue;
                }

                // wedge center = vertex shared by the two earliest edges
                Vertex center = (es[0].u == es[1].u || es[0].u == es[1].v) ? es[0].u : es[0].v;
                Vertex tail1 = es[0].u == center ? es[0].v : es[0].u;
                Vertex tail2 = es[1].u == center ? es[1].v : es[1].u;
                (void)center;

                std::size_t close = es[2].pos;
                auto [p1, m1] = idx.degrees_between(tail1, es[0].pos, close);
                auto [p2, m2] = idx.degrees_between(tail2, es[1].pos, close);

                std::size_t exponent;
                if (mode == StreamMode::UnsignedAll) {
                    exponent = p1 + m1 + p2 + m2;
                } else {
                    // a positive arm survives negative intervening edges only
                    std::size_t e1 = es[0].sign > 0 ? m1 : p1 + m1;
                    std::size_t e2 = es[1].sign > 0 ? m2 : p2 + m2;
                    exponent = e1 + e2;
                }
                double t_less = std::pow(q, static_cast<double>(exponent));
                split.t_less += t_less;
                split.t_greater += 1.0 - t_less;
                split.per_triangle.push_back(t_less);
            }
        }
    }
    return split;
}

namespace {
double choose3(double n) { return n * (n - 1.0) * (n - 2.0) / 6.0; }
double choose2(double n) { return n * (n - 1.0) / 2.0; }
}  // namespace

double expected_t1(std::uint64_t n, double p_e, double p_plus) {
    double pe3 = p_e * p_e * p_e;
    double q = 1.0 - p_plus;
    return 3.0 * choose3(static_cast<double>(n)) * pe3 * p_plus * q * q;
}

double var_t1(std::uint64_t n, double p_e, double p_plus) {
    double nn = static_cast<double>(n);
    double q = 1.0 - p_plus;
    double pe3 = p_e * p_e * p_e;
    double p_tri = 3.0 * pe3 * p_plus * q * q;  // one triple forms this type
    double var_single = choose3(nn) * p_tri * (1.0 - p_tri);
    double joint = std::pow(p_e, 5) * p_plus * q * q * q * (1.0 + 3.0 * p_plus);
    double cov = joint - p_tri * p_tri;
    double pairs = choose2(nn) * choose2(nn - 2.0);
    return var_single + 2.0 * pairs * cov;
}

double expected_delta_e1_bound(std::uint64_t n, double p_e, double p_plus) {
    if (n < 3) throw std::domain_error("expected_delta_e1_bound: need n >= 3");
    double nn = static_cast<double>(n);
    double log_edges = std::log(nn * nn * p_e);
    if (log_edges <= 0.0) throw std::domain_error("expected_delta_e1_bound: n^2 p_e must exceed 1");
    double q = 3.0 * p_e * p_e * p_plus * (1.0 - p_plus) * (1.0 - p_plus);
    double mean = (nn - 2.0) * q;
    double var = (nn - 2.0) * q * (1.0 - q);
    return mean + std::sqrt(2.0 * var * log_edges);
}

nlohmann::json RepetitionPlan::to_json() const {
    return {{"n_eps_light", n_eps_light},   {"n_delta_light", n_delta_light},
            {"n_eps_heavy", n_eps_heavy},   {"n_delta_heavy", n_delta_heavy},
            {"k_auto", k_auto},             {"k_effective", k_effective},
            {"light_runs", light_runs()},   {"heavy_runs", heavy_runs()}};
}

RepetitionPlan repetition_plan(double eps, double delta, std::size_t k, double m_hint,
                               double t_hint, double delta_e_hint) {
    if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("eps and delta must lie in (0,1]");
    if (m_hint <= 0.0 || t_hint <= 0.0 || delta_e_hint <= 0.0)
        throw std::invalid_argument("parameter hints must be positive");

    RepetitionPlan plan;
    std::size_t m_cap = static_cast<std::size_t>(std::max(1.0, std::floor(m_hint)));
    double k_raw = std::ceil(std::pow(t_hint, 0.4) * std::pow(delta_e_hint, 0.4) / std::pow(m_hint, 0.2));
    plan.k_auto = static_cast<std::size_t>(std::clamp(k_raw, 1.0, static_cast<double>(m_cap)));
    plan.k_effective = k == 0 ? plan.k_auto : std::clamp<std::size_t>(k, 1, m_cap);

    double n_delta = std::ceil(8.0 * std::log(1.0 / delta));
    plan.n_delta_light = plan.n_delta_heavy = static_cast<std::size_t>(std::max(1.0, n_delta));

    double km = static_cast<double>(plan.k_effective) * m_hint;
    double light_ratio = (km * km - t_hint * t_hint) / (t_hint * t_hint);
    plan.n_eps_light = static_cast<std::size_t>(
        std::max(1.0, std::ceil(4.0 * std::max(0.0, light_ratio) / (eps * eps))));

    double heavy_ratio = 4.0 * delta_e_hint * std::pow(m_hint, 1.5) /
                         (t_hint * std::sqrt(static_cast<double>(plan.k_effective)));
    plan.n_eps_heavy =
        static_cast<std::size_t>(std::max(1.0, std::ceil(4.0 * heavy_ratio / (eps * eps))));
    return plan;
}

nlohmann::json SpaceModelReport::to_json() const {
    return {{"hybrid_units", hybrid_units},
            {"classical_units", classical_units},
            {"hybrid_over_classical", hybrid_over_classical},
            {"qubits_per_worker", qubits_per_worker}};
}

SpaceModelReport space_model(std::uint64_t n, double m, double t1, double delta_e,
                             double delta_v, double eps, double delta) {
    if (n < 2 || m <= 0.0 || t1 <= 0.0 || delta_e <= 0.0 || delta_v <= 0.0)
        throw std::invalid_argument("space_model: inputs must be positive");
    double common = std::log2(static_cast<double>(n)) / (eps * eps) * std::log(1.0 / delta);
    SpaceModelReport report;
    report.hybrid_units =
        std::pow(m, 1.6) / std::pow(t1, 1.2) * std::pow(delta_e, 0.8) * common;
    report.classical_units = m / t1 * (delta_e + std::sqrt(delta_v)) * common;
    report.hybrid_over_classical = report.hybrid_units / report.classical_units;
    unsigned log2n = 0;
    while ((1ULL << log2n) < n) ++log2n;
    report.qubits_per_worker = 2 * log2n + 2;
    return report;
}

}  // namespace sigtri
