#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "sigtri/stream.hpp"

namespace sigtri {

// Per-ordering decomposition of a triangle count into the survival mass
// (1-1/k)^d caught by the light estimator in expectation and its complement.
struct KSplit {
    double t_less = 0.0;
    double t_greater = 0.0;
    std::vector<double> per_triangle;  // t_less share of each triangle, in [0,1]
};

// Exhaustive, deterministic reference for the split. Enumerates triangles of
// the targeted type together with their arrival order and sums the survival
// exponents: a positive wedge arm counts only intervening negative edges at
// its tail, a negative arm counts all intervening edges. Unsigned mode uses
// full degrees on both arms and every triangle.
KSplit oracle_k_split(const SignedEdgeStream& s, double k, StreamMode mode);

// Closed-form moments of the one-positive-edge triangle count in a random
// signed graph with edge probability p_e and positive-sign probability p_plus.
double expected_t1(std::uint64_t n, double p_e, double p_plus);
double var_t1(std::uint64_t n, double p_e, double p_plus);

// Planning-grade upper estimate of the expected maximum number of such
// triangles sharing an edge; not a correctness oracle. Throws
// std::domain_error when n^2 p_e <= 1.
double expected_delta_e1_bound(std::uint64_t n, double p_e, double p_plus);

struct RepetitionPlan {
    std::size_t n_eps_light = 1;
    std::size_t n_delta_light = 1;
    std::size_t n_eps_heavy = 1;
    std::size_t n_delta_heavy = 1;
    std::size_t k_auto = 1;
    std::size_t k_effective = 1;

    std::size_t light_runs() const { return n_eps_light * n_delta_light; }
    std::size_t heavy_runs() const { return n_eps_heavy * n_delta_heavy; }

    nlohmann::json to_json() const;
};

// Repetition counts for the median-of-means reduction. Bucket counts come
// from the Hoeffding bound ceil(8 ln(1/delta)); per-bucket counts from the
// Chebyshev choice 4*VarBound/(mean^2 eps^2), with VarBound = (km)^2 - t^2
// on the light side and 4 t sqrt(k) delta_e / m^(3/2) on the heavy side.
// k = 0 selects k_auto = ceil(t^(2/5) delta_e^(2/5) / m^(1/5)), clamped to
// [1, m].
RepetitionPlan repetition_plan(double eps, double delta, std::size_t k, double m_hint,
                               double t_hint, double delta_e_hint);

struct SpaceModelReport {
    double hybrid_units = 0.0;     // m^(8/5) T1^(-6/5) dE^(4/5) log2(n) / eps^2 * ln(1/delta)
    double classical_units = 0.0;  // m/T1 (dE + sqrt(dV)) log2(n) / eps^2 * ln(1/delta)
    double hybrid_over_classical = 0.0;
    unsigned qubits_per_worker = 0;  // 2 ceil(log2 n) + 2

    nlohmann::json to_json() const;
};

SpaceModelReport space_model(std::uint64_t n, double m, double t1, double delta_e,
                             double delta_v, double eps, double delta);

}  // namespace sigtri
