#pragma once

#include <cstdint>

#include "sigtri/stream.hpp"

namespace sigtri {

// Single-run estimator outputs. Each call is a pure function of
// (stream, parameters, seed); runs never share state and may execute
// concurrently.

// Signed JK pass: samples edges at p_e_rate and vertices at p_v_rate, counts
// closed wedges whose signs complete a one-positive-edge triangle, each with
// weight 1/(p_v p_e^2). Rates (1,1) return the exact count for any ordering.
double t1_pure_classical(const SignedEdgeStream& s, double p_e_rate, double p_v_rate,
                         std::uint64_t seed);

// Sign-blind variant counting every closed wedge.
double t_all_pure_classical(const SignedEdgeStream& s, double p_e_rate, double p_v_rate,
                            std::uint64_t seed);

// Counts type-j triangles by mapping onto the two passes above:
// j=1 direct, j=2 on the sign-flipped stream, j=3 sign-blind on the positive
// subsequence, j=0 sign-blind on the negated positive subsequence.
double tj_pure_classical(const SignedEdgeStream& s, int j, double p_e_rate, double p_v_rate,
                         std::uint64_t seed);

// Stores directed edges with probability 1/sqrt(km) * sqrt(k/m) per copy and
// tracks intervening-degree counters; a matching wedge adds the deletion mass
// 1 - (1-1/k)^e. Raw output targets T1_greater * sqrt(k) / m^(3/2); the
// caller rescales.
double t1_heavy_classical(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                          std::uint64_t seed);
double t_all_heavy(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                   std::uint64_t seed);

// Simulated-sketchpad pass: with probability 1/k per edge, issues the signed
// wedge queries against the sketch and returns r*k*m on the first non-bot
// outcome; otherwise inserts the edge. Output support is {0, +km, -km}.
double t1_light_quantum(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                        std::uint64_t seed);
double t_all_light(const SignedEdgeStream& s, std::size_t k, std::size_t m_budget,
                   std::uint64_t seed);

struct BalanceTallies {
    double bal = 0.0;    // weight of balanced closures (one or three positives)
    double unbal = 0.0;  // weight of unbalanced closures

    // Throws UndefinedBalanceError when no closure was observed.
    double ratio() const;
};

// One pass of the balance variant of the signed JK estimator.
BalanceTallies balance_pure_classical(const SignedEdgeStream& s, double p_e_rate,
                                      double p_v_rate, std::uint64_t seed);

}  // namespace sigtri
