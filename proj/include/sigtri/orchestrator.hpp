#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigtri/analytics.hpp"
#include "sigtri/estimators.hpp"
#include "sigtri/stream.hpp"

namespace sigtri {

class InfeasiblePlanError : public std::runtime_error {
public:
    explicit InfeasiblePlanError(const std::string& what) : std::runtime_error(what) {}
};

class WorkerError : public std::runtime_error {
public:
    WorkerError(std::size_t index, std::uint64_t seed, const std::string& what)
        : std::runtime_error("worker " + std::to_string(index) + " (seed " + std::to_string(seed) +
                             "): " + what),
          index_(index),
          seed_(seed) {}
    std::size_t index() const { return index_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::size_t index_;
    std::uint64_t seed_;
};

// Pool of simulated processors. Workers never communicate; only per-worker
// scalars flow back to the reducer, so the execution degree is free to vary
// without changing a single output bit.
struct WorkerPool {
    std::size_t light_workers = std::numeric_limits<std::size_t>::max();
    std::size_t heavy_workers = std::numeric_limits<std::size_t>::max();
    unsigned max_parallel = 1;
    bool allow_downscale = false;
};

// Parameter hints (edge count, target count, max triangles per edge) that
// drive k and the repetition counts.
struct Hints {
    double m = 0.0;
    double t = 0.0;
    double delta_e = 0.0;
};

// Runs `count` independent worker tasks, worker i seeded with
// split_seed(base_seed, i), at most max_parallel at a time. Results are
// collected in worker-index order; a failing worker surfaces as WorkerError
// with its index and seed.
std::vector<double> run_distributed(std::size_t count, std::uint64_t base_seed,
                                    unsigned max_parallel,
                                    const std::function<double(std::size_t, std::uint64_t)>& task);

// Mean within each consecutive bucket of `bucket_size` values, then the
// median across buckets (lower-middle element for an even bucket count, so
// the output stays inside the achievable value set).
double median_of_means(std::span<const double> values, std::size_t bucket_size,
                       std::size_t buckets);

// One reduced estimator side (light or heavy) with any downscale applied.
struct SideReduction {
    std::size_t n_eps = 0;
    std::size_t n_delta = 0;
    std::size_t planned_n_eps = 0;
    std::size_t planned_n_delta = 0;
    bool downscaled = false;
    double eps_budget = 0.0;
    double eps_implied = 0.0;    // accuracy the capped counts actually buy
    double delta_implied = 0.0;
    std::uint64_t base_seed = 0;
    double reduced = 0.0;
    std::vector<double> raw;

    nlohmann::json to_json(bool include_raw) const;
};

struct RunReport {
    std::string target;  // "t1", "t3", "t_all"
    StreamMode mode = StreamMode::SignedT1;
    std::size_t k = 1;
    std::size_t m_budget = 0;
    Hints hints;
    SideReduction light;
    SideReduction heavy;
    double heavy_scale = 1.0;    // m^(3/2)/sqrt(k)
    double reduced_light = 0.0;
    double reduced_heavy = 0.0;  // already rescaled
    double combined = 0.0;

    nlohmann::json to_json(bool include_raw = false) const;
};

// Counts type-1 triangles: picks k from the hints (k_override = 0), spreads
// the (eps/2, delta/2) budgets over light and heavy median-of-means
// reductions, and sums the two reduced estimates.
RunReport t1_hybrid(const SignedEdgeStream& s, double eps, double delta, const Hints& hints,
                    std::uint64_t master_seed, const WorkerPool& pool, std::size_t k_override = 0);

// Sign-blind version of the same combiner (callers pre-filter the stream).
RunReport t_all_hybrid(const SignedEdgeStream& s, double eps, double delta, const Hints& hints,
                       std::uint64_t master_seed, const WorkerPool& pool,
                       std::size_t k_override = 0);

struct BalanceHints {
    Hints t1;
    Hints t3;     // on the positive subsequence
    Hints total;  // on the sign-stripped stream
};

// Exact hints for all three balance targets, computed from the stream.
BalanceHints exact_balance_hints(const SignedEdgeStream& s);

struct BalanceReport {
    double balance = 0.0;
    RunReport r1;
    RunReport r3;
    RunReport r_total;

    nlohmann::json to_json(bool include_raw = false) const;
};

// Estimates (T1 + T3)/T by running the three hybrid targets, each with
// budget (eps/(2+eps), delta/3). Throws UndefinedBalanceError when the
// reduced denominator is not positive. A nonzero k_override pins k for all
// three targets.
BalanceReport balance_hybrid(const SignedEdgeStream& s, double eps, double delta,
                             const BalanceHints& hints, std::uint64_t master_seed,
                             const WorkerPool& pool, std::size_t k_override = 0);

struct ClassicalBalanceReport {
    double balance = 0.0;
    double reduced_bal = 0.0;
    double reduced_unbal = 0.0;
    SideReduction bal;
    SideReduction unbal;

    nlohmann::json to_json(bool include_raw = false) const;
};

// Median-of-means reduction over independent single-pass balance tallies;
// each worker contributes its (balanced, unbalanced) pair.
ClassicalBalanceReport balance_classical_mom(const SignedEdgeStream& s, double eps, double delta,
                                             double p_e_rate, double p_v_rate,
                                             std::uint64_t master_seed, const WorkerPool& pool);

}  // namespace sigtri
