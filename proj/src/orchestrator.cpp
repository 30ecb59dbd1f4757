#include "sigtri/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sigtri/sampling.hpp"
#include "sigtri/signed_graph.hpp"

namespace sigtri {

namespace {

template <typename T, typename Fn>
std::vector<T> run_indexed(std::size_t count, std::uint64_t base_seed, unsigned max_parallel,
                           const Fn& task) {
    std::vector<T> results(count);
    if (count == 0) return results;
    unsigned workers = std::max(1u, max_parallel);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t err_index = 0;
    std::uint64_t err_seed = 0;

    auto loop = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            std::uint64_t seed = split_seed(base_seed, i);
            try {
                results[i] = task(i, seed);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    err_index = i;
                    err_seed = seed;
                }
                next.store(count);  // stop handing out work
                return;
            }
        }
    };

    if (workers == 1) {
        loop();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) threads.emplace_back(loop);
        for (auto& t : threads) t.join();
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            throw WorkerError(err_index, err_seed, e.what());
        }
    }
    return results;
}

}  // namespace

std::vector<double> run_distributed(std::size_t count, std::uint64_t base_seed,
                                    unsigned max_parallel,
                                    const std::function<double(std::size_t, std::uint64_t)>& task) {
    return run_indexed<double>(count, base_seed, max_parallel, task);
}

double median_of_means(std::span<const double> values, std::size_t bucket_size,
                       std::size_t buckets) {
    if (buckets == 0 || bucket_size == 0)
        throw std::invalid_argument("median_of_means: bucket shape must be positive");
    if (values.size() != bucket_size * buckets)
        throw std::invalid_argument("median_of_means: got " + std::to_string(values.size()) +
                                    " values for shape " + std::to_string(bucket_size) + "x" +
                                    std::to_string(buckets));
    std::vector<double> means(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < bucket_size; ++i) sum += values[b * bucket_size + i];
        means[b] = sum / static_cast<double>(bucket_size);
    }
    std::sort(means.begin(), means.end());
    return means[(buckets - 1) / 2];
}

namespace {

// Fits the planned repetition shape into the available worker count. The
// bucket count is preserved as long as it fits; the per-bucket count absorbs
// the cut, and the implied accuracy of the capped shape is recorded.
SideReduction shape_side(std::size_t planned_eps, std::size_t planned_delta,
                         std::size_t available, bool allow_downscale, double eps_budget,
                         const char* side) {
    SideReduction red;
    red.planned_n_eps = planned_eps;
    red.planned_n_delta = planned_delta;
    red.eps_budget = eps_budget;
    if (planned_eps * planned_delta <= available) {
        red.n_eps = planned_eps;
        red.n_delta = planned_delta;
    } else if (!allow_downscale) {
        throw InfeasiblePlanError(std::string(side) + " side needs " +
                                  std::to_string(planned_eps * planned_delta) + " workers, pool has " +
                                  std::to_string(available) + " (downscaling not enabled)");
    } else {
        red.downscaled = true;
        red.n_delta = std::max<std::size_t>(1, std::min(planned_delta, available));
        red.n_eps = std::max<std::size_t>(1, available / red.n_delta);
    }
    red.eps_implied =
        eps_budget * std::sqrt(static_cast<double>(planned_eps) / static_cast<double>(red.n_eps));
    red.delta_implied = std::exp(-static_cast<double>(red.n_delta) / 8.0);
    return red;
}

RunReport hybrid_run(const char* target, StreamMode mode, const SignedEdgeStream& s, double eps,
                     double delta, const Hints& hints, std::uint64_t master_seed,
                     const WorkerPool& pool, std::size_t k_override = 0) {
    RunReport report;
    report.target = target;
    report.mode = mode;
    report.hints = hints;

    auto plan = repetition_plan(eps / 2.0, delta / 2.0, k_override, hints.m, hints.t, hints.delta_e);
    report.k = plan.k_effective;
    report.m_budget = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hints.m)));
    if (s.size() > report.m_budget)
        throw std::invalid_argument("stream length exceeds the declared edge budget");

    report.light = shape_side(plan.n_eps_light, plan.n_delta_light, pool.light_workers,
                              pool.allow_downscale, eps / 2.0, "light");
    report.heavy = shape_side(plan.n_eps_heavy, plan.n_delta_heavy, pool.heavy_workers,
                              pool.allow_downscale, eps / 2.0, "heavy");
    report.light.base_seed = split_seed(master_seed, 1);
    report.heavy.base_seed = split_seed(master_seed, 2);

    std::size_t k = report.k;
    std::size_t m_budget = report.m_budget;
    report.light.raw = run_distributed(
        report.light.n_eps * report.light.n_delta, report.light.base_seed, pool.max_parallel,
        [&](std::size_t, std::uint64_t seed) {
            return mode == StreamMode::SignedT1 ? t1_light_quantum(s, k, m_budget, seed)
                                                : t_all_light(s, k, m_budget, seed);
        });
    report.heavy.raw = run_distributed(
        report.heavy.n_eps * report.heavy.n_delta, report.heavy.base_seed, pool.max_parallel,
        [&](std::size_t, std::uint64_t seed) {
            return mode == StreamMode::SignedT1 ? t1_heavy_classical(s, k, m_budget, seed)
                                                : t_all_heavy(s, k, m_budget, seed);
        });

    report.light.reduced = median_of_means(report.light.raw, report.light.n_eps, report.light.n_delta);
    report.heavy.reduced = median_of_means(report.heavy.raw, report.heavy.n_eps, report.heavy.n_delta);
    report.heavy_scale =
        std::pow(static_cast<double>(m_budget), 1.5) / std::sqrt(static_cast<double>(k));
    report.reduced_light = report.light.reduced;
    report.reduced_heavy = report.heavy.reduced * report.heavy_scale;
    report.combined = report.reduced_light + report.reduced_heavy;
    return report;
}

Hints graph_hints(const SignedEdgeStream& s, double target_count) {
    auto params = graph_params(to_graph(s));
    Hints h;
    h.m = std::max<double>(1.0, static_cast<double>(s.size()));
    h.t = std::max(1.0, target_count);
    h.delta_e = std::max(1.0, static_cast<double>(params.delta_e));
    return h;
}

}  // namespace

RunReport t1_hybrid(const SignedEdgeStream& s, double eps, double delta, const Hints& hints,
                    std::uint64_t master_seed, const WorkerPool& pool, std::size_t k_override) {
    return hybrid_run("t1", StreamMode::SignedT1, s, eps, delta, hints, master_seed, pool, k_override);
}

RunReport t_all_hybrid(const SignedEdgeStream& s, double eps, double delta, const Hints& hints,
                       std::uint64_t master_seed, const WorkerPool& pool, std::size_t k_override) {
    return hybrid_run("t_all", StreamMode::UnsignedAll, s, eps, delta, hints, master_seed, pool,
                      k_override);
}

BalanceHints exact_balance_hints(const SignedEdgeStream& s) {
    auto counts = count_triangles_exact(to_graph(s));
    BalanceHints hints;
    hints.t1 = graph_hints(s, static_cast<double>(counts.t1));
    hints.t3 = graph_hints(filter_positive(s), static_cast<double>(counts.t3));
    hints.total = graph_hints(strip_signs(s), static_cast<double>(counts.total()));
    return hints;
}

BalanceReport balance_hybrid(const SignedEdgeStream& s, double eps, double delta,
                             const BalanceHints& hints, std::uint64_t master_seed,
                             const WorkerPool& pool, std::size_t k_override) {
    double eps_each = eps / (2.0 + eps);
    double delta_each = delta / 3.0;

    BalanceReport report;
    report.r1 = hybrid_run("t1", StreamMode::SignedT1, s, eps_each, delta_each, hints.t1,
                           split_seed(master_seed, 11), pool, k_override);
    report.r3 = hybrid_run("t3", StreamMode::UnsignedAll, filter_positive(s), eps_each, delta_each,
                           hints.t3, split_seed(master_seed, 12), pool, k_override);
    report.r_total = hybrid_run("t_all", StreamMode::UnsignedAll, strip_signs(s), eps_each,
                                delta_each, hints.total, split_seed(master_seed, 13), pool,
                                k_override);
    if (report.r_total.combined <= 0.0)
        throw UndefinedBalanceError();
    report.balance = (report.r1.combined + report.r3.combined) / report.r_total.combined;
    return report;
}

ClassicalBalanceReport balance_classical_mom(const SignedEdgeStream& s, double eps, double delta,
                                             double p_e_rate, double p_v_rate,
                                             std::uint64_t master_seed, const WorkerPool& pool) {
    double eps_each = eps / (2.0 + eps);
    double delta_each = delta / 2.0;
    std::size_t n_eps =
        static_cast<std::size_t>(std::max(1.0, std::ceil(4.0 / (eps_each * eps_each))));
    std::size_t n_delta =
        static_cast<std::size_t>(std::max(1.0, std::ceil(8.0 * std::log(1.0 / delta_each))));

    ClassicalBalanceReport report;
    report.bal = shape_side(n_eps, n_delta, pool.heavy_workers, pool.allow_downscale, eps_each,
                            "classical");
    report.unbal = report.bal;
    std::uint64_t base_seed = split_seed(master_seed, 3);
    report.bal.base_seed = report.unbal.base_seed = base_seed;

    auto pairs = run_indexed<BalanceTallies>(
        report.bal.n_eps * report.bal.n_delta, base_seed, pool.max_parallel,
        [&](std::size_t, std::uint64_t seed) {
            return balance_pure_classical(s, p_e_rate, p_v_rate, seed);
        });
    report.bal.raw.reserve(pairs.size());
    report.unbal.raw.reserve(pairs.size());
    for (const auto& p : pairs) {
        report.bal.raw.push_back(p.bal);
        report.unbal.raw.push_back(p.unbal);
    }
    report.bal.reduced = median_of_means(report.bal.raw, report.bal.n_eps, report.bal.n_delta);
    report.unbal.reduced = median_of_means(report.unbal.raw, report.unbal.n_eps, report.unbal.n_delta);
    report.reduced_bal = report.bal.reduced;
    report.reduced_unbal = report.unbal.reduced;
    if (report.reduced_bal + report.reduced_unbal <= 0.0) throw UndefinedBalanceError();
    report.balance = report.reduced_bal / (report.reduced_bal + report.reduced_unbal);
    return report;
}

nlohmann::json SideReduction::to_json(bool include_raw) const {
    nlohmann::json j{{"n_eps", n_eps},
                     {"n_delta", n_delta},
                     {"planned_n_eps", planned_n_eps},
                     {"planned_n_delta", planned_n_delta},
                     {"downscaled", downscaled},
                     {"eps_budget", eps_budget},
                     {"eps_implied", eps_implied},
                     {"delta_implied", delta_implied},
                     {"base_seed", base_seed},
                     {"reduced", reduced}};
    if (include_raw) j["raw"] = raw;
    return j;
}

nlohmann::json RunReport::to_json(bool include_raw) const {
    return {{"target", target},
            {"mode", mode == StreamMode::SignedT1 ? "signed-t1" : "unsigned-all"},
            {"k", k},
            {"m_budget", m_budget},
            {"hints", {{"m", hints.m}, {"t", hints.t}, {"delta_e", hints.delta_e}}},
            {"light", light.to_json(include_raw)},
            {"heavy", heavy.to_json(include_raw)},
            {"heavy_scale", heavy_scale},
            {"reduced_light", reduced_light},
            {"reduced_heavy", reduced_heavy},
            {"combined", combined}};
}

nlohmann::json BalanceReport::to_json(bool include_raw) const {
    return {{"balance", balance},
            {"t1", r1.to_json(include_raw)},
            {"t3", r3.to_json(include_raw)},
            {"t_all", r_total.to_json(include_raw)}};
}

nlohmann::json ClassicalBalanceReport::to_json(bool include_raw) const {
    return {{"balance", balance},
            {"reduced_bal", reduced_bal},
            {"reduced_unbal", reduced_unbal},
            {"bal", bal.to_json(include_raw)},
            {"unbal", unbal.to_json(include_raw)}};
}

}  // namespace sigtri
