#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sigtri/analytics.hpp"
#include "sigtri/estimators.hpp"
#include "sigtri/experiment.hpp"
#include "sigtri/orchestrator.hpp"
#include "sigtri/sampling.hpp"
#include "sigtri/signed_graph.hpp"
#include "sigtri/stream.hpp"

namespace {

using namespace sigtri;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUndefinedBalance = 4;

std::uint64_t master_seed_or_env(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SIGTRI_MASTER_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

unsigned default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct CommonEstimateOpts {
    std::string in_path;
    std::string mode = "hybrid";
    double eps = 0.1;
    double delta = 0.1;
    std::size_t k = 0;
    std::vector<double> rates;
    bool exact_hints = false;
    std::vector<double> hints;
    std::optional<std::uint64_t> seed;
    unsigned workers = default_workers();
    std::size_t max_runs = 0;  // 0 = unlimited
    bool downscale = false;
    std::string out_format = "json";
    std::string manifest_path;
    bool hint_sensitivity = false;
};

void add_common_estimate_flags(CLI::App* cmd, CommonEstimateOpts& opts, bool with_mode) {
    cmd->add_option("--in", opts.in_path, "input stream file")->required();
    if (with_mode)
        cmd->add_option("--mode", opts.mode, "estimator family")
            ->check(CLI::IsMember({"classical", "hybrid", "both"}));
    cmd->add_option("--eps", opts.eps, "relative accuracy target");
    cmd->add_option("--delta", opts.delta, "failure probability target");
    cmd->add_option("--k", opts.k, "threshold override (default: from hints)");
    cmd->add_option("--rates", opts.rates, "p_E,p_V sampling rates (classical mode)")
        ->delimiter(',')
        ->expected(2);
    cmd->add_flag("--exact-hints", opts.exact_hints, "compute m, T, Delta_E hints from the input");
    cmd->add_option("--hints", opts.hints, "m,T,Delta_E parameter hints")->delimiter(',')->expected(3);
    cmd->add_option("--seed", opts.seed, "master seed (also env SIGTRI_MASTER_SEED)");
    cmd->add_option("--workers", opts.workers, "max concurrent workers");
    cmd->add_option("--max-runs", opts.max_runs, "available workers per estimator side");
    cmd->add_flag("--downscale", opts.downscale, "permit capping an infeasible repetition plan");
    cmd->add_option("--out", opts.out_format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--manifest", opts.manifest_path, "write a replayable run manifest (JSON)");
    cmd->add_flag("--hint-sensitivity", opts.hint_sensitivity,
                  "also run with hints halved and doubled and report the spread");
}

WorkerPool make_pool(const CommonEstimateOpts& opts) {
    WorkerPool pool;
    pool.max_parallel = opts.workers;
    pool.allow_downscale = opts.downscale;
    if (opts.max_runs > 0) pool.light_workers = pool.heavy_workers = opts.max_runs;
    return pool;
}

Hints hints_for_stream(const CommonEstimateOpts& opts, const SignedEdgeStream& s,
                       double exact_target_count) {
    if (opts.exact_hints) {
        Hints h;
        auto params = graph_params(to_graph(s));
        h.m = std::max<double>(1.0, static_cast<double>(s.size()));
        h.t = std::max(1.0, exact_target_count);
        h.delta_e = std::max(1.0, static_cast<double>(params.delta_e));
        return h;
    }
    if (opts.hints.size() == 3) return Hints{opts.hints[0], opts.hints[1], opts.hints[2]};
    throw CLI::ValidationError("--exact-hints or --hints m,T,dE is required in hybrid mode");
}

// Target mapping shared by estimate subcommands: the stream transform and
// whether the resulting count is read off sign-blind.
struct TargetView {
    SignedEdgeStream stream;
    bool unsigned_mode;
};

TargetView view_for_target(const SignedEdgeStream& s, const std::string& target) {
    if (target == "t1") return {s, false};
    if (target == "t2") return {flip_signs(s), false};
    if (target == "t3") return {filter_positive(s), true};
    if (target == "t0") return {filter_positive(flip_signs(s)), true};
    if (target == "all") return {strip_signs(s), true};
    throw CLI::ValidationError("unknown target: " + target);
}

double exact_count_for_target(const SignedGraph& g, const std::string& target) {
    auto counts = count_triangles_exact(g);
    if (target == "t0") return static_cast<double>(counts.t0);
    if (target == "t1") return static_cast<double>(counts.t1);
    if (target == "t2") return static_cast<double>(counts.t2);
    if (target == "t3") return static_cast<double>(counts.t3);
    return static_cast<double>(counts.total());
}

int cmd_generate(Vertex n, double p_edge, double p_plus, std::optional<std::uint64_t> seed,
                 const std::string& order, std::uint64_t order_seed, const std::string& out_file) {
    auto g = generate_er_signed(n, p_edge, p_plus, master_seed_or_env(seed));
    auto s = order == "shuffle" ? to_stream(g, order_seed) : to_stream_canonical(g);
    save_stream(s, out_file);
    std::cerr << "wrote " << out_file << ": n=" << s.n << " m=" << s.size() << "\n";
    return kExitOk;
}

int cmd_count_exact(const std::string& in_path, const std::string& out_format) {
    auto s = load_stream(in_path);
    auto g = to_graph(s);
    auto counts = count_triangles_exact(g);
    auto params = graph_params(g);
    bool undefined = counts.total() == 0;

    if (out_format == "csv") {
        std::cout << "n,m,e_plus,e_minus,delta_e,delta_v,t0,t1,t2,t3,total,balance\n";
        std::cout << g.vertex_count() << ',' << g.edge_count() << ',' << g.positive_edge_count()
                  << ',' << g.edge_count() - g.positive_edge_count() << ',' << params.delta_e << ','
                  << params.delta_v << ',' << counts.t0 << ',' << counts.t1 << ',' << counts.t2
                  << ',' << counts.t3 << ',' << counts.total() << ','
                  << (undefined ? "" : format_g12(balance_exact(counts))) << '\n';
    } else {
        nlohmann::json j{{"n", g.vertex_count()},
                         {"m", g.edge_count()},
                         {"e_plus", g.positive_edge_count()},
                         {"e_minus", g.edge_count() - g.positive_edge_count()},
                         {"delta_e", params.delta_e},
                         {"delta_v", params.delta_v},
                         {"t0", counts.t0},
                         {"t1", counts.t1},
                         {"t2", counts.t2},
                         {"t3", counts.t3},
                         {"total", counts.total()},
                         {"balance", undefined ? nlohmann::json() : nlohmann::json(balance_exact(counts))}};
        std::cout << j.dump(2) << '\n';
    }
    return kExitOk;
}

nlohmann::json classical_count_estimate(const SignedEdgeStream& s, const std::string& target,
                                        const CommonEstimateOpts& opts, std::uint64_t seed,
                                        const WorkerPool& pool) {
    if (opts.rates.size() != 2)
        throw CLI::ValidationError("--rates pE,pV is required in classical mode");
    int j = target == "all" ? -1 : target[1] - '0';
    double n_eps_d = std::ceil(4.0 / (opts.eps * opts.eps));
    double n_delta_d = std::ceil(8.0 * std::log(1.0 / opts.delta));
    std::size_t n_eps = static_cast<std::size_t>(std::max(1.0, n_eps_d));
    std::size_t n_delta = static_cast<std::size_t>(std::max(1.0, n_delta_d));
    std::size_t cap = std::min(pool.heavy_workers, pool.light_workers);
    if (n_eps * n_delta > cap) {
        if (!pool.allow_downscale)
            throw InfeasiblePlanError("classical plan needs " + std::to_string(n_eps * n_delta) +
                                      " workers (use --max-runs/--downscale)");
        n_delta = std::min(n_delta, cap);
        n_eps = std::max<std::size_t>(1, cap / n_delta);
    }
    auto raws = run_distributed(n_eps * n_delta, seed, pool.max_parallel,
                                [&](std::size_t, std::uint64_t run_seed) {
                                    return j < 0 ? t_all_pure_classical(strip_signs(s), opts.rates[0],
                                                                        opts.rates[1], run_seed)
                                                 : tj_pure_classical(s, j, opts.rates[0],
                                                                     opts.rates[1], run_seed);
                                });
    double estimate = median_of_means(raws, n_eps, n_delta);
    return {{"mode", "classical"}, {"target", target},   {"estimate", estimate},
            {"n_eps", n_eps},      {"n_delta", n_delta}, {"base_seed", seed},
            {"rates", opts.rates}};
}

int cmd_estimate(const std::string& target, const CommonEstimateOpts& opts) {
    auto s = load_stream(opts.in_path);
    auto pool = make_pool(opts);
    std::uint64_t seed = master_seed_or_env(opts.seed);
    nlohmann::json out;

    if (opts.mode == "classical") {
        out = classical_count_estimate(s, target, opts, seed, pool);
    } else {
        auto view = view_for_target(s, target);
        auto hints = hints_for_stream(opts, view.stream, exact_count_for_target(to_graph(s), target));
        auto run = [&](Hints h, std::uint64_t run_seed) {
            return view.unsigned_mode
                       ? t_all_hybrid(view.stream, opts.eps, opts.delta, h, run_seed, pool, opts.k)
                       : t1_hybrid(view.stream, opts.eps, opts.delta, h, run_seed, pool, opts.k);
        };
        auto report = run(hints, seed);
        out = {{"mode", "hybrid"}, {"target", target}, {"estimate", report.combined},
               {"report", report.to_json(false)}};
        if (opts.hint_sensitivity) {
            Hints lo{hints.m / 2, hints.t / 2, hints.delta_e / 2};
            Hints hi{hints.m * 2, hints.t * 2, hints.delta_e * 2};
            out["sensitivity"] = {{"hints_halved", run(lo, split_seed(seed, 101)).combined},
                                  {"hints_doubled", run(hi, split_seed(seed, 102)).combined}};
        }
        if (!opts.manifest_path.empty())
            write_file(opts.manifest_path,
                       nlohmann::json{{"command", "estimate"},
                                      {"target", target},
                                      {"master_seed", seed},
                                      {"eps", opts.eps},
                                      {"delta", opts.delta},
                                      {"report", report.to_json(false)}}
                           .dump(2) + "\n");
    }

    if (opts.out_format == "csv") {
        std::cout << "target,mode,estimate\n"
                  << target << ',' << opts.mode << ',' << format_g12(out["estimate"].get<double>())
                  << '\n';
    } else {
        std::cout << out.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_balance(const CommonEstimateOpts& opts) {
    auto s = load_stream(opts.in_path);
    auto pool = make_pool(opts);
    std::uint64_t seed = master_seed_or_env(opts.seed);
    nlohmann::json out;
    nlohmann::json manifest{{"command", "balance"}, {"master_seed", seed},
                            {"eps", opts.eps},      {"delta", opts.delta}};

    if (opts.mode == "hybrid" || opts.mode == "both") {
        BalanceHints hints;
        if (opts.exact_hints) {
            hints = exact_balance_hints(s);
        } else if (opts.hints.size() == 3) {
            hints.t1 = hints.t3 = hints.total = Hints{opts.hints[0], opts.hints[1], opts.hints[2]};
        } else {
            throw CLI::ValidationError("--exact-hints or --hints m,T,dE is required in hybrid mode");
        }
        auto report = balance_hybrid(s, opts.eps, opts.delta, hints, split_seed(seed, 1), pool, opts.k);
        out["hybrid"] = {{"balance", report.balance}, {"report", report.to_json(false)}};
        manifest["hybrid"] = report.to_json(false);
        if (opts.hint_sensitivity) {
            auto scale = [](const BalanceHints& h, double f) {
                auto s1 = h;
                for (Hints* p : {&s1.t1, &s1.t3, &s1.total}) {
                    p->m *= f;
                    p->t *= f;
                    p->delta_e *= f;
                }
                return s1;
            };
            out["hybrid"]["sensitivity"] = {
                {"hints_halved",
                 balance_hybrid(s, opts.eps, opts.delta, scale(hints, 0.5), split_seed(seed, 101),
                                pool, opts.k)
                     .balance},
                {"hints_doubled",
                 balance_hybrid(s, opts.eps, opts.delta, scale(hints, 2.0), split_seed(seed, 102),
                                pool, opts.k)
                     .balance}};
        }
    }
    if (opts.mode == "classical" || opts.mode == "both") {
        if (opts.rates.size() != 2)
            throw CLI::ValidationError("--rates pE,pV is required in classical mode");
        auto report = balance_classical_mom(s, opts.eps, opts.delta, opts.rates[0], opts.rates[1],
                                            split_seed(seed, 2), pool);
        out["classical"] = {{"balance", report.balance}, {"report", report.to_json(false)}};
        manifest["classical"] = report.to_json(false);
    }
    if (!opts.manifest_path.empty()) write_file(opts.manifest_path, manifest.dump(2) + "\n");

    if (opts.out_format == "csv") {
        std::cout << "mode,balance\n";
        if (out.contains("classical"))
            std::cout << "classical," << format_g12(out["classical"]["balance"].get<double>()) << '\n';
        if (out.contains("hybrid"))
            std::cout << "hybrid," << format_g12(out["hybrid"]["balance"].get<double>()) << '\n';
    } else {
        std::cout << out.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_plan(double eps, double delta, const std::vector<double>& hints, std::size_t k,
             std::uint64_t n, double delta_v) {
    auto plan = repetition_plan(eps, delta, k, hints[0], hints[1], hints[2]);
    nlohmann::json out{{"plan", plan.to_json()}};
    if (n > 0 && delta_v > 0)
        out["space_model"] = space_model(n, hints[0], hints[1], hints[2], delta_v, eps, delta).to_json();
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_experiment(ExperimentSpec spec, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto result = run_experiment(spec);
    write_file(out_dir + "/table.csv", experiment_table_csv(result));
    write_file(out_dir + "/relative_errors_long.csv", experiment_long_csv(result));
    write_file(out_dir + "/manifest.json", result.manifest.dump(2) + "\n");

    std::vector<double> errs_c, errs_h;
    for (const auto& r : result.rows) {
        if (r.undefined) continue;
        errs_c.push_back(r.rel_err_classical);
        errs_h.push_back(r.rel_err_hybrid);
    }
    auto median = [](std::vector<double> v) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        return v[(v.size() - 1) / 2];
    };
    std::cout << "rows: " << result.rows.size() << " (defined: " << errs_c.size() << ")\n"
              << "median relative error: classical " << format_g12(median(errs_c)) << ", hybrid "
              << format_g12(median(errs_h)) << "\n"
              << "outputs in " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming signed-triangle counts and triangular balance"};
    app.require_subcommand(1);

    // generate
    Vertex gen_n = 30;
    double gen_pe = 0.75, gen_pp = 0.5;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_order = "canonical";
    std::uint64_t gen_order_seed = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write a random signed instance as a stream file");
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--p-edge", gen_pe, "edge probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--p-plus", gen_pp, "positive-sign probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--order", gen_order, "arrival order")->check(CLI::IsMember({"canonical", "shuffle"}));
    gen->add_option("--order-seed", gen_order_seed, "arrival-order seed (with --order shuffle)");
    gen->add_option("--out-file", gen_out, "output path")->required();

    // count-exact
    std::string count_in, count_format = "json";
    auto* count = app.add_subcommand("count-exact", "exact triangle counts and balance");
    count->add_option("--in", count_in, "input stream file")->required();
    count->add_option("--out", count_format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

    // estimate
    CommonEstimateOpts est_opts;
    std::string est_target = "t1";
    auto* est = app.add_subcommand("estimate", "streaming estimate of a triangle count");
    est->add_option("--target", est_target, "t0|t1|t2|t3|all")
        ->check(CLI::IsMember({"t0", "t1", "t2", "t3", "all"}));
    add_common_estimate_flags(est, est_opts, true);

    // balance
    CommonEstimateOpts bal_opts;
    auto* bal = app.add_subcommand("balance", "streaming estimate of the triangular balance index");
    add_common_estimate_flags(bal, bal_opts, true);

    // plan
    double plan_eps = 0.1, plan_delta = 0.1, plan_delta_v = 0.0;
    std::vector<double> plan_hints;
    std::size_t plan_k = 0;
    std::uint64_t plan_n = 0;
    auto* plan = app.add_subcommand("plan", "repetition counts and space model from hints");
    plan->add_option("--eps", plan_eps, "relative accuracy target");
    plan->add_option("--delta", plan_delta, "failure probability target");
    plan->add_option("--hints", plan_hints, "m,T,Delta_E hints")->delimiter(',')->expected(3)->required();
    plan->add_option("--k", plan_k, "threshold override");
    plan->add_option("--n", plan_n, "vertex count (enables the space model)");
    plan->add_option("--delta-v", plan_delta_v, "max triangles per vertex (enables the space model)");

    // experiment
    ExperimentSpec spec;
    spec.max_parallel = default_workers();
    std::optional<std::uint64_t> exp_seed;
    std::vector<double> exp_rates;
    std::string exp_out_dir = "experiment_out";
    std::vector<unsigned> exp_sizes;
    auto* exp = app.add_subcommand("experiment", "grid protocol over random signed instances");
    exp->add_option("--sizes", exp_sizes, "vertex counts")->delimiter(',');
    exp->add_option("--edge-probs", spec.edge_probs, "edge probabilities")->delimiter(',');
    exp->add_option("--plus-probs", spec.plus_probs, "positive-sign probabilities")->delimiter(',');
    exp->add_option("--instances", spec.instances_per_cell, "instances per cell");
    exp->add_option("--eps", spec.eps, "relative accuracy target");
    exp->add_option("--delta", spec.delta, "failure probability target");
    exp->add_option("--seed", exp_seed, "master seed");
    exp->add_option("--rates", exp_rates, "classical p_E,p_V")->delimiter(',')->expected(2);
    exp->add_option("--ops-budget", spec.ops_budget, "per-side work cap in edge visits");
    exp->add_option("--max-runs", spec.max_runs_per_side, "hard cap on runs per estimator side");
    exp->add_option("--workers", spec.max_parallel, "max concurrent workers");
    exp->add_option("--out-dir", exp_out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_n, gen_pe, gen_pp, gen_seed, gen_order, gen_order_seed, gen_out);
        if (count->parsed()) return cmd_count_exact(count_in, count_format);
        if (est->parsed()) return cmd_estimate(est_target, est_opts);
        if (bal->parsed()) return cmd_balance(bal_opts);
        if (plan->parsed()) return cmd_plan(plan_eps, plan_delta, plan_hints, plan_k, plan_n, plan_delta_v);
        if (exp->parsed()) {
            if (exp_seed) spec.master_seed = master_seed_or_env(exp_seed);
            else spec.master_seed = master_seed_or_env(std::nullopt);
            if (exp_rates.size() == 2) {
                spec.classical_p_e = exp_rates[0];
                spec.classical_p_v = exp_rates[1];
            }
            if (!exp_sizes.empty()) {
                spec.sizes.assign(exp_sizes.begin(), exp_sizes.end());
            }
            return cmd_experiment(spec, exp_out_dir);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitParse;
    } catch (const InfeasiblePlanError& e) {
        std::cerr << "infeasible plan: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const UndefinedBalanceError& e) {
        std::cerr << e.what() << "\n";
        return kExitUndefinedBalance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
