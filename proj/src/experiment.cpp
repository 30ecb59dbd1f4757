#include "sigtri/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sigtri/sampling.hpp"
#include "sigtri/stream.hpp"

namespace sigtri {

std::string format_g12(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

nlohmann::json ExperimentSpec::to_json() const {
    return {{"sizes", sizes},
            {"edge_probs", edge_probs},
            {"plus_probs", plus_probs},
            {"instances_per_cell", instances_per_cell},
            {"eps", eps},
            {"delta", delta},
            {"master_seed", master_seed},
            {"classical_p_e", classical_p_e},
            {"classical_p_v", classical_p_v},
            {"ops_budget", ops_budget},
            {"max_runs_per_side", max_runs_per_side},
            {"max_parallel", max_parallel}};
}

namespace {

std::size_t side_cap(const ExperimentSpec& spec, std::size_t stream_len) {
    double by_budget = spec.ops_budget / std::max<double>(1.0, static_cast<double>(stream_len));
    auto cap = static_cast<std::size_t>(std::max(1.0, by_budget));
    return std::min(cap, spec.max_runs_per_side);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result;
    nlohmann::json row_manifests = nlohmann::json::array();

    std::size_t row_index = 0;
    for (Vertex n : spec.sizes) {
        for (double p_e : spec.edge_probs) {
            for (double p_plus : spec.plus_probs) {
                for (std::size_t inst = 0; inst < spec.instances_per_cell; ++inst, ++row_index) {
                    std::uint64_t row_seed = split_seed(spec.master_seed, row_index);

                    ExperimentRow row;
                    row.n = n;
                    row.p_e = p_e;
                    row.p_plus = p_plus;
                    row.instance = inst;
                    row.graph_seed = split_seed(row_seed, 0);
                    row.order_seed = split_seed(row_seed, 1);

                    auto graph = generate_er_signed(n, p_e, p_plus, row.graph_seed);
                    auto stream = to_stream(graph, row.order_seed);
                    auto params = graph_params(graph);
                    row.counts = count_triangles_exact(graph);
                    row.e_plus = graph.positive_edge_count();
                    row.e_minus = graph.edge_count() - row.e_plus;
                    row.delta_e = params.delta_e;
                    row.delta_v = params.delta_v;

                    nlohmann::json row_manifest{{"row", row_index},
                                                {"n", n},
                                                {"p_e", p_e},
                                                {"p_plus", p_plus},
                                                {"instance", inst},
                                                {"graph_seed", row.graph_seed},
                                                {"order_seed", row.order_seed}};

                    if (row.counts.total() == 0) {
                        row.undefined = true;
                        row_manifest["undefined_balance"] = true;
                        result.rows.push_back(row);
                        row_manifests.push_back(std::move(row_manifest));
                        continue;
                    }
                    row.balance_true = balance_exact(row.counts);

                    WorkerPool pool;
                    pool.max_parallel = spec.max_parallel;
                    pool.allow_downscale = true;
                    pool.light_workers = pool.heavy_workers = side_cap(spec, stream.size());

                    auto hints = exact_balance_hints(stream);
                    auto hybrid = balance_hybrid(stream, spec.eps, spec.delta, hints,
                                                 split_seed(row_seed, 2), pool);
                    auto classical = balance_classical_mom(stream, spec.eps, spec.delta,
                                                           spec.classical_p_e, spec.classical_p_v,
                                                           split_seed(row_seed, 3), pool);

                    row.balance_hybrid = hybrid.balance;
                    row.balance_classical = classical.balance;
                    row.rel_err_hybrid = std::abs(hybrid.balance - row.balance_true) / row.balance_true;
                    row.rel_err_classical =
                        std::abs(classical.balance - row.balance_true) / row.balance_true;

                    row_manifest["pool_cap_per_side"] = pool.light_workers;
                    row_manifest["hybrid"] = hybrid.to_json(false);
                    row_manifest["classical"] = classical.to_json(false);
                    result.rows.push_back(row);
                    row_manifests.push_back(std::move(row_manifest));
                }
            }
        }
    }

    result.manifest = {{"spec", spec.to_json()}, {"rows", std::move(row_manifests)}};
    return result;
}

std::string experiment_table_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "n,p_e,p_plus,instance,e_plus,e_minus,delta_e,delta_v,"
           "t0,t1,t2,t3,balance,balance_classical,balance_hybrid,"
           "rel_err_classical,rel_err_hybrid,undefined\n";
    for (const auto& r : result.rows) {
        out << r.n << ',' << format_g12(r.p_e) << ',' << format_g12(r.p_plus) << ',' << r.instance
            << ',' << r.e_plus << ',' << r.e_minus << ',' << r.delta_e << ',' << r.delta_v << ','
            << r.counts.t0 << ',' << r.counts.t1 << ',' << r.counts.t2 << ',' << r.counts.t3 << ',';
        if (r.undefined) {
            out << ",,,,,1\n";
            continue;
        }
        out << format_g12(r.balance_true) << ',' << format_g12(r.balance_classical) << ','
            << format_g12(r.balance_hybrid) << ',' << format_g12(r.rel_err_classical) << ','
            << format_g12(r.rel_err_hybrid) << ",0\n";
    }
    return out.str();
}

std::string experiment_long_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "n,p_e,p_plus,instance,algorithm,relative_error\n";
    for (const auto& r : result.rows) {
        if (r.undefined) continue;
        out << r.n << ',' << format_g12(r.p_e) << ',' << format_g12(r.p_plus) << ',' << r.instance
            << ",classical," << format_g12(r.rel_err_classical) << '\n';
        out << r.n << ',' << format_g12(r.p_e) << ',' << format_g12(r.p_plus) << ',' << r.instance
            << ",hybrid," << format_g12(r.rel_err_hybrid) << '\n';
    }
    return out.str();
}

}  // namespace sigtri
