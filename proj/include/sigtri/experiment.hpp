#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigtri/orchestrator.hpp"
#include "sigtri/signed_graph.hpp"

namespace sigtri {

// Grid protocol: random signed instances per (n, p_e, p_plus) cell, exact
// ground truth per instance, then both balance estimators with exact hints.
struct ExperimentSpec {
    std::vector<Vertex> sizes = {10, 20, 30, 40, 50};
    std::vector<double> edge_probs = {0.5, 0.75};
    std::vector<double> plus_probs = {0.25, 0.5, 0.75};
    std::size_t instances_per_cell = 5;
    double eps = 0.1;
    double delta = 0.1;
    std::uint64_t master_seed = 1;

    // classical estimator sampling rates
    double classical_p_e = 0.7;
    double classical_p_v = 0.7;

    // Desk-scale repetition caps. Worker counts per side and target are
    // limited to ops_budget/m so that every row costs roughly the same, and
    // never exceed max_runs_per_side. Downscaling details land in the
    // manifest.
    double ops_budget = 1.2e8;
    std::size_t max_runs_per_side = std::numeric_limits<std::size_t>::max();
    unsigned max_parallel = 1;

    nlohmann::json to_json() const;
};

struct ExperimentRow {
    Vertex n = 0;
    double p_e = 0.0;
    double p_plus = 0.0;
    std::size_t instance = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t order_seed = 0;

    std::size_t e_plus = 0;
    std::size_t e_minus = 0;
    std::uint64_t delta_e = 0;
    std::uint64_t delta_v = 0;
    TriangleCounts counts;
    double balance_true = 0.0;
    bool undefined = false;  // no triangles: estimates flagged, row kept

    double balance_classical = 0.0;
    double balance_hybrid = 0.0;
    double rel_err_classical = 0.0;
    double rel_err_hybrid = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    nlohmann::json manifest;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Wide table, one row per instance, columns following the results-table
// schema plus identifiers and per-row relative errors.
std::string experiment_table_csv(const ExperimentResult& result);

// Long format for distribution plots: one row per (instance, algorithm).
std::string experiment_long_csv(const ExperimentResult& result);

// %.12g, shared by the CSV writers.
std::string format_g12(double value);

}  // namespace sigtri
