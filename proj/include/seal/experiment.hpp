#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seal/engine.hpp"
#include "seal/graph.hpp"
#include "seal/metrics.hpp"

namespace seal {

struct SyntheticSpec {
    int nodes = 400;
    int classes = 3;
    int features = 60;
    double edge_prob_in = 0.05;
    double edge_prob_out = 0.005;
    double feature_signal = 0.3;
    uint64_t seed = 1;
};

struct ExperimentPlan {
    std::optional<std::filesystem::path> bundle_dir;
    std::optional<SyntheticSpec> synthetic;
    std::vector<Strategy> strategies;
    std::vector<int64_t> val_seeds;
    std::vector<int64_t> init_seeds;
    enum class Sweep { none, delta, alpha };
    Sweep sweep = Sweep::none;
    std::vector<double> sweep_values;  // ignored when sweep == none
    TrainingConfig base_config;
    int test_size = 1000;
    int val_size = 500;
    int per_class_init = 4;
    uint64_t test_seed = 0;
    int curve_interval = -1;  // -1: snapshots at start and end only
    int jobs = 1;
    std::filesystem::path out_dir;

    void validate() const;
};

struct ResultsRow {
    std::string strategy;
    std::string dataset;
    double delta = 0.0;
    double alpha = 0.0;
    int64_t seed_val = 0;
    int64_t seed_init = 0;
    int num_labels = 0;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
    double wall_seconds = 0.0;
};

struct CurveRow {
    std::string strategy;
    std::string dataset;
    double delta = 0.0;
    double alpha = 0.0;
    int64_t seed_val = 0;
    int64_t seed_init = 0;
    int num_labels = 0;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
};

struct RowAggregate {
    Aggregate micro;
    Aggregate macro;
    int n = 0;
};
RowAggregate aggregate_rows(std::span<const ResultsRow> rows);

struct PlanOutcome {
    std::vector<ResultsRow> results;
    std::vector<CurveRow> curves;
    std::vector<std::string> errors;  // one message per failed cell
    int exit_code = 0;
};

/// Executes every (strategy x sweep value x seed_val x seed_init) cell and
/// writes results.csv, curves.csv and summary.json under plan.out_dir.
/// Cells run concurrently up to plan.jobs; per-cell rng streams are derived
/// from (seed_val, seed_init, strategy, sweep value) so parallelism never
/// changes results. Failed cells are recorded and reflected in exit_code
/// while the remaining results are preserved.
PlanOutcome run_plan(const ExperimentPlan& plan);

void emit_results(const std::filesystem::path& file, std::span<const ResultsRow> rows);
void emit_curve(const std::filesystem::path& file, std::span<const CurveRow> rows);

struct TimingRow {
    int nodes = 0;
    int64_t edges = 0;
    int queries = 0;
    double wall_seconds = 0.0;
};

/// One fixed-query-count run per graph size; edge probabilities scale with
/// 1/size so the expected edge count stays proportional to the node count.
/// Writes timing.csv (with a header documenting the synthetic substitution)
/// when out_csv is nonempty.
std::vector<TimingRow> timing_sweep(std::span<const int> sizes, const SyntheticSpec& base,
                                    const TrainingConfig& config, int queries,
                                    const std::filesystem::path& out_csv);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y);

}  // namespace seal
