#include "seal/experiment.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "seal/error.hpp"

namespace seal {

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Cell {
    Strategy strategy;
    double sweep_value = 0.0;  // 0 when no sweep axis
    int64_t seed_val = 0;
    int64_t seed_init = 0;
};

uint64_t cell_seed(const Cell& cell, ExperimentPlan::Sweep axis) {
    uint64_t h = mix64(static_cast<uint64_t>(cell.seed_val) + 0x51ED270B0B10ULL);
    h = hash_combine(h, static_cast<uint64_t>(cell.seed_init));
    h = hash_combine(h, static_cast<uint64_t>(cell.strategy));
    h = hash_combine(h, static_cast<uint64_t>(axis));
    h = hash_combine(h, std::bit_cast<uint64_t>(cell.sweep_value));
    return h;
}

GraphBundle materialize_bundle(const ExperimentPlan& plan) {
    if (plan.bundle_dir) {
        std::vector<std::string> warnings;
        GraphBundle b = load_bundle(*plan.bundle_dir, &warnings);
        for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        return b;
    }
    if (plan.synthetic) {
        const SyntheticSpec& s = *plan.synthetic;
        return generate_synthetic(s.nodes, s.classes, s.features, s.edge_prob_in, s.edge_prob_out,
                                  s.feature_signal, s.seed);
    }
    throw Error("plan: neither a bundle directory nor a synthetic spec given");
}

}  // namespace

void ExperimentPlan::validate() const {
    if (!bundle_dir && !synthetic) throw Error("plan: need a bundle or a synthetic spec");
    if (strategies.empty()) throw Error("plan: no strategies");
    if (val_seeds.empty() || init_seeds.empty()) throw Error("plan: seed lists must be nonempty");
    if (jobs < 1) throw Error("plan: jobs must be >= 1");
    if (sweep != Sweep::none) {
        if (sweep_values.empty()) throw Error("plan: sweep axis without values");
        for (double v : sweep_values) {
            if (sweep == Sweep::delta && !(v > 0.0 && v <= 1.0))
                throw Error("plan: delta sweep value out of (0, 1]");
            if (sweep == Sweep::alpha && v < 0.0) throw Error("plan: alpha sweep value < 0");
        }
    }
    base_config.validate();
}

RowAggregate aggregate_rows(std::span<const ResultsRow> rows) {
    if (rows.empty()) throw Error("aggregate: empty input");
    std::vector<double> micro, macro;
    micro.reserve(rows.size());
    macro.reserve(rows.size());
    for (const auto& r : rows) {
        micro.push_back(r.micro_f1);
        macro.push_back(r.macro_f1);
    }
    return {aggregate_values(micro), aggregate_values(macro), static_cast<int>(rows.size())};
}

void emit_results(const std::filesystem::path& file, std::span<const ResultsRow> rows) {
    std::ofstream out(file);
    if (!out.good()) throw Error("cannot write " + file.string());
    out << "strategy,dataset,delta,alpha,seed_val,seed_init,num_labels,micro_f1,macro_f1,"
           "wall_seconds\n";
    for (const auto& r : rows)
        out << r.strategy << ',' << r.dataset << ',' << fmt_real(r.delta) << ','
            << fmt_real(r.alpha) << ',' << r.seed_val << ',' << r.seed_init << ',' << r.num_labels
            << ',' << fmt_real(r.micro_f1) << ',' << fmt_real(r.macro_f1) << ','
            << fmt_real(r.wall_seconds) << '\n';
}

void emit_curve(const std::filesystem::path& file, std::span<const CurveRow> rows) {
    std::ofstream out(file);
    if (!out.good()) throw Error("cannot write " + file.string());
    out << "strategy,dataset,delta,alpha,seed_val,seed_init,num_labels,micro_f1,macro_f1\n";
    for (const auto& r : rows)
        out << r.strategy << ',' << r.dataset << ',' << fmt_real(r.delta) << ','
            << fmt_real(r.alpha) << ',' << r.seed_val << ',' << r.seed_init << ',' << r.num_labels
            << ',' << fmt_real(r.micro_f1) << ',' << fmt_real(r.macro_f1) << '\n';
}

PlanOutcome run_plan(const ExperimentPlan& plan) {
    plan.validate();

    const GraphBundle bundle = materialize_bundle(plan);
    const NormalizedAdjacency adj = normalize_adjacency(bundle);

    std::vector<Cell> cells;
    const std::vector<double> sweep_values =
        plan.sweep == ExperimentPlan::Sweep::none ? std::vector<double>{0.0} : plan.sweep_values;
    for (Strategy s : plan.strategies)
        for (double v : sweep_values)
            for (int64_t sv : plan.val_seeds)
                for (int64_t si : plan.init_seeds) cells.push_back({s, v, sv, si});

    struct CellOutcome {
        bool ok = false;
        ResultsRow row;
        std::vector<CurveRow> curves;
        std::string error;
    };
    std::vector<CellOutcome> outcomes(cells.size());

    auto run_cell = [&](size_t idx) {
        const Cell& cell = cells[idx];
        CellOutcome& out = outcomes[idx];
        try {
            TrainingConfig config = plan.base_config;
            config.strategy = cell.strategy;
            if (plan.sweep == ExperimentPlan::Sweep::delta) config.delta = cell.sweep_value;
            if (plan.sweep == ExperimentPlan::Sweep::alpha) config.alpha = cell.sweep_value;
            config = apply_ablation(config);

            const SplitSpec splits =
                make_splits(bundle, plan.test_seed, cell.seed_val, cell.seed_init, plan.test_size,
                            plan.val_size, plan.per_class_init);
            RngStream rng(cell_seed(cell, plan.sweep));

            const auto t0 = std::chrono::steady_clock::now();
            const RunOutput run =
                run_active_loop(bundle, adj, splits, config, plan.curve_interval, rng);
            const auto t1 = std::chrono::steady_clock::now();

            out.row = {std::string(strategy_name(cell.strategy)),
                       bundle.name,
                       config.delta,
                       config.alpha,
                       cell.seed_val,
                       cell.seed_init,
                       static_cast<int>(run.pools.labeled.size()),
                       run.micro_f1,
                       run.macro_f1,
                       std::chrono::duration<double>(t1 - t0).count()};
            for (const auto& snap : run.log.snapshots)
                out.curves.push_back({out.row.strategy, out.row.dataset, config.delta, config.alpha,
                                      cell.seed_val, cell.seed_init, snap.num_labels, snap.micro_f1,
                                      snap.macro_f1});
            out.ok = true;
        } catch (const std::exception& e) {
            out.error = std::string(strategy_name(cell.strategy)) + " seed_val=" +
                        std::to_string(cell.seed_val) + " seed_init=" +
                        std::to_string(cell.seed_init) + ": " + e.what();
        }
    };

    const int workers = std::min<int>(plan.jobs, static_cast<int>(cells.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> threads;
        threads.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&] {
                while (true) {
                    const size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        for (auto& t : threads) t.join();
    }

    PlanOutcome outcome;
    for (const auto& o : outcomes) {
        if (o.ok) {
            outcome.results.push_back(o.row);
            outcome.curves.insert(outcome.curves.end(), o.curves.begin(), o.curves.end());
        } else {
            outcome.errors.push_back(o.error);
        }
    }
    outcome.exit_code = outcome.errors.empty() ? 0 : 1;

    std::filesystem::create_directories(plan.out_dir);
    emit_results(plan.out_dir / "results.csv", outcome.results);
    emit_curve(plan.out_dir / "curves.csv", outcome.curves);

    // Per-(strategy, delta, alpha) means over the seed grid.
    nlohmann::json summary;
    summary["dataset"] = bundle.name;
    summary["cells"] = nlohmann::json::array();
    for (Strategy s : plan.strategies)
        for (double v : sweep_values) {
            std::vector<ResultsRow> group;
            for (const auto& r : outcome.results) {
                const bool sweep_match =
                    plan.sweep == ExperimentPlan::Sweep::none ||
                    (plan.sweep == ExperimentPlan::Sweep::delta ? r.delta : r.alpha) == v;
                if (r.strategy == strategy_name(s) && sweep_match) group.push_back(r);
            }
            if (group.empty()) continue;
            const RowAggregate agg = aggregate_rows(group);
            nlohmann::json cell;
            cell["strategy"] = std::string(strategy_name(s));
            cell["delta"] = group.front().delta;
            cell["alpha"] = group.front().alpha;
            cell["n"] = agg.n;
            cell["micro_f1_mean"] = agg.micro.mean;
            cell["micro_f1_std"] = agg.micro.stddev;
            cell["macro_f1_mean"] = agg.macro.mean;
            cell["macro_f1_std"] = agg.macro.stddev;
            summary["cells"].push_back(cell);
        }
    summary["errors"] = outcome.errors;
    std::ofstream out(plan.out_dir / "summary.json");
    if (!out.good()) throw Error("cannot write summary.json");
    out << summary.dump(2) << "\n";

    return outcome;
}

std::vector<TimingRow> timing_sweep(std::span<const int> sizes, const SyntheticSpec& base,
                                    const TrainingConfig& config, int queries,
                                    const std::filesystem::path& out_csv) {
    if (sizes.empty()) throw Error("timing: no sizes");
    for (size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw Error("timing: sizes must ascend");

    std::vector<TimingRow> rows;
    for (int n : sizes) {
        const double scale = static_cast<double>(sizes.front()) / n;
        const GraphBundle bundle =
            generate_synthetic(n, base.classes, base.features, base.edge_prob_in * scale,
                               base.edge_prob_out * scale, base.feature_signal, base.seed);
        const NormalizedAdjacency adj = normalize_adjacency(bundle);
        const SplitSpec splits = make_splits(bundle, 0, 1, 2, n / 5, n / 10, 4);

        TrainingConfig cfg = config;
        cfg.budget = queries;
        RngStream rng(mix64(static_cast<uint64_t>(n)));

        const auto t0 = std::chrono::steady_clock::now();
        run_active_loop(bundle, adj, splits, cfg, -1, rng);
        const auto t1 = std::chrono::steady_clock::now();
        rows.push_back({n, static_cast<int64_t>(bundle.edges.size()), queries,
                        std::chrono::duration<double>(t1 - t0).count()});
    }

    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out.good()) throw Error("cannot write " + out_csv.string());
        out << "# timing over synthetic block-model graphs standing in for real subgraphs;\n"
               "# edge probabilities scale with 1/nodes so edges stay proportional to nodes.\n"
               "# wall_seconds covers the selection loop and final evaluation, not data setup.\n";
        out << "nodes,edges,queries,wall_seconds\n";
        for (const auto& r : rows)
            out << r.nodes << ',' << r.edges << ',' << r.queries << ',' << fmt_real(r.wall_seconds)
                << '\n';
    }
    return rows;
}

double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("linear_fit_r2: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error("linear_fit_r2: degenerate x values");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / n;
    for (size_t i = 0; i < x.size(); ++i) {
        const double fit = slope * x[i] + intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    if (ss_tot == 0.0) return 1.0;
    return 1.0 - ss_res / ss_tot;
}

}  // namespace seal
