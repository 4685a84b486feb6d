#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seal/error.hpp"
#include "seal/experiment.hpp"
#include "seal/gradient_gate.hpp"
#include "seal/graph.hpp"

namespace {

std::vector<int64_t> parse_seed_list(const std::string& csv) {
    std::vector<int64_t> out;
    std::string tok;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!tok.empty()) out.push_back(std::stoll(tok));
            tok.clear();
        } else {
            tok += c;
        }
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& csv) {
    std::vector<double> out;
    std::string tok;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!tok.empty()) out.push_back(std::stod(tok));
            tok.clear();
        } else {
            tok += c;
        }
    }
    return out;
}

seal::SyntheticSpec parse_synthetic(const std::string& csv) {
    const std::vector<double> v = parse_real_list(csv);
    if (v.size() != 6 && v.size() != 7)
        throw seal::Error("--synthetic expects N,K,M,pin,pout,signal[,seed]");
    seal::SyntheticSpec s;
    s.nodes = static_cast<int>(v[0]);
    s.classes = static_cast<int>(v[1]);
    s.features = static_cast<int>(v[2]);
    s.edge_prob_in = v[3];
    s.edge_prob_out = v[4];
    s.feature_signal = v[5];
    s.seed = v.size() == 7 ? static_cast<uint64_t>(v[6]) : 1;
    return s;
}

uint64_t master_seed() {
    const char* env = std::getenv("SEAL_SEED");
    return env != nullptr ? std::strtoull(env, nullptr, 10) : 0;
}

std::vector<int64_t> default_seeds(uint64_t master, int64_t offset) {
    std::vector<int64_t> out;
    for (int i = 0; i < 10; ++i) out.push_back(static_cast<int64_t>(master) * 100 + offset + i);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    // Cell-level parallelism owns the cores; keep BLAS single threaded.
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"SEAL: semisupervised adversarial active learning on attributed graphs"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run an experiment grid and write CSV/JSON results");
    std::string bundle_dir, synthetic_csv, strategy_csv = "seal", sweep_axis = "none";
    std::string val_seed_csv, init_seed_csv, sweep_values_csv, out_dir;
    seal::TrainingConfig config;
    int budget = -1, curve_interval = -1, jobs = 1;
    int test_size = 1000, val_size = 500, per_class_init = 4;
    uint64_t test_seed = master_seed();
    run->add_option("--bundle", bundle_dir, "Bundle directory (meta.json, edges.tsv, ...)");
    run->add_option("--synthetic", synthetic_csv, "Synthetic spec: N,K,M,pin,pout,signal[,seed]");
    run->add_option("--strategy", strategy_csv,
                    "Comma list of seal,seal-ad,seal-fm,seal-sal,seal-pt,random,entropy");
    run->add_option("--delta", config.delta, "Pool-tuning confidence threshold");
    run->add_option("--alpha", config.alpha, "Supervised/unsupervised balance of the discriminator");
    run->add_option("--budget", budget, "Labeling budget (default 20*K - initial labels)");
    run->add_option("--val-seeds", val_seed_csv, "Comma list of validation-split seeds");
    run->add_option("--init-seeds", init_seed_csv, "Comma list of initial-label seeds");
    run->add_option("--sweep", sweep_axis, "Sweep axis: none|delta|alpha");
    run->add_option("--sweep-values", sweep_values_csv, "Comma list overriding the sweep grid");
    run->add_option("--curve-interval", curve_interval,
                    "Queries between learning-curve snapshots (default: start and end only)");
    run->add_option("--jobs", jobs, "Concurrent grid cells");
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--test-size", test_size, "Test set size");
    run->add_option("--val-size", val_size, "Validation set size");
    run->add_option("--per-class-init", per_class_init, "Initial labeled nodes per class");
    run->add_option("--test-seed", test_seed, "Seed of the fixed test split (default SEAL_SEED)");
    run->add_option("--pretrain", config.pretrain_epochs, "Pre-training outer iterations");
    run->add_option("--ng", config.n_g, "Embedder epochs per outer iteration");
    run->add_option("--nd", config.n_d, "Discriminator epochs per outer iteration");
    run->add_option("--patience", config.patience, "Early-stopping patience / stabilization epochs");
    run->add_option("--final-epochs", config.final_train_epochs, "Prediction-phase epoch cap");

    // --- gen-synthetic ---
    auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic bundle and save it");
    seal::SyntheticSpec gen_spec;
    std::string gen_out;
    gen->add_option("--nodes", gen_spec.nodes, "Node count");
    gen->add_option("--classes", gen_spec.classes, "Class count");
    gen->add_option("--features", gen_spec.features, "Feature count");
    gen->add_option("--pin", gen_spec.edge_prob_in, "Within-class edge probability");
    gen->add_option("--pout", gen_spec.edge_prob_out, "Cross-class edge probability");
    gen->add_option("--signal", gen_spec.feature_signal, "Per-column activation probability");
    gen->add_option("--seed", gen_spec.seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    // --- timing ---
    auto* timing = app.add_subcommand("timing", "Wall-time scaling over synthetic graph sizes");
    std::string sizes_csv = "1000,3000,5000", timing_out;
    int timing_queries = 48;
    seal::SyntheticSpec timing_spec{1000, 3, 100, 0.02, 0.002, 0.3, 1};
    seal::TrainingConfig timing_config;
    timing->add_option("--sizes", sizes_csv, "Ascending node counts");
    timing->add_option("--queries", timing_queries, "Queries per run");
    timing->add_option("--pretrain", timing_config.pretrain_epochs, "Pre-training iterations");
    timing->add_option("--out", timing_out, "Output directory")->required();

    // --- check-gradients ---
    auto* check = app.add_subcommand("check-gradients",
                                     "Verify every hand-derived gradient by finite differences");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            seal::ExperimentPlan plan;
            if (!bundle_dir.empty()) plan.bundle_dir = bundle_dir;
            if (!synthetic_csv.empty()) plan.synthetic = parse_synthetic(synthetic_csv);
            for (const auto& name : CLI::detail::split(strategy_csv, ','))
                plan.strategies.push_back(seal::parse_strategy(name));
            plan.val_seeds = val_seed_csv.empty() ? default_seeds(master_seed(), 0)
                                                  : parse_seed_list(val_seed_csv);
            plan.init_seeds = init_seed_csv.empty() ? default_seeds(master_seed(), 50)
                                                    : parse_seed_list(init_seed_csv);
            if (sweep_axis == "delta") {
                plan.sweep = seal::ExperimentPlan::Sweep::delta;
                plan.sweep_values = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
            } else if (sweep_axis == "alpha") {
                plan.sweep = seal::ExperimentPlan::Sweep::alpha;
                plan.sweep_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
            } else if (sweep_axis != "none") {
                throw seal::Error("--sweep must be none, delta, or alpha");
            }
            if (!sweep_values_csv.empty()) plan.sweep_values = parse_real_list(sweep_values_csv);
            config.budget = budget;
            plan.base_config = config;
            plan.test_size = test_size;
            plan.val_size = val_size;
            plan.per_class_init = per_class_init;
            plan.test_seed = test_seed;
            plan.curve_interval = curve_interval;
            plan.jobs = jobs;
            plan.out_dir = out_dir;

            const seal::PlanOutcome outcome = seal::run_plan(plan);
            std::printf("wrote %zu result rows to %s\n", outcome.results.size(),
                        (plan.out_dir / "results.csv").c_str());
            for (const auto& err : outcome.errors) std::fprintf(stderr, "cell failed: %s\n", err.c_str());
            return outcome.exit_code;
        }
        if (*gen) {
            const seal::GraphBundle bundle = seal::generate_synthetic(
                gen_spec.nodes, gen_spec.classes, gen_spec.features, gen_spec.edge_prob_in,
                gen_spec.edge_prob_out, gen_spec.feature_signal, gen_spec.seed);
            seal::save_bundle(bundle, gen_out);
            std::printf("wrote bundle '%s' (%d nodes, %zu edges) to %s\n", bundle.name.c_str(),
                        bundle.num_nodes, bundle.edges.size(), gen_out.c_str());
            return 0;
        }
        if (*timing) {
            std::vector<int> sizes;
            for (int64_t v : parse_seed_list(sizes_csv)) sizes.push_back(static_cast<int>(v));
            std::filesystem::create_directories(timing_out);
            const auto rows = seal::timing_sweep(sizes, timing_spec, timing_config, timing_queries,
                                                 std::filesystem::path(timing_out) / "timing.csv");
            std::vector<double> xs, ys;
            for (const auto& r : rows) {
                std::printf("nodes=%d edges=%lld wall_seconds=%.3f\n", r.nodes,
                            static_cast<long long>(r.edges), r.wall_seconds);
                xs.push_back(static_cast<double>(r.nodes));
                ys.push_back(r.wall_seconds);
            }
            if (rows.size() >= 2)
                std::printf("linear fit R^2 = %.4f\n", seal::linear_fit_r2(xs, ys));
            return 0;
        }
        if (*check) {
            const seal::GradientGateReport report = seal::run_gradient_gate();
            for (const auto& e : report.entries)
                std::printf("%-28s max relative error %.3e  [%s]\n", e.name.c_str(),
                            e.max_rel_error, e.max_rel_error < report.threshold ? "ok" : "FAIL");
            std::printf("checked in %.2f s, threshold %.0e: %s\n", report.seconds, report.threshold,
                        report.pass ? "PASS" : "FAIL");
            return report.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
