// bench: benchmark driver for the multi-start optimizers and the record-theory lab.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dmss/experiment.hpp"
#include "dmss/hasplid.hpp"
#include "json.hpp"

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return nlohmann::json::parse(is);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-start global optimization benchmarks"};
    app.require_subcommand(1);

    dmss::ExperimentConfig cfg;
    std::string algo = "rdmss";
    std::string out_dir = "bench_out";
    auto* run = app.add_subcommand("run", "Run seeded global optimizations and write history.csv and summary.json");
    run->add_option("--objective", cfg.objective, "zakharov|rosenbrock|rhe|styblinski_tang|shifted_sinusoidal|centered_sinusoidal")
        ->required();
    run->add_option("--dim", cfg.dimension, "Dimension")->check(CLI::PositiveNumber)->default_val(5);
    run->add_option("--algo", algo, "dmss|rdmss|ncg")
        ->check(CLI::IsMember({"dmss", "rdmss", "ncg"}))
        ->default_val("rdmss");
    run->add_option("--alpha", cfg.alpha, "Bettering exponent")->default_val(0.5);
    run->add_option("--delta", cfg.delta, "Failure probability threshold")->default_val(1e-3);
    run->add_option("--eps-base", cfg.eps_base, "Target size base; epsilon = base^dim")->default_val(0.01);
    run->add_option("--ptilde-scale", cfg.ptilde_scale, "Scale of the surrogate range CDF")->default_val(1.0);
    run->add_option("--runs", cfg.runs, "Number of global runs")->default_val(50);
    run->add_option("--seed", cfg.seed, "Master seed")->default_val(1);
    run->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->default_val(0);
    run->add_option("--out", out_dir, "Output directory")->default_val("bench_out");
    run->add_option("--max-evals", cfg.max_total_evals, "Evaluation budget per global run")->default_val(100000);
    run->add_flag("--count-line-search", cfg.count_line_search, "Count every line-search probe as an evaluation");
    run->add_flag("--sorted-history", cfg.sorted_history, "Also write history_sorted.csv");

    dmss::ValidationConfig vcfg;
    auto* validate = app.add_subcommand("validate-theory", "Monte-Carlo checks of the record theory");
    validate->add_option("--trajectories", vcfg.trajectories, "Trajectories per check (>= 1000)")
        ->default_val(100000);
    validate->add_option("--seed", vcfg.seed, "Master seed")->default_val(1);
    validate->add_option("--workers", vcfg.workers, "Worker threads (0 = all cores)")->default_val(0);

    std::string summary_a, summary_b, comparison_out = "comparison.json";
    auto* compare = app.add_subcommand("compare", "Compare two summary.json files");
    compare->add_option("summary_a", summary_a)->required()->check(CLI::ExistingFile);
    compare->add_option("summary_b", summary_b)->required()->check(CLI::ExistingFile);
    compare->add_option("--out", comparison_out, "Where to write the comparison")->default_val("comparison.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            cfg.algorithm = dmss::parse_experiment_algo(algo);
            cfg.out_dir = out_dir;
            const auto result = dmss::run_experiment(cfg);
            std::cout << dmss::summary_document(cfg, result.aggregate).dump(2) << '\n';
            return 0;
        }
        if (*validate) {
            const auto report = dmss::validate_statistics(vcfg);
            std::cout << report.to_json() << '\n';
            return report.all_pass() ? 0 : 1;
        }
        const auto cmp = dmss::compare_summaries(read_json(summary_a), read_json(summary_b));
        std::ofstream os(comparison_out);
        if (!os) throw std::runtime_error("cannot write " + comparison_out);
        os << cmp.dump(2) << '\n';
        std::cout << cmp.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "bench: " << e.what() << '\n';
        return 2;
    }
}
