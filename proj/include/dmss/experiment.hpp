#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmss/multistart.hpp"
#include "json.hpp"

namespace dmss {

enum class ExperimentAlgo { dmss, rdmss, ncg };

std::string_view experiment_algo_name(ExperimentAlgo a);
ExperimentAlgo parse_experiment_algo(std::string_view name);

struct ExperimentConfig {
    std::string objective = "zakharov";
    int dimension = 5;
    ExperimentAlgo algorithm = ExperimentAlgo::rdmss;
    double alpha = 0.5;
    double delta = 1e-3;
    double eps_base = 0.01;  // epsilon = eps_base^d
    double ptilde_scale = 1.0;
    std::uint64_t runs = 50;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: available parallelism
    std::uint64_t max_total_evals = 100'000;
    bool count_line_search = false;
    std::filesystem::path out_dir;  // empty: no files
    bool sorted_history = false;    // also write history_sorted.csv

    void validate() const;
    double epsilon() const;
    AlgoParams algo_params() const;
};

struct AggregateReport {
    double avg_restarts = 0.0;
    std::optional<double> avg_evals_to_target;  // over successful runs
    double avg_inner_iterations = 0.0;
    double avg_total_evals = 0.0;
    std::uint64_t success_count = 0;
    std::uint64_t runs = 0;
};

struct ExperimentResult {
    AggregateReport aggregate;
    std::vector<RunReport> runs;
};

/// Seed of run i under the config's master seed.
std::uint64_t run_seed(const ExperimentConfig& config, std::uint64_t i);

/// Executes all runs (in parallel when workers > 1), folds them in run order
/// and, when out_dir is set, writes history.csv and summary.json there.
ExperimentResult run_experiment(const ExperimentConfig& config);

AggregateReport aggregate(const std::vector<RunReport>& runs);

nlohmann::ordered_json summary_document(const ExperimentConfig& config, const AggregateReport& agg);

inline constexpr std::string_view kHistoryHeader = "run_id,eval_index,f_value,is_record,restart_index,algorithm";

/// One row per counted oracle call. Sorted mode orders each run's rows by
/// decreasing f value.
void write_history_csv(std::ostream& os, const std::vector<RunReport>& runs, std::string_view algorithm,
                       bool sorted = false);

/// Rebuilds the aggregate from a chronological history.csv. Inner-loop
/// lengths assume one row per iterate (count_line_search off).
AggregateReport aggregate_from_history(std::istream& is, double f_star, double epsilon);

/// Per-metric deltas (b - a) with a direction and the favored side.
/// Throws std::invalid_argument when objective or dimension differ.
nlohmann::ordered_json compare_summaries(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace dmss
