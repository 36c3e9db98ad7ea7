#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dmss/newton_cg.hpp"
#include "dmss/objectives.hpp"
#include "dmss/recordmath.hpp"

namespace dmss {

enum class Algorithm { dmss, rdmss };

std::string_view algorithm_name(Algorithm a);

struct AlgoParams {
    double alpha = 0.5;
    double delta = 1e-3;
    double epsilon = 1e-10;  // target size, already raised to the d-th power
    PtildeModel ptilde{};
    std::uint64_t max_total_evals = 100'000;
    /// Count every line-search probe as a function evaluation instead of one
    /// evaluation per accepted iterate.
    bool count_line_search = false;
    NcgOptions ncg{};

    void validate() const;
};

/// One oracle call as seen by the benchmark (1-based index within the global run).
struct HistoryEntry {
    std::uint64_t eval_index = 0;
    double f = 0.0;
    bool is_record = false;
    std::uint64_t restart_index = 0;  // 1-based run number
};

/// Records of one inner loop: (iterate index, value) pairs plus the raw iterate count.
struct RecordLog {
    std::vector<std::pair<std::uint64_t, double>> records;
    std::uint64_t iterates_j = 0;

    std::uint64_t records_k() const noexcept { return records.size(); }
    RunStats stats() const { return RunStats{records_k(), iterates_j}; }
};

enum class InnerExit { native_convergence, record_overdue, slope, budget };

struct InnerResult {
    RecordLog log;
    InnerExit exit = InnerExit::native_convergence;
    std::vector<double> best_x;
    double best_f = 0.0;
};

/// Lower bound on the realized slope at a new record, given the previous
/// record value. The default is expected_slope with the run's ptilde model.
using SlopeBound = std::function<double(double previous_record, double alpha, Zeta zeta)>;

struct GlobalState {
    std::vector<double> x_best;
    double y_best = 0.0;
    std::vector<RunStats> completed;
    Zeta zeta{};
    double lambda = 0.0;
    double p_fail = 1.0;
    std::uint64_t restarts = 0;
};

struct RunReport {
    Algorithm algorithm = Algorithm::dmss;
    std::uint64_t restarts = 0;
    std::optional<std::uint64_t> evals_to_target;
    double avg_inner_iterations = 0.0;
    std::uint64_t total_evals = 0;
    bool success = false;
    bool budget_exhausted = false;
    std::vector<HistoryEntry> history;
    std::vector<RecordLog> runs;
    std::vector<InnerExit> exits;
    std::vector<double> p_fail_trace;  // after each completed run
    std::vector<double> zeta_trace;
    GlobalState final_state;
    OracleCounter oracle;
};

/// Iterate count at which a run holding `records_k` records is overdue.
double record_overdue_limit(std::uint64_t records_k, Zeta zeta);

/// Receives every oracle call of an inner loop as (f, is_record).
using EvalSink = std::function<void(double f, bool is_record)>;

/// One inner loop from an initialized engine. Stops on native convergence,
/// an overdue record, the slope criterion (when `slope` is set) or when
/// `eval_budget` function evaluations have been charged.
InnerResult inner_loop(const ObjectiveSpec& spec, NcgState engine, const AlgoParams& params, Zeta zeta,
                       const SlopeBound* slope, OracleCounter& counter, std::uint64_t eval_budget,
                       const EvalSink& sink);

RunReport run_multistart(const ObjectiveSpec& spec, const AlgoParams& params, Algorithm algorithm,
                         std::uint64_t seed, const SlopeBound* slope_override = nullptr);

RunReport run_dmss(const ObjectiveSpec& spec, const AlgoParams& params, std::uint64_t seed);
RunReport run_rdmss(const ObjectiveSpec& spec, const AlgoParams& params, std::uint64_t seed);

struct SuccessCheck {
    bool success = false;
    std::optional<std::uint64_t> first_hit;
};

/// Success iff some evaluation satisfies |f - f*| <= epsilon.
SuccessCheck check_success(std::span<const HistoryEntry> history, double f_star, double epsilon);

/// Bare Newton-CG from one uniform start, reported in the same shape.
RunReport run_ncg_baseline(const ObjectiveSpec& spec, const AlgoParams& params, std::uint64_t seed,
                           std::uint64_t max_iters = 10'000);

}  // namespace dmss
