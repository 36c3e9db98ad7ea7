#include "dmss/multistart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmss/rng.hpp"

namespace dmss {

namespace {

// Improvements below this are float noise, not records.
constexpr double kRecordTolerance = 1e-14;

// Function evaluations charged for the last engine action.
std::uint64_t charged_evals(const NcgState& s, const AlgoParams& params) {
    if (params.count_line_search) return s.last_trials.size();
    return s.last_step_accepted ? 1 : 0;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) { return a == Algorithm::dmss ? "dmss" : "rdmss"; }

void AlgoParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (max_total_evals == 0) throw std::invalid_argument("max_total_evals must be positive");
    ptilde.validate();
}

double record_overdue_limit(std::uint64_t records_k, Zeta zeta) {
    return records_k == 0 ? 1.0 : n_record_threshold(records_k - 1, zeta);
}

InnerResult inner_loop(const ObjectiveSpec& spec, NcgState engine, const AlgoParams& params, Zeta zeta,
                       const SlopeBound* slope, OracleCounter& counter, std::uint64_t eval_budget,
                       const EvalSink& sink) {
    InnerResult out;
    auto& log = out.log;

    // The restart point is iterate 1 and record 1.
    log.iterates_j = 1;
    log.records.emplace_back(1, engine.f);
    std::uint64_t charged = 1;
    if (sink) sink(engine.f, true);
    out.best_x = engine.x;
    out.best_f = engine.f;

    while (true) {
        if (engine.converged) {
            out.exit = InnerExit::native_convergence;
            break;
        }
        if (log.iterates_j >= 2 &&
            static_cast<double>(log.iterates_j) >= record_overdue_limit(log.records_k(), zeta)) {
            out.exit = InnerExit::record_overdue;
            break;
        }
        if (charged >= eval_budget) {
            out.exit = InnerExit::budget;
            break;
        }

        engine = ncg_step(spec, engine, counter, params.ncg);
        charged += charged_evals(engine, params);

        if (!engine.last_step_accepted) {
            if (sink && params.count_line_search) {
                for (double f : engine.last_trials) sink(f, false);
            }
            out.exit = InnerExit::native_convergence;
            break;
        }
        if (sink && params.count_line_search) {
            for (std::size_t i = 0; i + 1 < engine.last_trials.size(); ++i) sink(engine.last_trials[i], false);
        }

        ++log.iterates_j;
        // The incumbent takes any decrease; records need a real one.
        if (engine.f < out.best_f) {
            out.best_x = engine.x;
            out.best_f = engine.f;
        }
        const auto [prev_j, prev_y] = log.records.back();
        const bool is_record = engine.f < prev_y - kRecordTolerance;
        if (sink) sink(engine.f, is_record);
        if (!is_record) continue;
        log.records.emplace_back(log.iterates_j, engine.f);

        if (slope != nullptr) {
            const double realized = (prev_y - engine.f) / static_cast<double>(log.iterates_j - prev_j);
            if (realized < (*slope)(prev_y, params.alpha, zeta)) {
                out.exit = InnerExit::slope;
                break;
            }
        }
    }
    return out;
}

SuccessCheck check_success(std::span<const HistoryEntry> history, double f_star, double epsilon) {
    for (const auto& h : history) {
        if (std::abs(h.f - f_star) <= epsilon) return {true, h.eval_index};
    }
    return {};
}

RunReport run_multistart(const ObjectiveSpec& spec, const AlgoParams& params, Algorithm algorithm,
                         std::uint64_t seed, const SlopeBound* slope_override) {
    params.validate();

    const SlopeBound default_slope = [&params](double y, double alpha, Zeta z) {
        return expected_slope(y, alpha, z, params.ptilde);
    };
    const SlopeBound* slope = nullptr;
    if (algorithm == Algorithm::rdmss) slope = slope_override != nullptr ? slope_override : &default_slope;

    RunReport report;
    report.algorithm = algorithm;
    GlobalState& g = report.final_state;
    g.y_best = std::numeric_limits<double>::infinity();
    g.lambda = params.alpha * g.zeta.value();

    Rng rng(seed);
    std::uint64_t evals = 0;
    RecordCountHistogram record_counts;
    ZetaLikelihood likelihood;

    // At least one run always executes.
    while (report.restarts == 0 || g.p_fail >= params.delta) {
        if (evals >= params.max_total_evals) {
            report.budget_exhausted = true;
            break;
        }
        const auto x0 = sample_uniform(spec, rng);
        ++report.restarts;
        const std::uint64_t restart = report.restarts;

        auto sink = [&](double f, bool is_record) {
            report.history.push_back({++evals, f, is_record, restart});
        };
        auto engine = ncg_init(spec, x0, report.oracle, params.ncg);
        auto inner = inner_loop(spec, std::move(engine), params, g.zeta, slope, report.oracle,
                                params.max_total_evals - evals, sink);

        if (inner.best_f < g.y_best) {
            g.y_best = inner.best_f;
            g.x_best = inner.best_x;
        }
        g.completed.push_back(inner.log.stats());
        record_counts.add(inner.log.records_k());
        likelihood.add(g.completed.back());
        g.zeta = likelihood.solve();
        g.lambda = params.alpha * g.zeta.value();
        g.p_fail = p_fail(record_counts, g.lambda, params.epsilon);
        g.restarts = report.restarts;

        report.p_fail_trace.push_back(g.p_fail);
        report.zeta_trace.push_back(g.zeta.value());
        report.exits.push_back(inner.exit);
        report.runs.push_back(std::move(inner.log));
        if (report.exits.back() == InnerExit::budget) {
            report.budget_exhausted = true;
            break;
        }
    }

    report.total_evals = evals;
    double iter_sum = 0.0;
    for (const auto& r : report.runs) iter_sum += static_cast<double>(r.iterates_j);
    report.avg_inner_iterations = iter_sum / static_cast<double>(report.runs.size());
    const auto hit = check_success(report.history, spec.known_min_value(), params.epsilon);
    report.success = hit.success;
    report.evals_to_target = hit.first_hit;
    return report;
}

RunReport run_dmss(const ObjectiveSpec& spec, const AlgoParams& params, std::uint64_t seed) {
    return run_multistart(spec, params, Algorithm::dmss, seed);
}

RunReport run_rdmss(const ObjectiveSpec& spec, const AlgoParams& params, std::uint64_t seed) {
    return run_multistart(spec, params, Algorithm::rdmss, seed);
}

RunReport run_ncg_baseline(const ObjectiveSpec& spec, const AlgoParams& params, std::uint64_t seed,
                           std::uint64_t max_iters) {
    params.validate();
    RunReport report;
    Rng rng(seed);
    const auto x0 = sample_uniform(spec, rng);
    report.restarts = 1;

    std::uint64_t evals = 0;
    auto emit = [&](double f, bool is_record) { report.history.push_back({++evals, f, is_record, 1}); };

    auto s = ncg_init(spec, x0, report.oracle, params.ncg);
    RecordLog log;
    log.iterates_j = 1;
    log.records.emplace_back(1, s.f);
    emit(s.f, true);
    double best = s.f;
    for (std::uint64_t it = 0; it < max_iters && !s.converged; ++it) {
        s = ncg_step(spec, s, report.oracle, params.ncg);
        const std::size_t probes = s.last_trials.size();
        if (params.count_line_search) {
            const std::size_t rejected = s.last_step_accepted ? probes - 1 : probes;
            for (std::size_t i = 0; i < rejected; ++i) emit(s.last_trials[i], false);
        }
        if (!s.last_step_accepted) break;
        ++log.iterates_j;
        const bool is_record = s.f < best - kRecordTolerance;
        emit(s.f, is_record);
        if (is_record) {
            best = s.f;
            log.records.emplace_back(log.iterates_j, s.f);
        }
    }
    report.final_state.x_best = s.x;
    report.final_state.y_best = s.f;
    report.total_evals = evals;
    report.avg_inner_iterations = static_cast<double>(log.iterates_j);
    report.runs.push_back(std::move(log));
    report.exits.push_back(InnerExit::native_convergence);
    const auto hit = check_success(report.history, spec.known_min_value(), params.epsilon);
    report.success = hit.success;
    report.evals_to_target = hit.first_hit;
    return report;
}

}  // namespace dmss
