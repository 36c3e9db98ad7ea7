#include "dmss/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dmss/parallel.hpp"
#include "dmss/rng.hpp"

namespace dmss {

std::string_view experiment_algo_name(ExperimentAlgo a) {
    switch (a) {
        case ExperimentAlgo::dmss: return "dmss";
        case ExperimentAlgo::rdmss: return "rdmss";
        case ExperimentAlgo::ncg: return "ncg";
    }
    return "?";
}

ExperimentAlgo parse_experiment_algo(std::string_view name) {
    for (auto a : {ExperimentAlgo::dmss, ExperimentAlgo::rdmss, ExperimentAlgo::ncg}) {
        if (experiment_algo_name(a) == name) return a;
    }
    throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

void ExperimentConfig::validate() const {
    parse_objective(objective);
    if (dimension < 1) throw std::invalid_argument("dimension must be positive");
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (!(eps_base > 0.0 && eps_base < 1.0)) throw std::invalid_argument("eps_base must lie in (0, 1)");
    algo_params().validate();
}

double ExperimentConfig::epsilon() const { return std::pow(eps_base, dimension); }

AlgoParams ExperimentConfig::algo_params() const {
    AlgoParams p;
    p.alpha = alpha;
    p.delta = delta;
    p.epsilon = epsilon();
    p.ptilde.scale = ptilde_scale;
    p.max_total_evals = max_total_evals;
    p.count_line_search = count_line_search;
    return p;
}

std::uint64_t run_seed(const ExperimentConfig& config, std::uint64_t i) { return derive_seed(config.seed, i); }

AggregateReport aggregate(const std::vector<RunReport>& runs) {
    AggregateReport a;
    a.runs = runs.size();
    if (runs.empty()) return a;
    double restarts = 0.0, inner = 0.0, total = 0.0, to_target = 0.0;
    for (const auto& r : runs) {
        restarts += static_cast<double>(r.restarts);
        inner += r.avg_inner_iterations;
        total += static_cast<double>(r.total_evals);
        if (r.success) {
            ++a.success_count;
            to_target += static_cast<double>(*r.evals_to_target);
        }
    }
    const double n = static_cast<double>(a.runs);
    a.avg_restarts = restarts / n;
    a.avg_inner_iterations = inner / n;
    a.avg_total_evals = total / n;
    if (a.success_count > 0) a.avg_evals_to_target = to_target / static_cast<double>(a.success_count);
    return a;
}

nlohmann::ordered_json summary_document(const ExperimentConfig& c, const AggregateReport& agg) {
    // Worker count and output path are deliberately absent: they must not
    // change a single byte of the summary.
    nlohmann::ordered_json doc;
    doc["config"] = {{"objective", c.objective},
                     {"dimension", c.dimension},
                     {"algorithm", experiment_algo_name(c.algorithm)},
                     {"alpha", c.alpha},
                     {"delta", c.delta},
                     {"eps_base", c.eps_base},
                     {"epsilon", c.epsilon()},
                     {"ptilde_scale", c.ptilde_scale},
                     {"runs", c.runs},
                     {"seed", c.seed},
                     {"max_total_evals", c.max_total_evals},
                     {"count_line_search", c.count_line_search}};
    doc["avg_restarts"] = agg.avg_restarts;
    if (agg.avg_evals_to_target) {
        doc["avg_evals_to_target"] = *agg.avg_evals_to_target;
    } else {
        doc["avg_evals_to_target"] = nullptr;
    }
    doc["avg_inner_iterations"] = agg.avg_inner_iterations;
    doc["avg_total_evals"] = agg.avg_total_evals;
    doc["success_count"] = agg.success_count;
    doc["runs"] = agg.runs;
    return doc;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostream& os, std::size_t run, const HistoryEntry& h, std::string_view algorithm) {
    os << run << ',' << h.eval_index << ',' << format_double(h.f) << ',' << (h.is_record ? 1 : 0) << ','
       << h.restart_index << ',' << algorithm << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

}  // namespace

void write_history_csv(std::ostream& os, const std::vector<RunReport>& runs, std::string_view algorithm,
                       bool sorted) {
    os << kHistoryHeader << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!sorted) {
            for (const auto& h : runs[i].history) write_row(os, i, h, algorithm);
            continue;
        }
        auto rows = runs[i].history;
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.f > b.f; });
        for (const auto& h : rows) write_row(os, i, h, algorithm);
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const ObjectiveSpec spec(parse_objective(config.objective), config.dimension);
    const AlgoParams params = config.algo_params();

    if (!config.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(config.out_dir, ec);
        if (ec) throw std::runtime_error("cannot create " + config.out_dir.string() + ": " + ec.message());
    }

    ExperimentResult result;
    result.runs.resize(config.runs);
    parallel_for(config.runs, config.workers, [&](std::size_t i) {
        const std::uint64_t seed = run_seed(config, i);
        switch (config.algorithm) {
            case ExperimentAlgo::dmss: result.runs[i] = run_dmss(spec, params, seed); break;
            case ExperimentAlgo::rdmss: result.runs[i] = run_rdmss(spec, params, seed); break;
            case ExperimentAlgo::ncg: result.runs[i] = run_ncg_baseline(spec, params, seed); break;
        }
    });
    result.aggregate = aggregate(result.runs);

    if (!config.out_dir.empty()) {
        const auto algo = experiment_algo_name(config.algorithm);
        {
            auto os = open_output(config.out_dir / "history.csv");
            write_history_csv(os, result.runs, algo);
        }
        if (config.sorted_history) {
            auto os = open_output(config.out_dir / "history_sorted.csv");
            write_history_csv(os, result.runs, algo, true);
        }
        auto os = open_output(config.out_dir / "summary.json");
        os << summary_document(config, result.aggregate).dump(2) << '\n';
        if (!os) throw std::runtime_error("write failed for summary.json");
    }
    return result;
}

AggregateReport aggregate_from_history(std::istream& is, double f_star, double epsilon) {
    std::string line;
    if (!std::getline(is, line) || line != kHistoryHeader) {
        throw std::invalid_argument("history.csv header mismatch");
    }
    struct PerRun {
        std::uint64_t rows = 0;
        std::uint64_t restarts = 0;
        std::optional<std::uint64_t> hit;
    };
    std::map<std::uint64_t, PerRun> per_run;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string run, idx, f, rec, restart;
        std::getline(ss, run, ',');
        std::getline(ss, idx, ',');
        std::getline(ss, f, ',');
        std::getline(ss, rec, ',');
        std::getline(ss, restart, ',');
        auto& r = per_run[std::stoull(run)];
        ++r.rows;
        r.restarts = std::max<std::uint64_t>(r.restarts, std::stoull(restart));
        if (!r.hit && std::abs(std::stod(f) - f_star) <= epsilon) r.hit = std::stoull(idx);
    }
    std::vector<RunReport> reports;
    for (const auto& [id, r] : per_run) {
        RunReport rep;
        rep.restarts = r.restarts;
        rep.total_evals = r.rows;
        rep.avg_inner_iterations = static_cast<double>(r.rows) / static_cast<double>(r.restarts);
        rep.success = r.hit.has_value();
        rep.evals_to_target = r.hit;
        reports.push_back(std::move(rep));
    }
    return aggregate(reports);
}

nlohmann::ordered_json compare_summaries(const nlohmann::json& a, const nlohmann::json& b) {
    const auto& ca = a.at("config");
    const auto& cb = b.at("config");
    if (ca.at("objective") != cb.at("objective") || ca.at("dimension") != cb.at("dimension")) {
        throw std::invalid_argument("summaries differ in objective or dimension");
    }
    // +1: larger is better, -1: smaller is better, 0: no preference.
    const std::pair<const char*, int> metrics[] = {{"avg_restarts", 0},         {"avg_evals_to_target", -1},
                                                   {"avg_inner_iterations", 0}, {"avg_total_evals", -1},
                                                   {"success_count", +1}};
    nlohmann::ordered_json out;
    out["objective"] = ca.at("objective");
    out["dimension"] = ca.at("dimension");
    out["a"] = ca.at("algorithm");
    out["b"] = cb.at("algorithm");
    nlohmann::ordered_json deltas;
    for (const auto& [name, sense] : metrics) {
        nlohmann::ordered_json m;
        const auto& va = a.at(name);
        const auto& vb = b.at(name);
        m["a"] = va;
        m["b"] = vb;
        if (va.is_null() || vb.is_null()) {
            m["delta"] = nullptr;
            m["direction"] = "undefined";
            m["favors"] = nullptr;
        } else {
            const double d = vb.get<double>() - va.get<double>();
            m["delta"] = d;
            m["direction"] = d < 0 ? "lower" : d > 0 ? "higher" : "equal";
            if (sense == 0) {
                m["favors"] = nullptr;
            } else if (d == 0) {
                m["favors"] = "tie";
            } else {
                m["favors"] = (d * sense > 0) ? "b" : "a";
            }
        }
        deltas[name] = m;
    }
    out["metrics"] = deltas;
    return out;
}

}  // namespace dmss
