#include "dmss/hasplid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "dmss/parallel.hpp"
#include "dmss/recordmath.hpp"

namespace dmss {

RangeModel RangeModel::uniform() { return RangeModel{Kind::uniform, 1.0}; }

RangeModel RangeModel::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential rate must be positive");
    return RangeModel{Kind::exponential, rate};
}

double RangeModel::cdf(double y) const {
    if (kind_ == Kind::uniform) return std::clamp(y, 0.0, 1.0);
    return y <= 0.0 ? 0.0 : -std::expm1(-rate_ * y);
}

double RangeModel::inverse_cdf(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    if (kind_ == Kind::uniform) return u;
    return -std::log1p(-u) / rate_;
}

HasplidChain::HasplidChain(double alpha, double lambda, const RangeModel& model, std::uint64_t seed)
    : alpha_(alpha), inv_lambda_(0.0), model_(model), rng_(seed), y_(0.0) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
    inv_lambda_ = 1.0 / lambda;
    // p^lambda(Y_0) is uniform.
    y_ = model_.inverse_cdf(std::pow(rng_.uniform01(), inv_lambda_));
}

bool HasplidChain::step() {
    const double p = model_.cdf(y_);
    if (!(rng_.uniform01() < std::pow(p, alpha_))) return false;
    // Conditional CDF (p(y')/p(y))^lambda below the current level.
    const double next = model_.inverse_cdf(p * std::pow(rng_.uniform01(), inv_lambda_));
    if (!(next < y_)) return false;
    y_ = next;
    return true;
}

HasplidTrajectory run_hasplid(double alpha, double lambda, const RangeModel& model, std::uint64_t max_iters,
                              std::uint64_t seed) {
    if (max_iters == 0) throw std::invalid_argument("run_hasplid requires max_iters >= 1");
    HasplidChain chain(alpha, lambda, model, seed);
    HasplidTrajectory out;
    out.seed = seed;
    out.values.reserve(max_iters);
    out.values.push_back(chain.current());
    for (std::uint64_t j = 1; j < max_iters; ++j) {
        chain.step();
        out.values.push_back(chain.current());
    }
    return out;
}

RecordSequence extract_records(const HasplidTrajectory& trajectory) {
    if (trajectory.values.empty()) throw std::invalid_argument("extract_records needs a non-empty trajectory");
    RecordSequence r;
    r.times.push_back(0);
    r.values.push_back(trajectory.values.front());
    for (std::size_t j = 1; j < trajectory.values.size(); ++j) {
        if (trajectory.values[j] < r.values.back()) {
            r.times.push_back(j);
            r.values.push_back(trajectory.values[j]);
        }
    }
    return r;
}

std::vector<double> slope_samples(const RecordSequence& records) {
    std::vector<double> s;
    for (std::size_t k = 0; k + 1 < records.values.size(); ++k) {
        s.push_back((records.values[k] - records.values[k + 1]) /
                    static_cast<double>(records.times[k + 1] - records.times[k]));
    }
    return s;
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::string ValidationReport::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"statistic", c.statistic},
                       {"theoretical", c.theoretical},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    }
    nlohmann::ordered_json doc;
    doc["checks"] = arr;
    doc["all_pass"] = all_pass();
    return doc.dump(2);
}

namespace {

// Level-crossing setup: uniform range, lambda = 1, alpha = 0.5.
constexpr double kLevel = 0.1;
constexpr double kBinCenter = 0.5;
constexpr double kBinHalfWidth = 0.02;
constexpr double kLevelAlpha = 0.5;
constexpr std::uint64_t kStepCap = 10'000'000;

// Fixed-length setup: alpha = lambda = 1.
constexpr std::uint64_t kShortJ = 3;
constexpr std::uint64_t kMidJ = 10;
constexpr std::uint64_t kLongJ = 100;

struct LevelSample {
    std::uint64_t records_above = 0;
    bool third_record_above = false;
    std::uint64_t bin_hits = 0;
    double bin_gap_sum = 0.0;
    double bin_slope_sum = 0.0;
};

LevelSample simulate_level(std::uint64_t seed) {
    HasplidChain chain(kLevelAlpha, 1.0, RangeModel::uniform(), seed);
    LevelSample out;
    double record = chain.current();
    std::uint64_t record_time = 0;
    std::uint64_t k = 1;
    if (record > kLevel) out.records_above = 1;
    for (std::uint64_t j = 1; record > kLevel && j < kStepCap; ++j) {
        if (!chain.step()) continue;
        const double y = chain.current();
        if (std::abs(record - kBinCenter) <= kBinHalfWidth) {
            const double gap = static_cast<double>(j - record_time);
            ++out.bin_hits;
            out.bin_gap_sum += gap;
            out.bin_slope_sum += (record - y) / gap;
        }
        ++k;
        record = y;
        record_time = j;
        if (y > kLevel) {
            ++out.records_above;
            if (k == 3) out.third_record_above = true;
        }
    }
    return out;
}

struct CountSample {
    std::uint64_t at_short = 0;
    std::uint64_t at_mid = 0;
    std::uint64_t at_long = 0;
};

CountSample simulate_counts(std::uint64_t seed) {
    HasplidChain chain(1.0, 1.0, RangeModel::uniform(), seed);
    CountSample out;
    std::uint64_t k = 1;
    for (std::uint64_t j = 1; j <= kLongJ; ++j) {
        if (j == kShortJ) out.at_short = k;
        if (j == kMidJ) out.at_mid = k;
        if (j == kLongJ) out.at_long = k;
        if (j < kLongJ && chain.step()) ++k;
    }
    return out;
}

ValidationCheck make_check(std::string name, double stat, double theory, double tol, bool relative) {
    ValidationCheck c{std::move(name), stat, theory, tol, relative, false};
    const double err = std::abs(stat - theory);
    c.pass = std::isfinite(stat) && err <= (relative ? tol * std::abs(theory) : tol);
    return c;
}

}  // namespace

ValidationReport validate_statistics(const ValidationConfig& config) {
    if (config.trajectories < 1000) {
        throw std::invalid_argument("validate_statistics needs at least 1000 trajectories");
    }
    const std::size_t n = config.trajectories;
    const std::uint64_t level_master = derive_seed(config.seed, 0);
    const std::uint64_t count_master = derive_seed(config.seed, 1);

    std::vector<LevelSample> level(n);
    std::vector<CountSample> counts(n);
    parallel_for(n, config.workers, [&](std::size_t i) {
        level[i] = simulate_level(derive_seed(level_master, i));
        counts[i] = simulate_counts(derive_seed(count_master, i));
    });

    // Serial fold in trajectory order.
    double sum_n = 0.0, sum_n2 = 0.0, third_above = 0.0;
    double hits = 0.0, gap_sum = 0.0, slope_sum = 0.0;
    for (const auto& s : level) {
        const double r = static_cast<double>(s.records_above);
        sum_n += r;
        sum_n2 += r * r;
        third_above += s.third_record_above ? 1.0 : 0.0;
        hits += static_cast<double>(s.bin_hits);
        gap_sum += s.bin_gap_sum;
        slope_sum += s.bin_slope_sum;
    }
    const double dn = static_cast<double>(n);
    const double mean_n = sum_n / dn;
    const double var_n = (sum_n2 - dn * mean_n * mean_n) / (dn - 1.0);
    const double poisson_mean = -std::log(kLevel);  // lambda = 1, p(y) = y

    std::vector<double> freq(kShortJ + 1, 0.0);
    double mid_sum = 0.0, long_sum = 0.0;
    for (const auto& c : counts) {
        freq[c.at_short] += 1.0;
        mid_sum += static_cast<double>(c.at_mid);
        long_sum += static_cast<double>(c.at_long);
    }

    ValidationReport report;
    auto& out = report.checks;
    out.push_back(make_check("record_count_mean", mean_n, poisson_mean, 0.02, true));
    out.push_back(make_check("record_count_variance", var_n, poisson_mean, 0.05, true));
    out.push_back(make_check("third_record_survival", third_above / dn, incomplete_gamma_G(3, poisson_mean), 0.01,
                             false));
    out.push_back(make_check("inter_record_time_mean", hits > 0 ? gap_sum / hits : NAN,
                             std::pow(kBinCenter, -kLevelAlpha), 0.03, true));
    const Zeta one{1.0};
    for (std::uint64_t k = 1; k <= kShortJ; ++k) {
        out.push_back(make_check("record_pmf_j3_k" + std::to_string(k), freq[k] / dn,
                                 record_count_pmf(static_cast<int>(kShortJ), static_cast<int>(k), one), 0.01,
                                 false));
    }
    out.push_back(make_check("expected_records_j10", mid_sum / dn, expected_records(kMidJ, one), 0.02, true));
    out.push_back(make_check("expected_records_j100", long_sum / dn, expected_records(kLongJ, one), 0.02, true));
    out.push_back(make_check("slope_conditional_mean", hits > 0 ? slope_sum / hits : NAN,
                             kLevelAlpha * std::pow(kBinCenter, kLevelAlpha) / 1.0, 0.05, true));
    return report;
}

}  // namespace dmss
