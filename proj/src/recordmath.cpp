#include "dmss/recordmath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace dmss {

RunStats::RunStats(std::uint64_t k, std::uint64_t j) : records_k(k), iterates_j(j) {
    if (k < 1 || j < k) {
        throw std::invalid_argument("RunStats requires iterates >= records >= 1");
    }
}

Zeta::Zeta(double v) : value_(v) {
    if (!(v >= kMin && v <= kMax)) {
        throw std::domain_error("zeta outside [1e-6, 1e6]: " + std::to_string(v));
    }
}

void PtildeModel::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("ptilde scale must be positive and finite");
    }
    if (!(clamp_floor > 0.0 && clamp_floor < 0.5)) {
        throw std::invalid_argument("ptilde clamp floor must lie in (0, 0.5)");
    }
}

double digamma(double x) {
    if (!(x > 0.0) || std::isinf(x)) {
        if (std::isinf(x) && x > 0.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("digamma requires a positive argument");
    }
    // psi(x) = psi(x + 1) - 1/x until the asymptotic series is accurate.
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli terms B_{2n} / (2n x^{2n}), n = 1..6.
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

double incomplete_gamma_G(long long n, double x) {
    if (n < 0 || !(x >= 0.0)) {
        throw std::domain_error("incomplete_gamma_G requires n >= 0 and x >= 0");
    }
    if (n == 0) return 1.0;
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    const double dn = static_cast<double>(n);
    auto log_poisson = [x](double s) { return -x + s * std::log(x) - std::lgamma(s + 1.0); };

    if (x < dn) {
        // Upper tail sum_{s >= n}; terms shrink geometrically once s > x.
        double term = std::exp(log_poisson(dn));
        double sum = term;
        for (double s = dn; term > 1e-17 * sum; s += 1.0) {
            term *= x / (s + 1.0);
            sum += term;
        }
        return std::clamp(sum, 0.0, 1.0);
    }
    // Head sum_{s < n}, accumulated downward from its largest term.
    double term = std::exp(log_poisson(dn - 1.0));
    double head = term;
    for (double s = dn - 1.0; s > 0.0 && term > 1e-17 * head; s -= 1.0) {
        term *= s / x;
        head += term;
    }
    return std::clamp(1.0 - head, 0.0, 1.0);
}

namespace {

// sum_{i=1}^{j-1} 1 / (i + zeta) == psi(j + zeta) - psi(1 + zeta).
double shifted_harmonic(std::uint64_t j, double zeta) {
    if (j <= 1) return 0.0;
    if (j <= 4096) {
        double acc = 0.0;
        for (std::uint64_t i = j - 1; i >= 1; --i) acc += 1.0 / (static_cast<double>(i) + zeta);
        return acc;
    }
    return digamma(static_cast<double>(j) + zeta) - digamma(1.0 + zeta);
}

}  // namespace

ZetaLikelihood::ZetaLikelihood(std::span<const RunStats> history) {
    for (const auto& run : history) add(run);
}

void ZetaLikelihood::add(const RunStats& run) {
    if (run.records_k < 1 || run.iterates_j < run.records_k) {
        throw std::invalid_argument("RunStats requires iterates >= records >= 1");
    }
    ++runs_;
    excess_records_ += run.records_k - 1;
    auto it = std::lower_bound(iterate_counts_.begin(), iterate_counts_.end(), run.iterates_j,
                               [](const auto& entry, std::uint64_t j) { return entry.first < j; });
    if (it != iterate_counts_.end() && it->first == run.iterates_j) {
        ++it->second;
    } else {
        iterate_counts_.insert(it, {run.iterates_j, 1});
    }
}

double ZetaLikelihood::residual(double zeta) const {
    double harmonic = 0.0;
    for (const auto& [j, count] : iterate_counts_) {
        harmonic += static_cast<double>(count) * shifted_harmonic(j, zeta);
    }
    return static_cast<double>(excess_records_) - zeta * harmonic;
}

Zeta ZetaLikelihood::solve() const {
    if (runs_ == 0) {
        throw std::invalid_argument("solve_zeta requires at least one completed run");
    }
    if (iterate_counts_.size() == 1 && iterate_counts_.front().first == 1) return Zeta{};

    double lo = Zeta::kMin;
    double hi = Zeta::kMax;
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (f_lo == 0.0) return Zeta{lo};
    if (f_hi == 0.0) return Zeta{hi};
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        return Zeta{std::abs(f_lo) <= std::abs(f_hi) ? lo : hi};
    }
    // The residual is strictly decreasing in zeta.
    while (hi / lo - 1.0 > 1e-10) {
        const double mid = std::sqrt(lo * hi);
        const double f_mid = residual(mid);
        if (f_mid == 0.0) return Zeta{mid};
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return Zeta{std::sqrt(lo * hi)};
}

double zeta_likelihood_residual(std::span<const RunStats> history, double zeta) {
    return ZetaLikelihood(history).residual(zeta);
}

Zeta solve_zeta(std::span<const RunStats> history) { return ZetaLikelihood(history).solve(); }

void RecordCountHistogram::add(std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("record counts must be >= 1");
    auto it = std::lower_bound(bins_.begin(), bins_.end(), k,
                               [](const auto& entry, std::uint64_t key) { return entry.first < key; });
    if (it != bins_.end() && it->first == k) {
        ++it->second;
    } else {
        bins_.insert(it, {k, 1});
    }
}

double p_fail(const RecordCountHistogram& counts, double lambda, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("p_fail requires epsilon in (0, 1)");
    }
    if (!(lambda > 0.0)) {
        throw std::domain_error("p_fail requires lambda > 0");
    }
    const double x = -lambda * std::log(epsilon);
    double prob = 1.0;
    for (const auto& [k, n] : counts.bins()) {
        prob *= std::pow(incomplete_gamma_G(static_cast<long long>(k), x), static_cast<double>(n));
    }
    return prob;
}

double p_fail(std::span<const std::uint64_t> record_counts, double lambda, double epsilon) {
    RecordCountHistogram h;
    for (auto k : record_counts) h.add(k);
    return p_fail(h, lambda, epsilon);
}

double expected_records(double j, Zeta zeta) {
    if (!(j >= 0.0)) throw std::domain_error("expected_records requires j >= 0");
    if (j == 0.0) return 0.0;
    const double z = zeta.value();
    return z * (digamma(j + z) - digamma(z));
}

double n_record_threshold(std::uint64_t records_so_far, Zeta zeta) {
    if (records_so_far == 0) return 1.0;
    const double target = static_cast<double>(records_so_far) + 1.0;
    double lo = 1.0;
    double hi = 2.0;
    while (expected_records(hi, zeta) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (expected_records(mid, zeta) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double ptilde(double y, const PtildeModel& model) {
    const double raw = -std::expm1(-y / model.scale);
    return std::clamp(raw, model.clamp_floor, 1.0 - model.clamp_floor);
}

double expected_slope(double y_record, double alpha, Zeta zeta, const PtildeModel& model) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::domain_error("expected_slope requires alpha in (0, 1]");
    }
    return std::pow(ptilde(y_record, model), alpha) / zeta.value();
}

namespace {

using StirlingTable = std::array<std::array<std::uint64_t, kMaxStirlingRow + 1>, kMaxStirlingRow + 1>;

StirlingTable build_stirling() {
    StirlingTable t{};
    t[0][0] = 1;
    for (int n = 0; n < kMaxStirlingRow; ++n) {
        for (int k = 1; k <= n + 1; ++k) {
            t[n + 1][k] = static_cast<std::uint64_t>(n) * t[n][k] + t[n][k - 1];
        }
    }
    return t;
}

const StirlingTable& stirling_table() {
    static const StirlingTable table = build_stirling();
    return table;
}

}  // namespace

std::uint64_t stirling_first_unsigned(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("Stirling indices must be nonnegative");
    if (n > kMaxStirlingRow) throw std::out_of_range("Stirling table limited to n <= 20");
    if (k > n) return 0;
    return stirling_table()[n][k];
}

double record_count_pmf(int j, int k, Zeta zeta) {
    if (j < 1 || k < 1) throw std::invalid_argument("record_count_pmf requires j, k >= 1");
    if (j > kMaxStirlingRow) throw std::out_of_range("record_count_pmf supports j <= 20");
    if (k > j) return 0.0;
    const double z = zeta.value();
    const double log_weight =
        (k - 1) * std::log(z) + std::lgamma(1.0 + z) - std::lgamma(static_cast<double>(j) + z);
    return static_cast<double>(stirling_first_unsigned(j, k)) * std::exp(log_weight);
}

}  // namespace dmss
