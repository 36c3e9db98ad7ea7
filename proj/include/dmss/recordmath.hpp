#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dmss {

/// Record and iterate counts of one completed run (k_r records in j_r iterates).
struct RunStats {
    std::uint64_t records_k = 1;
    std::uint64_t iterates_j = 1;

    RunStats() = default;
    RunStats(std::uint64_t k, std::uint64_t j);
};

/// Ratio lambda/alpha of the record model, kept inside [kMin, kMax].
class Zeta {
public:
    static constexpr double kMin = 1e-6;
    static constexpr double kMax = 1e6;
    static constexpr double kDefault = 1.0;

    Zeta() = default;
    explicit Zeta(double v);

    double value() const noexcept { return value_; }

private:
    double value_ = kDefault;
};

/// Surrogate range CDF 1 - exp(-y / scale), clamped to [floor, 1 - floor].
struct PtildeModel {
    double scale = 1.0;
    double clamp_floor = 1e-12;

    void validate() const;
};

double digamma(double x);

/// Regularized upper incomplete gamma for integer order:
/// G(n, x) = 1 - e^{-x} sum_{s<n} x^s / s!, i.e. P(Poisson(x) >= n).
double incomplete_gamma_G(long long n, double x);

/// Sufficient statistics of the zeta likelihood: the total of (k_r - 1)
/// and the multiset of iterate counts j_r. Adding runs in any order yields
/// identical results.
class ZetaLikelihood {
public:
    ZetaLikelihood() = default;
    explicit ZetaLikelihood(std::span<const RunStats> history);

    void add(const RunStats& run);
    std::uint64_t runs() const noexcept { return runs_; }

    /// sum_r (k_r - 1) + zeta (R psi(1 + zeta) - sum_r psi(j_r + zeta))
    double residual(double zeta) const;

    /// Root in [Zeta::kMin, Zeta::kMax] by log-scale bisection. Without a sign
    /// change the endpoint with the smaller residual is returned; an
    /// identically zero residual (every j_r = 1) gives Zeta::kDefault.
    Zeta solve() const;

private:
    std::uint64_t runs_ = 0;
    std::uint64_t excess_records_ = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> iterate_counts_;  // (j, multiplicity), sorted
};

/// Left side of the maximum-likelihood equation for zeta.
double zeta_likelihood_residual(std::span<const RunStats> history, double zeta);

Zeta solve_zeta(std::span<const RunStats> history);

/// Multiset of per-run record counts k_r.
class RecordCountHistogram {
public:
    void add(std::uint64_t k);
    /// (k, multiplicity), ascending in k.
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& bins() const noexcept { return bins_; }

private:
    std::vector<std::pair<std::uint64_t, std::uint64_t>> bins_;
};

/// Probability that every completed run misses the epsilon-target:
/// prod_r G(k_r, -lambda ln(epsilon)), evaluated as prod_k G(k, .)^{n_k}
/// so both overloads agree bit for bit.
double p_fail(std::span<const std::uint64_t> record_counts, double lambda, double epsilon);
double p_fail(const RecordCountHistogram& counts, double lambda, double epsilon);

/// Expected number of records within the first j iterates,
/// zeta (psi(j + zeta) - psi(zeta)). Continuous in j >= 0.
double expected_records(double j, Zeta zeta);

/// Iterate count j* at which records_so_far + 1 records are expected.
/// Returns +inf when j* exceeds the representable range.
double n_record_threshold(std::uint64_t records_so_far, Zeta zeta);

double ptilde(double y, const PtildeModel& model);

/// Conditional expected record slope (ptilde(y))^alpha / zeta.
double expected_slope(double y_record, double alpha, Zeta zeta, const PtildeModel& model);

inline constexpr int kMaxStirlingRow = 20;

/// Unsigned Stirling number of the first kind |s(n, k)|, n <= 20.
std::uint64_t stirling_first_unsigned(int n, int k);

/// Probability of exactly k records in the first j iterates.
double record_count_pmf(int j, int k, Zeta zeta);

}  // namespace dmss
