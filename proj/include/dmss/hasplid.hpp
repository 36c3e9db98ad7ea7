#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmss/rng.hpp"

namespace dmss {

/// Range distribution of objective values seen by a uniform sampler.
class RangeModel {
public:
    enum class Kind { uniform, exponential };

    /// Uniform on [0, 1]: p(y) = y.
    static RangeModel uniform();
    /// Exponential with the given rate: p(y) = 1 - exp(-rate y).
    static RangeModel exponential(double rate);

    double cdf(double y) const;
    double inverse_cdf(double u) const;
    Kind kind() const noexcept { return kind_; }

private:
    RangeModel(Kind k, double rate) : kind_(k), rate_(rate) {}
    Kind kind_;
    double rate_;
};

struct HasplidTrajectory {
    std::vector<double> values;  // Y_0 >= Y_1 >= ...
    std::uint64_t seed = 0;
};

struct RecordSequence {
    std::vector<std::uint64_t> times;  // times[0] == 0
    std::vector<double> values;
};

/// Step-by-step HASPLID(alpha, lambda; rho) chain.
class HasplidChain {
public:
    HasplidChain(double alpha, double lambda, const RangeModel& model, std::uint64_t seed);

    double current() const noexcept { return y_; }
    /// Advances one iterate; returns true when it improved.
    bool step();

private:
    double alpha_;
    double inv_lambda_;
    RangeModel model_;
    Rng rng_;
    double y_;
};

/// Y_0 .. Y_{max_iters - 1}.
HasplidTrajectory run_hasplid(double alpha, double lambda, const RangeModel& model, std::uint64_t max_iters,
                              std::uint64_t seed);

RecordSequence extract_records(const HasplidTrajectory& trajectory);

/// (Y_R(k) - Y_R(k+1)) / (R(k+1) - R(k)) for consecutive records.
std::vector<double> slope_samples(const RecordSequence& records);

struct ValidationConfig {
    std::uint64_t trajectories = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: available parallelism
};

struct ValidationCheck {
    std::string name;
    double statistic = 0.0;
    double theoretical = 0.0;
    double tolerance = 0.0;
    bool relative = false;  // tolerance relative to |theoretical|
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
    std::string to_json() const;
};

/// Monte-Carlo checks of the HASPLID record theory on the uniform range
/// model. Fewer than 1000 trajectories is rejected.
ValidationReport validate_statistics(const ValidationConfig& config);

}  // namespace dmss
