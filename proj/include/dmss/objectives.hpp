#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmss/rng.hpp"

namespace dmss {

enum class ObjectiveId {
    zakharov,
    rosenbrock,
    rotated_hyper_ellipsoid,
    styblinski_tang,
    shifted_sinusoidal,
    centered_sinusoidal,
};

/// Registry ids: zakharov, rosenbrock, rhe, styblinski_tang,
/// shifted_sinusoidal, centered_sinusoidal.
std::string_view objective_name(ObjectiveId id);
ObjectiveId parse_objective(std::string_view name);
std::span<const ObjectiveId> all_objectives();

/// Oracle usage of one run. Never shared between concurrent runs.
struct OracleCounter {
    std::uint64_t f_evals = 0;
    std::uint64_t grad_evals = 0;
    std::uint64_t hvp_evals = 0;
};

/// Benchmark function on a box [lo, hi]^d with its known minimum.
class ObjectiveSpec {
public:
    ObjectiveSpec(ObjectiveId id, int dimension);

    ObjectiveId id() const noexcept { return id_; }
    std::string_view name() const noexcept { return objective_name(id_); }
    int dimension() const noexcept { return dimension_; }
    double lower() const noexcept { return lo_; }
    double upper() const noexcept { return hi_; }
    double known_min_value() const noexcept { return f_star_; }
    const std::vector<double>& known_min_location() const noexcept { return x_star_; }

    double value(std::span<const double> x) const;
    void gradient(std::span<const double> x, std::span<double> out) const;
    void hessian_vector(std::span<const double> x, std::span<const double> v, std::span<double> out) const;

    /// Projection onto the box.
    void clip(std::span<double> x) const;

private:
    void check_dim(std::size_t n) const;

    ObjectiveId id_;
    int dimension_;
    double lo_;
    double hi_;
    double f_star_;
    std::vector<double> x_star_;
};

double evaluate(const ObjectiveSpec& spec, std::span<const double> x, OracleCounter& counter);
std::vector<double> gradient(const ObjectiveSpec& spec, std::span<const double> x, OracleCounter& counter);
std::vector<double> hessian_vector_product(const ObjectiveSpec& spec, std::span<const double> x,
                                           std::span<const double> v, OracleCounter& counter);

std::vector<double> sample_uniform(const ObjectiveSpec& spec, Rng& rng);

}  // namespace dmss
