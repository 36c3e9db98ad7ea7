#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmss/objectives.hpp"

namespace dmss {

struct NcgOptions {
    double g_tol = 1e-8;        // native convergence on the gradient 2-norm
    double armijo_c = 1e-4;
    int max_backtracks = 30;
    double cg_rel_tol = 1e-12;  // CG residual relative to ||g||; capped at d iterations
};

/// One Newton-CG iterate. Owned by a single run.
struct NcgState {
    std::vector<double> x;
    double f = 0.0;
    std::vector<double> grad;
    std::uint64_t iteration = 0;
    bool converged = false;
    /// Objective values probed by the last line search; when the step was
    /// accepted the accepted value is last.
    std::vector<double> last_trials;
    bool last_step_accepted = true;
};

double grad_norm(std::span<const double> g);

NcgState ncg_init(const ObjectiveSpec& spec, std::span<const double> x0, OracleCounter& counter,
                  const NcgOptions& opts = {});

/// One outer Newton iteration: truncated CG for H p = -g, projected Armijo
/// backtracking, then the accepted point. A converged state is returned as is.
NcgState ncg_step(const ObjectiveSpec& spec, const NcgState& state, OracleCounter& counter,
                  const NcgOptions& opts = {});

struct NcgTracePoint {
    std::vector<double> x;
    double f;
};

/// Steps until native convergence or `max_iters` steps; includes the start.
std::vector<NcgTracePoint> run_to_convergence(const ObjectiveSpec& spec, std::span<const double> x0,
                                              std::uint64_t max_iters, OracleCounter& counter,
                                              const NcgOptions& opts = {});

}  // namespace dmss
