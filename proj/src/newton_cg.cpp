#include "dmss/newton_cg.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmss {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Truncated CG on H p = -g. Falls back to a scaled steepest-descent step when
// the very first direction has non-positive curvature.
std::vector<double> newton_direction(const ObjectiveSpec& spec, const NcgState& s, OracleCounter& counter,
                                     const NcgOptions& opts) {
    const std::size_t n = s.x.size();
    std::vector<double> p(n, 0.0);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = -s.grad[i];
    std::vector<double> d = r;

    const double g_norm = grad_norm(s.grad);
    double rr = dot(r, r);
    for (std::size_t it = 0; it < n; ++it) {
        if (std::sqrt(rr) <= opts.cg_rel_tol * g_norm) break;
        const auto hd = hessian_vector_product(spec, s.x, d, counter);
        const double curv = dot(d, hd);
        if (curv <= 0.0) {
            if (it == 0) {
                const double scale = curv < 0.0 ? rr / -curv : 1.0;
                for (std::size_t i = 0; i < n; ++i) p[i] = scale * d[i];
            }
            break;
        }
        const double step = rr / curv;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] += step * d[i];
            r[i] -= step * hd[i];
        }
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
    }
    if (!(dot(p, s.grad) < 0.0)) {
        for (std::size_t i = 0; i < n; ++i) p[i] = -s.grad[i];
    }
    return p;
}

}  // namespace

double grad_norm(std::span<const double> g) { return std::sqrt(dot(g, g)); }

NcgState ncg_init(const ObjectiveSpec& spec, std::span<const double> x0, OracleCounter& counter,
                  const NcgOptions& opts) {
    NcgState s;
    s.x.assign(x0.begin(), x0.end());
    spec.clip(s.x);
    s.f = evaluate(spec, s.x, counter);
    if (!std::isfinite(s.f)) throw std::domain_error("objective is not finite at the start point");
    s.grad = gradient(spec, s.x, counter);
    s.converged = grad_norm(s.grad) <= opts.g_tol;
    s.last_trials = {s.f};
    return s;
}

NcgState ncg_step(const ObjectiveSpec& spec, const NcgState& state, OracleCounter& counter,
                  const NcgOptions& opts) {
    if (state.converged) return state;

    const auto p = newton_direction(spec, state, counter, opts);
    const std::size_t n = state.x.size();

    NcgState next = state;
    next.last_trials.clear();
    double t = 1.0;
    std::vector<double> trial(n);
    for (int bt = 0; bt <= opts.max_backtracks; ++bt, t *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = state.x[i] + t * p[i];
        spec.clip(trial);
        double decrease = 0.0;  // g^T (trial - x), negative along a descent step
        for (std::size_t i = 0; i < n; ++i) decrease += state.grad[i] * (trial[i] - state.x[i]);
        const double f_trial = evaluate(spec, trial, counter);
        next.last_trials.push_back(f_trial);
        if (f_trial < state.f && f_trial <= state.f + opts.armijo_c * decrease) {
            next.x = trial;
            next.f = f_trial;
            next.grad = gradient(spec, next.x, counter);
            next.iteration = state.iteration + 1;
            next.converged = grad_norm(next.grad) <= opts.g_tol;
            next.last_step_accepted = true;
            return next;
        }
    }
    // No acceptable decrease: the search has stalled at this point.
    next.last_step_accepted = false;
    next.converged = true;
    return next;
}

std::vector<NcgTracePoint> run_to_convergence(const ObjectiveSpec& spec, std::span<const double> x0,
                                              std::uint64_t max_iters, OracleCounter& counter,
                                              const NcgOptions& opts) {
    auto s = ncg_init(spec, x0, counter, opts);
    std::vector<NcgTracePoint> trace{{s.x, s.f}};
    for (std::uint64_t it = 0; it < max_iters && !s.converged; ++it) {
        s = ncg_step(spec, s, counter, opts);
        if (!s.last_step_accepted) break;
        trace.push_back({s.x, s.f});
    }
    return trace;
}

}  // namespace dmss
