#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dmss/newton_cg.hpp"
#include "dmss/rng.hpp"

using namespace dmss;

TEST_CASE("init") {
    const ObjectiveSpec zak(ObjectiveId::zakharov, 5);
    OracleCounter c;
    auto s = ncg_init(zak, zak.known_min_location(), c);
    CHECK(s.converged);
    CHECK(c.f_evals == 1);
    CHECK(c.grad_evals == 1);

    s = ncg_init(zak, std::vector<double>(5, 1.0), c);
    CHECK(std::isfinite(s.f));
    CHECK_FALSE(s.converged);

    s = ncg_init(zak, std::vector<double>{-50, 0, 0, 0, 99}, c);
    CHECK(s.x == std::vector<double>{-5, 0, 0, 0, 10});
    CHECK(s.f == zak.value(s.x));

    auto again = ncg_step(zak, ncg_init(zak, zak.known_min_location(), c), c);
    CHECK(again.converged);
    CHECK(again.iteration == 0);
}

TEST_CASE("one step on the rotated hyper-ellipsoid") {
    for (int d : {2, 5, 11, 25}) {
        const ObjectiveSpec rhe(ObjectiveId::rotated_hyper_ellipsoid, d);
        Rng rng(derive_seed(23, d));
        for (int t = 0; t < 10; ++t) {
            OracleCounter c;
            const auto trace = run_to_convergence(rhe, sample_uniform(rhe, rng), 50, c);
            CAPTURE(d);
            CHECK(trace.size() == 2);
            auto s = ncg_step(rhe, ncg_init(rhe, trace.front().x, c), c);
            CHECK(s.converged);
            CHECK(grad_norm(s.grad) <= 1e-8);
        }
    }
}

TEST_CASE("rosenbrock from the classical start") {
    const ObjectiveSpec ros(ObjectiveId::rosenbrock, 2);
    OracleCounter c;
    const auto trace = run_to_convergence(ros, std::vector<double>{-1.2, 1.0}, 100, c);
    CHECK(trace.size() <= 101);
    CHECK(trace.back().x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(trace.back().x[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(trace.back().f <= 1e-12);
    // Regression baseline for this engine.
    CHECK(trace.size() - 1 == 21);
}

TEST_CASE("monotone descent, box feasibility, determinism") {
    for (auto id : all_objectives()) {
        const ObjectiveSpec spec(id, 5);
        Rng rng(derive_seed(31, static_cast<std::uint64_t>(id)));
        for (int t = 0; t < 20; ++t) {
            const auto x0 = sample_uniform(spec, rng);
            OracleCounter a, b;
            const auto ta = run_to_convergence(spec, x0, 200, a);
            const auto tb = run_to_convergence(spec, x0, 200, b);
            REQUIRE(ta.size() == tb.size());
            for (std::size_t i = 0; i < ta.size(); ++i) {
                CHECK(ta[i].x == tb[i].x);
                if (i > 0) CHECK(ta[i].f < ta[i - 1].f);
                for (double v : ta[i].x) CHECK((v >= spec.lower() && v <= spec.upper()));
            }
            CHECK(a.f_evals == b.f_evals);
            CHECK(a.hvp_evals == b.hvp_evals);
        }
    }
}

TEST_CASE("line-search probes are counted") {
    const ObjectiveSpec spec(ObjectiveId::styblinski_tang, 5);
    Rng rng(4);
    OracleCounter c;
    auto s = ncg_init(spec, sample_uniform(spec, rng), c);
    std::uint64_t probes = 1;
    while (!s.converged) {
        s = ncg_step(spec, s, c);
        probes += s.last_trials.size();
        if (s.last_step_accepted) CHECK(s.last_trials.back() == s.f);
    }
    CHECK(c.f_evals == probes);
}
