#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "dmss/recordmath.hpp"

using namespace dmss;

namespace {

// Oracles below avoid the library's digamma entirely.

// H_x = sum_{n>=1} x / (n (n + x)), valid for non-integer x; tail ~ x / N.
double harmonic_continuous(double x) {
    double acc = 0.0;
    const int n_terms = 2'000'000;
    for (int n = n_terms; n >= 1; --n) acc += x / (double(n) * (double(n) + x));
    return acc + x / (n_terms + 0.5);
}

double euler_gamma_oracle() {
    // H_n - ln n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4), n = 1000.
    const int n = 1000;
    double h = 0.0;
    for (int i = n; i >= 1; --i) h += 1.0 / i;
    const double dn = n;
    return h - std::log(dn) - 1.0 / (2 * dn) + 1.0 / (12 * dn * dn) - 1.0 / (120 * std::pow(dn, 4));
}

double bisect(auto f, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0) == (f(lo) > 0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("digamma matches oracles") {
    const double gamma = euler_gamma_oracle();
    CHECK(gamma == doctest::Approx(0.5772156649).epsilon(1e-10));
    CHECK(std::abs(digamma(1.0) + gamma) < 1e-10);

    double h9 = 0.0;
    for (int i = 1; i <= 9; ++i) h9 += 1.0 / i;
    CHECK(std::abs(digamma(10.0) - (h9 - gamma)) < 1e-10);
    CHECK(std::abs(digamma(10.0) - 2.2517525891) < 1e-10);

    CHECK(digamma(2.0) - digamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : {0.5, 1.0, 2.0, 10.0, 100.0}) {
        CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-12);
    }
    // psi(1/2) = -gamma - 2 ln 2
    CHECK(std::abs(digamma(0.5) - (-gamma - 2.0 * std::log(2.0))) < 1e-10);
}

TEST_CASE("digamma rejects non-positive arguments") {
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-1.5), std::domain_error);
    CHECK_THROWS_AS(digamma(std::nan("")), std::domain_error);
}

TEST_CASE("incomplete gamma G") {
    CHECK(incomplete_gamma_G(0, 3.7) == 1.0);
    CHECK(incomplete_gamma_G(2, 0.0) == 0.0);
    const double x = std::log(100.0);
    CHECK(incomplete_gamma_G(2, x) == doctest::Approx(1.0 - 0.01 * (1.0 + x)).epsilon(1e-14));
    CHECK(incomplete_gamma_G(2, 4.60517) == doctest::Approx(0.9439483).epsilon(1e-7));

    CHECK_THROWS_AS(incomplete_gamma_G(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS(incomplete_gamma_G(1, -0.1), std::domain_error);

    SUBCASE("direct summation agrees on both branches") {
        for (long long n : {1LL, 3LL, 7LL, 15LL, 30LL}) {
            for (double xv : {0.1, 1.0, 2.3026, 6.0, 14.5, 40.0}) {
                double term = std::exp(-xv), head = 0.0;
                for (long long s = 0; s < n; ++s) {
                    head += term;
                    term *= xv / double(s + 1);
                }
                CHECK(std::abs(incomplete_gamma_G(n, xv) - (1.0 - head)) < 1e-12);
            }
        }
    }

    SUBCASE("monotone in both arguments and bounded") {
        for (long long n = 0; n < 25; ++n) {
            double prev = -1.0;
            for (double xv = 0.0; xv < 60.0; xv += 0.37) {
                const double g = incomplete_gamma_G(n, xv);
                CHECK(g >= 0.0);
                CHECK(g <= 1.0);
                CHECK(g >= prev - 1e-15);
                CHECK(incomplete_gamma_G(n + 1, xv) <= g + 1e-15);
                prev = g;
            }
        }
    }
}

TEST_CASE("solve_zeta") {
    SUBCASE("degenerate single-iterate history returns the default") {
        std::vector<RunStats> h{{1, 1}};
        CHECK(solve_zeta(h).value() == 1.0);
    }
    SUBCASE("single run root matches an independent bisection") {
        auto eq = [](double z) {
            return 1.0 - z * (1 / (1 + z) + 1 / (2 + z) + 1 / (3 + z) + 1 / (4 + z));
        };
        const double oracle = bisect(eq, 1e-3, 10.0);
        CHECK(oracle == doctest::Approx(0.694).epsilon(2e-3));
        std::vector<RunStats> h{{2, 5}};
        CHECK(solve_zeta(h).value() == doctest::Approx(oracle).epsilon(1e-9));
        std::vector<RunStats> h2{{2, 5}, {2, 5}};
        CHECK(solve_zeta(h2).value() == doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("no sign change clamps to the nearer endpoint") {
        std::vector<RunStats> all_records{{5, 5}, {3, 3}};
        CHECK(solve_zeta(all_records).value() == Zeta::kMax);
        std::vector<RunStats> no_records{{1, 9}};
        CHECK(solve_zeta(no_records).value() == Zeta::kMin);
    }
    SUBCASE("residual vanishes at the root for random histories") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<RunStats> h;
            const int runs = 1 + int(rng() % 6);
            for (int r = 0; r < runs; ++r) {
                const std::uint64_t j = 1 + rng() % 200;
                const std::uint64_t k = 1 + rng() % j;
                h.emplace_back(k, j);
            }
            const double z = solve_zeta(h).value();
            const double lo = zeta_likelihood_residual(h, Zeta::kMin);
            const double hi = zeta_likelihood_residual(h, Zeta::kMax);
            if ((lo > 0) != (hi > 0) && lo != 0 && hi != 0) {
                double sum_k = 0;
                for (auto& r : h) sum_k += double(r.records_k);
                CHECK(std::abs(zeta_likelihood_residual(h, z)) <= 1e-8 * (1 + sum_k));
                // Same residual through digamma differences.
                double alt = 0;
                for (auto& r : h) {
                    alt += double(r.records_k - 1) +
                           z * (digamma(1 + z) - digamma(double(r.iterates_j) + z));
                }
                CHECK(std::abs(alt) <= 1e-7 * (1 + sum_k));
            }
        }
    }
    CHECK_THROWS_AS(solve_zeta(std::vector<RunStats>{}), std::invalid_argument);
}

TEST_CASE("p_fail") {
    std::vector<std::uint64_t> none;
    CHECK(p_fail(none, 1.0, 0.01) == 1.0);
    std::vector<std::uint64_t> one{2};
    CHECK(p_fail(one, 1.0, 0.01) == doctest::Approx(0.9439483).epsilon(1e-7));
    std::vector<std::uint64_t> two{2, 2};
    CHECK(p_fail(two, 1.0, 0.01) == doctest::Approx(0.8910384).epsilon(1e-7));

    CHECK_THROWS_AS(p_fail(one, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(p_fail(one, 1.0, 1.0), std::domain_error);

    SUBCASE("appending a run strictly decreases p_fail") {
        std::vector<std::uint64_t> ks;
        double prev = p_fail(ks, 0.5, 1e-3);
        for (std::uint64_t k : {1, 4, 2, 7, 3, 1, 5}) {
            ks.push_back(k);
            const double now = p_fail(ks, 0.5, 1e-3);
            CHECK(now < prev);
            prev = now;
        }
    }
}

TEST_CASE("n_record_threshold") {
    CHECK(n_record_threshold(0, Zeta{1.0}) == 1.0);

    const double gamma = euler_gamma_oracle();
    const double oracle = bisect([](double j) { return harmonic_continuous(j) - 2.0; }, 1.0, 10.0);
    CHECK(oracle == doctest::Approx(3.6).epsilon(0.01));
    CHECK(n_record_threshold(1, Zeta{1.0}) == doctest::Approx(oracle).epsilon(1e-7));
    (void)gamma;

    SUBCASE("strictly increasing in the record count") {
        for (double z : {0.1, 0.5, 1.0, 3.0, 50.0}) {
            double prev = 0.0;
            for (std::uint64_t k = 0; k < 30; ++k) {
                const double t = n_record_threshold(k, Zeta{z});
                CHECK(t > prev);
                prev = t;
            }
        }
    }
    SUBCASE("at zeta = 1 expected records equal harmonic numbers") {
        double h = 0.0;
        for (int j = 1; j <= 10000; ++j) {
            h += 1.0 / j;
            if (j % 97 == 0 || j <= 20 || j == 10000) {
                CHECK(std::abs(expected_records(j, Zeta{1.0}) - h) < 1e-10);
            }
        }
    }
    CHECK(std::isinf(n_record_threshold(1000, Zeta{1e-3})));
}

TEST_CASE("ptilde and expected slope") {
    PtildeModel unit{1.0, 1e-12};
    PtildeModel wide{32.0, 1e-12};
    CHECK(ptilde(std::log(2.0), unit) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ptilde(32.0 * std::log(2.0), wide) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ptilde(-5.0, unit) == 1e-12);
    CHECK(ptilde(1e6, unit) == 1.0 - 1e-12);

    CHECK(expected_slope(std::log(2.0), 0.5, Zeta{2.0}, unit) ==
          doctest::Approx(std::sqrt(0.5) / 2.0).epsilon(1e-14));
    CHECK(expected_slope(std::log(2.0), 0.5, Zeta{2.0}, unit) == doctest::Approx(0.35355).epsilon(1e-5));
    CHECK(expected_slope(-5.0, 0.5, Zeta{2.0}, unit) == doctest::Approx(5e-7).epsilon(1e-12));
    CHECK(expected_slope(1e9, 0.5, Zeta{2.0}, unit) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(expected_slope(1.0, 0.0, Zeta{1.0}, unit), std::domain_error);

    double prev = 0.0;
    for (double y = -10.0; y < 50.0; y += 0.25) {
        const double s = expected_slope(y, 0.7, Zeta{1.5}, unit);
        CHECK(s >= prev);
        CHECK(s > 0.0);
        CHECK(s < 1.0 / 1.5);
        prev = s;
    }
}

TEST_CASE("record count pmf") {
    CHECK(record_count_pmf(1, 1, Zeta{0.3}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(record_count_pmf(3, 5, Zeta{1.0}) == 0.0);
    CHECK_THROWS_AS(record_count_pmf(21, 1, Zeta{1.0}), std::out_of_range);
    CHECK(stirling_first_unsigned(3, 2) == 3);
    CHECK(stirling_first_unsigned(20, 1) == 121645100408832000ULL);  // 19!

    SUBCASE("zeta = 1 matches permutation enumeration") {
        for (int j = 1; j <= 7; ++j) {
            std::vector<int> perm(j);
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<double> counts(j + 1, 0.0);
            double total = 0.0;
            do {
                int records = 0, best = j;
                for (int v : perm) {
                    if (v < best) { ++records; best = v; }
                }
                counts[records] += 1.0;
                total += 1.0;
            } while (std::next_permutation(perm.begin(), perm.end()));
            for (int k = 1; k <= j; ++k) {
                CHECK(record_count_pmf(j, k, Zeta{1.0}) == doctest::Approx(counts[k] / total).epsilon(1e-12));
            }
        }
        CHECK(record_count_pmf(3, 2, Zeta{1.0}) == doctest::Approx(0.5));
        CHECK(record_count_pmf(3, 1, Zeta{1.0}) == doctest::Approx(1.0 / 3.0));
        CHECK(record_count_pmf(3, 3, Zeta{1.0}) == doctest::Approx(1.0 / 6.0));
    }
    SUBCASE("rows sum to one and reproduce the expected record count") {
        for (double z : {0.5, 1.0, 2.0}) {
            for (int j = 1; j <= 10; ++j) {
                double sum = 0.0, mean = 0.0;
                for (int k = 1; k <= j; ++k) {
                    const double p = record_count_pmf(j, k, Zeta{z});
                    sum += p;
                    mean += k * p;
                }
                CHECK(std::abs(sum - 1.0) < 1e-12);
                CHECK(mean == doctest::Approx(expected_records(j, Zeta{z})).epsilon(1e-10));
            }
        }
    }
}
