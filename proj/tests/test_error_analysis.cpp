#include "ftw/error_analysis.hpp"
#include "ftw/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ftw;

namespace {

FocpProblem example1(double mu) {
    FocpProblem pr;
    pr.p = [](double) { return 1.0; };
    pr.q = [](double) { return 1.0; };
    pr.a = [](double) { return -1.0; };
    pr.b = [](double) { return 1.0; };
    pr.x0 = 1.0;
    pr.mu = mu;
    return pr;
}

FocpProblem example3(double mu) {
    FocpProblem pr = example1(mu);
    pr.x0 = 0.0;
    pr.track_x = [mu](double t) { return std::pow(t, mu); };
    pr.track_u = [mu](double t) { return std::pow(t, mu) + std::tgamma(mu + 1.0); };
    return pr;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace

TEST_CASE("lemma2_bound") {
    CHECK(lemma2_bound(0.0, 5) == 0.0);
    CHECK(lemma2_bound(1.0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(lemma2_bound(1.0, 8) == doctest::Approx(1.0 / (40320.0 * 32768.0)).epsilon(1e-12));
    CHECK(lemma2_bound(1.0, 8) == doctest::Approx(7.568843781e-10).epsilon(1e-9));
    for (int m = 1; m <= 20; ++m) {
        const double direct = 3.5 / (factorial(m) * std::pow(2.0, 2 * m - 1));
        CHECK(lemma2_bound(3.5, m) == doctest::Approx(direct).epsilon(1e-12));
    }
    double prev = lemma2_bound(2.0, 1);
    for (int m = 2; m <= 120; ++m) {
        const double cur = lemma2_bound(2.0, m);
        CHECK(cur < prev);
        CHECK(cur > 0.0);
        prev = cur;
    }
    CHECK_THROWS_AS(lemma2_bound(-1.0, 3), DomainError);
    CHECK_THROWS_AS(lemma2_bound(1.0, 0), DomainError);
}

TEST_CASE("cost_gap_bound") {
    CHECK(cost_gap_bound(0.0, 4.0, 2.0, 3) == 0.0);
    CHECK(cost_gap_bound(1.0, 1.0, 1.0, 4) == doctest::Approx(1.0 / 1536.0).epsilon(1e-13));
    CHECK(cost_gap_bound(2.0, 0.5, 0.5, 8) == doctest::Approx(2.0 / (40320.0 * 32768.0)).epsilon(1e-12));
    CHECK_THROWS_AS(cost_gap_bound(1.0, -1.0, 0.0, 2), DomainError);
}

TEST_CASE("analytic family derivatives") {
    const double h = 1e-4;
    for (const auto& f : analytic_family()) {
        CAPTURE(f.name);
        for (double t : {0.1, 0.5, 0.9}) {
            CHECK(f.derivative(0, t) == doctest::Approx(f.value(t)).epsilon(1e-14));
            for (int n = 0; n < 6; ++n) {
                const double fd = (f.derivative(n, t + h) - f.derivative(n, t - h)) / (2.0 * h);
                CHECK(std::abs(fd - f.derivative(n + 1, t)) <= 1e-6 * (1.0 + std::abs(fd)));
            }
        }
    }
    CHECK(analytic_family().size() == 4);
    CHECK(derivative_sup(analytic_family()[0], 7) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("lemma2 holds for a single Taylor block") {
    for (const auto& f : analytic_family()) {
        for (int M = 1; M <= 6; ++M) {
            CAPTURE(f.name);
            CAPTURE(M);
            const auto r = check_lemma2(f, WaveletParams::make(1, M, 1.0, BasisKind::Taylor));
            CHECK(r.m_hat == M);
            CHECK(r.observed > 0.0);
            CHECK(r.satisfied);
        }
    }
}

TEST_CASE("per-block interpolation bound holds for every block count") {
    for (const auto& f : analytic_family()) {
        for (int k = 1; k <= 3; ++k) {
            for (int M = 1; M <= 6; ++M) {
                CAPTURE(f.name);
                CAPTURE(k);
                CAPTURE(M);
                const auto params = WaveletParams::make(k, M, 1.0, BasisKind::Taylor);
                const auto r = check_lemma2(f, params);
                const double width = 1.0 / params.blocks();
                CHECK(r.observed <= block_interpolation_bound(derivative_sup(f, M), M, width));
            }
        }
    }
    CHECK(block_interpolation_bound(1.0, 4, 1.0) == lemma2_bound(1.0, 4));
    CHECK_THROWS_AS(block_interpolation_bound(1.0, 4, 0.0), DomainError);
}

TEST_CASE("convergence_sweep") {
    CHECK(convergence_sweep(example1(1.0), {}).rows.empty());

    const double mu = 0.8;
    const auto pr = example3(mu);
    const std::vector<WaveletParams> configs{WaveletParams::make(1, 2, mu), WaveletParams::make(1, 3, mu),
                                             WaveletParams::make(2, 4, mu)};
    const auto sweep = convergence_sweep(pr, configs, ExactSolution{pr.track_x, pr.track_u, {}});
    REQUIRE(sweep.rows.size() == 3);
    for (const auto& row : sweep.rows) {
        CHECK(*row.err_x_sup <= 1e-6);
        CHECK(*row.err_u_sup <= 1e-6);
        CHECK(*row.err_x_l2 <= 1e-6);
        CHECK(std::abs(row.J) <= 1e-8);
        CHECK_FALSE(row.bound.has_value());
    }

    const std::vector<WaveletParams> unsorted{WaveletParams::make(2, 4, mu), WaveletParams::make(1, 2, mu)};
    CHECK_THROWS_AS(convergence_sweep(pr, unsorted), ConfigError);
}

TEST_CASE("Example 1 cost converges in M") {
    std::vector<WaveletParams> configs;
    for (int M = 3; M <= 6; ++M) {
        configs.push_back(WaveletParams::make(2, M, 1.0));
    }
    const auto& state = analytic_family()[3];
    const RealFunction exact_u = [](double t) {
        const double r2 = std::sqrt(2.0);
        return (1.0 - 0.98 * r2) * std::cosh(r2 * t) + (r2 - 0.98) * std::sinh(r2 * t);
    };
    const auto sweep = convergence_sweep(example1(1.0), configs, ExactSolution{state.value, exact_u, state.derivative});
    CHECK(sweep.monotone_nested);
    CHECK(std::abs(sweep.rows.back().J - 0.192909) <= 1e-6);
    CHECK(std::abs(sweep.rows[3].J - sweep.rows[2].J) <= 1e-8);
    for (const auto& row : sweep.rows) {
        REQUIRE(row.bound.has_value());
        CHECK(*row.bound == lemma2_bound(derivative_sup(state, row.params.m_hat()), row.params.m_hat()));
    }
}

// With two linear blocks the discrete cost lies below the continuous optimum,
// so the sequence starting at M = 2 rises before it settles.
TEST_CASE("Example 1 cost is non-increasing from M = 2" * doctest::should_fail()) {
    std::vector<WaveletParams> configs;
    for (int M = 2; M <= 5; ++M) {
        configs.push_back(WaveletParams::make(2, M, 1.0));
    }
    CHECK(convergence_sweep(example1(1.0), configs).monotone_nested);
}

TEST_CASE("sweep CSV") {
    SweepResult r;
    SweepRow row;
    row.params = WaveletParams::make(2, 4, 0.5, BasisKind::Taylor);
    row.J = 0.1353141234567;
    row.err_x_sup = 1e-3;
    r.rows.push_back(row);
    std::ostringstream out;
    write_sweep_csv(out, r);
    CHECK(out.str() == "k,M,m_hat,mu,basis,J,err_x_sup,err_u_sup,bound\n2,4,8,0.5,tw,0.135314123,0.001,,\n");
}
