#include <cmath>
#include <limits>

#include <doctest.h>

#include "oracles.hpp"
#include "pgrestore/likelihood.hpp"

using namespace pgr;

namespace {
const NoiseModel kUnit{1.0, 1.0, 0.0, 1.0};
}

TEST_CASE("s_delta basics") {
    SUBCASE("a = 0 leaves only the floor term") {
        NoiseModel m{1.0, 2.0, 0.0, 1.0};
        auto out = s_delta(0.0, 3.0, 6.0, m);
        CHECK(out.s_val == doctest::Approx(std::exp(-9.0 / 8.0)).epsilon(1e-14));
        CHECK(out.n_star == 0);
    }
    SUBCASE("matches the direct series at delta = 8") {
        auto out = s_delta(5.0, 5.0, 8.0, kUnit);
        double want = oracle::series(5.0, 5.0, kUnit, 200);
        CHECK(out.s_val == doctest::Approx(want).epsilon(1e-12));
    }
    SUBCASE("wider windows only add nonnegative terms") {
        NoiseModel m{1.0, 2.0, 0.0, 1.0};
        CHECK(s_delta(3.0, 2.0, 10.0, m).s_val >= s_delta(3.0, 2.0, 4.0, m).s_val);
    }
    SUBCASE("window invariants") {
        auto out = s_delta(7.0, 9.0, 4.0, kUnit);
        CHECK(out.trunc_lo <= out.n_star);
        CHECK(out.n_star <= out.trunc_hi);
        CHECK(out.s_val >= std::exp(-0.5 * 81.0));  // the n = 0 floor term
        CHECK(std::exp(out.log_s) == doctest::Approx(out.s_val).epsilon(1e-14));
    }
    SUBCASE("negative a is a domain error") {
        CHECK_THROWS_AS(s_delta(-1.0, 0.0, 4.0, kUnit), std::domain_error);
    }
    SUBCASE("large arguments stay finite in log space") {
        NoiseModel m{1.0, 1.0, 0.0, 1.0};
        auto out = s_delta(30.0, 35.0, 40.0, m);
        CHECK(std::isfinite(out.log_s));
        auto far = s_delta(30.0, -40.0, 40.0, m);
        CHECK(std::isfinite(far.log_s));
    }
}

TEST_CASE("grad1_delta") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    SUBCASE("matches central finite differences of the exact objective") {
        double h = 1e-5;
        double fd = (oracle::neg_log_lik(4.0 + h, 6.0, m) -
                     oracle::neg_log_lik(4.0 - h, 6.0, m)) /
                    (2.0 * h);
        double got = grad1_delta(4.0, 6.0, 10.0, m);
        CHECK(got == doctest::Approx(fd).epsilon(1e-6));
    }
    SUBCASE("near zero at the unconstrained minimizer") {
        Bounds b{0.0, 20.0, 20.0};
        double mstar = oracle::grid_argmin(
            [&](double x) { return oracle::neg_log_lik(std::max(x, 1e-9), 6.0, m); }, 0.0,
            20.0, 1e-5);
        double delta = 10.0;
        double slack = error_bound(6.0, delta, b, m) + 1e-3;  // 1e-3 grid slack
        CHECK(std::abs(grad1_delta(mstar, 6.0, delta, m)) <= slack);
    }
    SUBCASE("agrees with the untruncated ratio at high delta") {
        NoiseModel wide{1.0, 6.0, 0.0, 1.0};
        double want = 1.0 - oracle::series(5.0, 4.0, wide) / oracle::series(5.0, 5.0, wide);
        CHECK(grad1_delta(5.0, 5.0, 40.0, wide) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("grad2_delta") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    SUBCASE("matches second central differences") {
        double h = 1e-4;
        double fd = (oracle::neg_log_lik(4.0 + h, 6.0, m) -
                     2.0 * oracle::neg_log_lik(4.0, 6.0, m) +
                     oracle::neg_log_lik(4.0 - h, 6.0, m)) /
                    (h * h);
        CHECK(grad2_delta(4.0, 6.0, 10.0, m) == doctest::Approx(fd).epsilon(1e-4));
    }
    SUBCASE("finite and nonnegative at the upper bound") {
        double v = grad2_delta(20.0, 6.0, 40.0, m);
        CHECK(std::isfinite(v));
        CHECK(v >= -1e-8);
    }
    SUBCASE("truncation self-consistency") {
        NoiseModel m15{1.0, 1.5, 0.0, 1.0};
        CHECK(std::abs(grad2_delta(3.0, 4.0, 6.0, m15) -
                       grad2_delta(3.0, 4.0, 12.0, m15)) <= 1e-6);
    }
}

TEST_CASE("zeta_delta and the epsilon-subgradient inequality") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    CHECK(zeta_delta(3.0, 6.0, 1.0, 0.0, 10.0, m) ==
          doctest::Approx(grad1_delta(3.0, 6.0, 10.0, m)));
    CHECK(zeta_delta(3.0, 6.0, 3.0, 2.0, 10.0, m) ==
          doctest::Approx(grad1_delta(3.0, 6.0, 10.0, m)));

    Bounds b{0.0, 10.0, 10.0};
    double beta = 1.0, m_bar = 4.0, m_prime = 6.0, delta = 8.0;
    double eps = error_bound(m_prime, delta, b, m) * (b.u - b.l);
    for (double x = b.l; x <= b.u + 1e-9; x += 0.5) {
        double zx = zeta_delta(x, m_prime, m_bar, beta, delta, m);
        double lx = oracle::prox_objective(std::max(x, 1e-12), m_prime, m_bar, beta, m);
        for (double x1 = b.l; x1 <= b.u + 1e-9; x1 += 0.5) {
            double lx1 =
                oracle::prox_objective(std::max(x1, 1e-12), m_prime, m_bar, beta, m);
            CHECK(lx1 >= lx + zx * (x1 - x) - eps - 1e-9);
        }
    }
}

TEST_CASE("eta_delta projection cases") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    Bounds b{0.0, 12.0, 12.0};
    // interior: unchanged
    CHECK(eta_delta(5.0, 6.0, 4.0, 1.0, 8.0, m, b) ==
          doctest::Approx(zeta_delta(5.0, 6.0, 4.0, 1.0, 8.0, m)));
    // at the lower bound a positive zeta is clipped to zero
    double z_at_l = zeta_delta(0.0, -3.0, -5.0, 1.0, 8.0, m);
    REQUIRE(z_at_l > 0.0);
    CHECK(eta_delta(0.0, -3.0, -5.0, 1.0, 8.0, m, b) == 0.0);
    // at the upper bound a negative zeta is clipped
    double z_at_u = zeta_delta(12.0, 30.0, 25.0, 1.0, 12.0, m);
    REQUIRE(z_at_u < 0.0);
    CHECK(eta_delta(12.0, 30.0, 25.0, 1.0, 12.0, m, b) == 0.0);

    SUBCASE("small at the constrained minimizer") {
        double beta = 1.0, m_bar = 4.0, m_prime = 6.0, delta = 10.0;
        double mstar = oracle::grid_argmin(
            [&](double x) {
                return oracle::prox_objective(std::max(x, 1e-12), m_prime, m_bar, beta, m);
            },
            b.l, b.u, 1e-5);
        double slack = error_bound(m_prime, delta, b, m) + 1e-3;
        CHECK(std::abs(eta_delta(mstar, m_prime, m_bar, beta, delta, m, b)) <= slack);
    }
}

TEST_CASE("error_bound") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    Bounds b{0.0, 8.0, 8.0};
    SUBCASE("bounds the empirical truncation error") {
        double ref = grad1_delta(3.0, 5.0, 40.0, m);
        for (double delta : {2.0, 4.0, 6.0, 8.0}) {
            double emp = std::abs(grad1_delta(3.0, 5.0, delta, m) - ref);
            CHECK(emp <= error_bound(5.0, delta, b, m));
        }
    }
    SUBCASE("monotone nonincreasing in delta, vanishing in the limit") {
        double prev = std::numeric_limits<double>::infinity();
        for (double delta : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
            double v = error_bound(5.0, delta, b, m);
            CHECK(v <= prev);
            prev = v;
        }
        CHECK(error_bound(5.0, 40.0, b, m) < 1e-200);
    }
    SUBCASE("overflow returns the +inf marker instead of garbage") {
        NoiseModel tiny{1.0, 0.05, 0.0, 1.0};
        Bounds big{0.0, 500.0, 500.0};
        double v = error_bound(30.0, 2.0, big, tiny);
        CHECK(std::isinf(v));
        CHECK(v > 0.0);
    }
    SUBCASE("vector form scales with sqrt(N)") {
        Image mp(4, 4, 5.0);
        double scalar = error_bound(5.0, 6.0, b, m);
        CHECK(vector_error_bound(mp, 6.0, b, m) ==
              doctest::Approx(4.0 * scalar).epsilon(1e-10));
    }
}

TEST_CASE("neg_log_likelihood") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    Bounds b{0.0, 10.0, 10.0};
    SUBCASE("out-of-bound pixels give +inf") {
        Image mm(2, 2, 5.0), mp(2, 2, 4.0);
        mm.at(1, 1) = 11.0;
        CHECK(std::isinf(neg_log_likelihood(mm, mp, 40.0, m, b)));
    }
    SUBCASE("single pixel matches the direct series including the constant") {
        Image mm(1, 1, 4.0), mp(1, 1, 6.0);
        double want = oracle::neg_log_lik(4.0, 6.0, m);
        CHECK(neg_log_likelihood(mm, mp, 40.0, m, b) ==
              doctest::Approx(want).epsilon(1e-10));
    }
    SUBCASE("additive over pixels") {
        Image m1(1, 1, 4.0), p1(1, 1, 6.0);
        Image m2(1, 1, 2.0), p2(1, 1, 1.0);
        Image mb(2, 1), pb(2, 1);
        mb.at(0, 0) = 4.0; mb.at(1, 0) = 2.0;
        pb.at(0, 0) = 6.0; pb.at(1, 0) = 1.0;
        CHECK(neg_log_likelihood(mb, pb, 40.0, m, b) ==
              doctest::Approx(neg_log_likelihood(m1, p1, 40.0, m, b) +
                              neg_log_likelihood(m2, p2, 40.0, m, b))
                  .epsilon(1e-12));
    }
}

TEST_CASE("grad1 is nondecreasing in m up to truncation slack") {
    NoiseModel m{1.0, 2.0, 0.0, 1.0};
    Bounds b{0.0, 10.0, 10.0};
    double delta = 12.0;
    double slack = 2.0 * error_bound(6.0, delta, b, m) + 1e-9;
    double prev = -std::numeric_limits<double>::infinity();
    for (double x = 0.25; x <= 10.0; x += 0.25) {
        double v = grad1_delta(x, 6.0, delta, m);
        CHECK(v >= prev - slack);
        prev = v;
    }
}

TEST_CASE("log_erfc") {
    for (double z : {0.0, 0.5, 1.0, 3.0, 8.0, 20.0}) {
        CHECK(log_erfc(z) == doctest::Approx(std::log(std::erfc(z))).epsilon(1e-10));
    }
    // asymptotic branch: finite, monotone, consistent across the switchover
    double prev = log_erfc(24.0);
    for (double z : {25.0, 26.0, 50.0, 100.0}) {
        double v = log_erfc(z);
        CHECK(std::isfinite(v));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(log_erfc(25.0) == doctest::Approx(-25.0 * 25.0 -
                                            std::log(25.0 * std::sqrt(std::acos(-1.0))))
                                .epsilon(1e-3));
}
