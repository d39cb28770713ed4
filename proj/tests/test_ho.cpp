#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rfsquid/ho.hpp"

using namespace rfsquid;

TEST_CASE("displaced overlap trivial values") {
    // Gaussian ground-state overlap.
    for (double d : {0.0, 0.5, 1.7, 3.0})
        CHECK(displaced_overlap(0, 0, d) == doctest::Approx(std::exp(-d * d / 4.0)).epsilon(1e-12));
    // Orthonormality at zero displacement.
    for (int n = 0; n <= 6; ++n)
        for (int m = 0; m <= 6; ++m)
            CHECK(displaced_overlap(n, m, 0.0) == doctest::Approx(n == m ? 1.0 : 0.0));
    CHECK_THROWS_AS(displaced_overlap(-1, 0, 1.0), std::domain_error);
}

TEST_CASE("displaced overlap matches quadrature") {
    // (2, 5, 1.3) is the frozen spot check.
    CHECK(displaced_overlap(2, 5, 1.3) ==
          doctest::Approx(oracles::overlap_quadrature(2, 5, 1.3)).epsilon(1e-8));
    for (int n = 0; n <= 10; ++n)
        for (int m = 0; m <= 10; ++m)
            for (double d : {0.4, 1.6, 3.0}) {
                const double got = displaced_overlap(n, m, d);
                const double want = oracles::overlap_quadrature(n, m, d);
                CHECK(std::abs(got - want) < 1e-8);
            }
}

TEST_CASE("completeness of the displaced ladder") {
    for (int n = 0; n <= 5; ++n)
        for (double d : {0.5, 1.5, 3.0}) {
            double total = 0.0;
            for (int m = 0; m <= 80; ++m) {
                const double ov = displaced_overlap(n, m, d);
                total += ov * ov;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
        }
}

TEST_CASE("overlap symmetry under index swap and displacement flip") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ds(-3.0, 3.0);
    std::uniform_int_distribution<int> levels(0, 12);
    for (int i = 0; i < 300; ++i) {
        const int n = levels(rng), m = levels(rng);
        const double d = ds(rng);
        const double a = displaced_overlap(n, m, d);
        const double b = displaced_overlap(m, n, -d);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        CHECK(std::abs(std::abs(a) - std::abs(displaced_overlap(m, n, d))) < 1e-12);
        CHECK(std::abs(a) <= 1.0 + 1e-12);
    }
}

TEST_CASE("log-space overlaps survive extreme displacements") {
    // Far below double underflow for low indices, back to finite near the
    // Franck-Condon peak at m = d^2/2.
    const double d = 51.0;
    const auto tiny = displaced_overlap_log(0, 0, d);
    CHECK(tiny.sign == 1);
    CHECK(tiny.log_mag == doctest::Approx(-d * d / 4.0).epsilon(1e-12));
    CHECK(displaced_overlap(0, 0, 60.0) == 0.0); // e^{-900} underflows as a double
    CHECK(displaced_overlap_log(0, 0, 60.0).log_mag == doctest::Approx(-900.0));

    const int peak = static_cast<int>(d * d / 2.0);
    const auto big = displaced_overlap_log(0, peak, d);
    CHECK(big.sign == 1);
    // Poisson pmf at the mean: |ov|^2 ~ 1/sqrt(2 pi lambda).
    const double lambda = d * d / 2.0;
    CHECK(big.log_mag == doctest::Approx(-0.25 * std::log(2.0 * M_PI * lambda)).epsilon(0.05));

    // Identity: |ov(0,m,d)|^2 is the Poisson(lambda) pmf at m.
    for (int m : {800, 1100, 1300, 1500}) {
        const auto lv = displaced_overlap_log(0, m, d);
        const double log_pmf = -lambda + m * std::log(lambda) - std::lgamma(m + 1.0);
        CHECK(2.0 * lv.log_mag == doctest::Approx(log_pmf).epsilon(1e-10));
    }
}

TEST_CASE("displacement matrix is a consistent unitary block") {
    const double g = 0.9;
    const auto u = displacement_matrix(g, 40);
    // Rows of a truncated unitary have norm <= 1, approaching 1 away from
    // the truncation edge.
    for (int r = 0; r < 10; ++r) {
        const double norm = u.row(r).squaredNorm();
        CHECK(norm <= 1.0 + 1e-12);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    }
    // D(g) D(-g) = identity on the well-converged block.
    const auto uinv = displacement_matrix(-g, 40);
    const auto prod = (u * uinv).topLeftCorner(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
}
