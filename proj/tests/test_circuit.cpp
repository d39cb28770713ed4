#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rfsquid/circuit.hpp"
#include "rfsquid/cpr.hpp"
#include "rfsquid/dilog.hpp"
#include "rfsquid/errors.hpp"
#include "rfsquid/units.hpp"

using namespace rfsquid;

TEST_CASE("inductance and charging energy conversions") {
    // Values frozen from evaluating the defining expressions with the
    // CODATA constants.
    CHECK(inductance_to_energy(8.0) == doctest::Approx(2.0433e4).epsilon(1e-3));
    CHECK(capacitance_to_charging_energy(10.0) == doctest::Approx(0.9685).epsilon(1e-3));
    // Parallel plate combination quoted as 7.4 MHz.
    CHECK(capacitance_to_charging_energy(10.0 + 2.0 * 646.0) ==
          doctest::Approx(7.4e-3).epsilon(2e-2));

    // Exact 1/L and 1/C scaling.
    CHECK(inductance_to_energy(16.0) == doctest::Approx(0.5 * inductance_to_energy(8.0)));
    CHECK(capacitance_to_charging_energy(20.0) ==
          doctest::Approx(0.5 * capacitance_to_charging_energy(10.0)));

    // Round trips.
    CHECK(inductance_to_energy(energy_to_inductance(452.0)) == doctest::Approx(452.0));
    CHECK(charging_energy_to_capacitance(capacitance_to_charging_energy(646.0)) ==
          doctest::Approx(646.0));

    CHECK_THROWS_AS(inductance_to_energy(0.0), std::domain_error);
    CHECK_THROWS_AS(inductance_to_energy(-1.0), std::domain_error);
    CHECK_THROWS_AS(capacitance_to_charging_energy(-2.0), std::domain_error);

    CHECK(beta_ratio(362.0, 100.0) == doctest::Approx(3.62));
}

TEST_CASE("spec validation") {
    CircuitSpec spec;
    spec.e_c_sigma = 7.4e-3;
    spec.e_c_delta = 0.97;
    spec.e_ls = 568.0;
    spec.e_lp = 452.0;
    spec.weak_link = JosephsonLink{973.0, 1.0 - 5e-5};
    CHECK_NOTHROW(validate(spec));

    auto bad = spec;
    bad.e_c_sigma = 2.0; // heavier than e_c_delta
    CHECK_THROWS_AS(validate(bad), std::domain_error);

    bad = spec;
    std::get<JosephsonLink>(bad.weak_link).chi = 1.5;
    CHECK_THROWS_AS(validate(bad), std::domain_error);

    bad = spec;
    bad.e_lp = 0.0;
    CHECK_THROWS_AS(validate(bad), std::domain_error);

    PhysicalElements elems{646.0, 10.0, 362.0, 288.0, 8.0};
    const auto derived = to_circuit_spec(elems, PhaseSlipLink{60.0, inductance_to_energy(8.0)});
    CHECK(derived.e_c_delta == doctest::Approx(0.9685).epsilon(1e-3));
    CHECK(derived.e_c_sigma < derived.e_c_delta);
}

TEST_CASE("dilog reference values") {
    CHECK(dilog({1.0, 0.0}).real() == doctest::Approx(pi * pi / 6.0).epsilon(1e-14));
    CHECK(dilog({-1.0, 0.0}).real() == doctest::Approx(-pi * pi / 12.0).epsilon(1e-14));
    CHECK(dilog({0.5, 0.0}).real() ==
          doctest::Approx(pi * pi / 12.0 - 0.5 * std::log(2.0) * std::log(2.0)).epsilon(1e-14));

    // Plain series comparison inside the convergence disk.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> radius(0.0, 0.6), angle(-pi, pi);
    for (int i = 0; i < 200; ++i) {
        const std::complex<double> z = std::polar(radius(rng), angle(rng));
        std::complex<double> direct = 0.0, zk = z;
        for (int k = 1; k < 200; ++k) {
            direct += zk / double(k * k);
            zk *= z;
        }
        CHECK(std::abs(dilog(z) - direct) < 1e-13);
    }
}

TEST_CASE("cpr trivial values") {
    CHECK(cpr_energy(0.0, 1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(cpr_current(pi / 2.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cpr_curvature(0.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    // Sawtooth limit identities.
    CHECK(cpr_energy(pi, 1.0, 1.0) == doctest::Approx(pi * pi / 3.0).epsilon(1e-12));
    CHECK(cpr_curvature(0.3, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cpr_curvature(-2.9, 5.0, 1.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(cpr_current(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    // Curvature root at cos(phi) = -chi.
    CHECK(cpr_curvature(std::acos(-0.5), 1.0, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::acos(-0.5) == doctest::Approx(2.0 * pi / 3.0));

    CHECK_THROWS_AS(cpr_energy(0.0, 1.0, 1.1), std::domain_error);
    CHECK_THROWS_AS(cpr_energy(0.0, 1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(cpr_current(pi, 1.0, 1.0), singular_point_error);
    CHECK_THROWS_AS(cpr_curvature(3.0 * pi, 1.0, 1.0), singular_point_error);
}

TEST_CASE("cpr matches the brute-force series") {
    // Frozen from the identity sum (-1)^{k-1} cos(k phi)/k^2 = pi^2/12 - phi^2/4
    // on [-pi, pi]: the sawtooth energy at phi = pi is exactly pi^2/3.
    CHECK(-2.0 * (pi * pi / 12.0 - pi * pi / 4.0) == doctest::Approx(pi * pi / 3.0));
    CHECK(cpr_energy(pi, 1.0, 1.0) == doctest::Approx(pi * pi / 3.0).epsilon(1e-12));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> phis(-2.0 * pi, 2.0 * pi);
    for (double chi : {0.0, 0.3, 0.9, 1.0 - 5e-5}) {
        for (int i = 0; i < 40; ++i) {
            const double phi = phis(rng);
            const auto ref = oracles::cpr_series(phi, 973.0, chi);
            CHECK(cpr_energy(phi, 973.0, chi) ==
                  doctest::Approx(ref.energy).epsilon(1e-9).scale(973.0));
            CHECK(cpr_current(phi, 973.0, chi) ==
                  doctest::Approx(ref.current).epsilon(1e-9).scale(973.0));
            CHECK(cpr_curvature(phi, 973.0, chi) ==
                  doctest::Approx(ref.curvature).epsilon(1e-9).scale(973.0));
        }
    }

    // The named example point from the skewed-junction parameter set.
    const auto ref = oracles::cpr_series(0.7, 973.0, 1.0 - 5e-5);
    CHECK(cpr_energy(0.7, 973.0, 1.0 - 5e-5) == doctest::Approx(ref.energy).epsilon(1e-9));

    // Cesaro-summed series at the sawtooth point.
    CHECK(oracles::cesaro_sawtooth_current(1.0, 1.0, 2'000'000) ==
          doctest::Approx(1.0).epsilon(2e-5));
}

TEST_CASE("cpr periodicity and parity properties") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> phis(-10.0, 10.0), chis(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double phi = phis(rng);
        double chi = chis(rng);
        if (std::abs(std::abs(wrap_phase(phi)) - pi) < 1e-3) continue;
        CHECK(std::abs(cpr_energy(phi + two_pi, 1.0, chi) - cpr_energy(phi, 1.0, chi)) < 1e-9);
        CHECK(std::abs(cpr_energy(-phi, 1.0, chi) - cpr_energy(phi, 1.0, chi)) < 1e-9);
        CHECK(std::abs(cpr_current(-phi, 1.0, chi) + cpr_current(phi, 1.0, chi)) < 1e-9);
        CHECK(std::abs(cpr_curvature(-phi, 1.0, chi) - cpr_curvature(phi, 1.0, chi)) < 1e-9);
    }
}

TEST_CASE("cpr derivative consistency") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> phis(-pi + 0.15, pi - 0.15), chis(0.0, 0.999);
    for (int i = 0; i < 100; ++i) {
        const double phi = phis(rng);
        const double chi = chis(rng);
        const double h = 1e-5;
        const double fd1 = oracles::central_diff(
            [&](double x) { return cpr_energy(x, 1.0, chi); }, phi, h);
        const double fd2 = oracles::central_second_diff(
            [&](double x) { return cpr_energy(x, 1.0, chi); }, phi, h);
        CHECK(cpr_current(phi, 1.0, chi) == doctest::Approx(fd1).epsilon(1e-5).scale(1.0));
        CHECK(cpr_curvature(phi, 1.0, chi) == doctest::Approx(fd2).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("sawtooth pointwise limit") {
    for (double phi : {-2.8, -1.0, -0.2, 0.7, 1.9, 3.0}) {
        const double limit = cpr_current(phi, 1.0, 1.0);
        CHECK(std::abs(cpr_current(phi, 1.0, 1.0 - 1e-6) - limit) < 1e-4);
    }
}
