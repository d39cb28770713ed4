#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rfsquid/errors.hpp"
#include "rfsquid/landscape.hpp"
#include "rfsquid/units.hpp"

using namespace rfsquid;

namespace {

CircuitSpec jj_spec(double e0 = 973.0, double chi = 1.0 - 5e-5) {
    CircuitSpec spec;
    spec.e_c_sigma = 7.4e-3;
    spec.e_c_delta = 0.97;
    spec.e_ls = 568.0;
    spec.e_lp = 452.0;
    spec.weak_link = JosephsonLink{e0, chi};
    return spec;
}

CircuitSpec qps_spec() {
    CircuitSpec spec;
    spec.e_c_sigma = 5.2e-3;
    spec.e_c_delta = 0.97;
    spec.e_ls = 840.0;
    spec.e_lp = 305.0;
    spec.weak_link = PhaseSlipLink{60.0, inductance_to_energy(8.0)};
    return spec;
}

// Sawtooth-limit well minimum from the piecewise-quadratic stationarity
// condition: E_LP (s - 2 pi Phi) + E0 (s - 2 pi n) = 0.
double sawtooth_minimum_s(const CircuitSpec& spec, double flux, int n) {
    const double e0 = std::get<JosephsonLink>(spec.weak_link).e0;
    return two_pi * (spec.e_lp * flux + e0 * n) / (spec.e_lp + e0);
}

} // namespace

TEST_CASE("potential value and symmetry") {
    auto spec = jj_spec(1.0, 0.0);
    const auto field = build_potential(spec, FluxPoint{0.0});
    CHECK(field.dimensionality() == 2);
    // Global minimum at the origin with value -E0 for the plain cosine.
    CHECK(field.value(0.0, 0.0) == doctest::Approx(-1.0));
    CHECK(field.gradient(0.0, 0.0).norm() < 1e-12);

    const auto qfield = build_potential(qps_spec(), FluxPoint{0.0});
    CHECK(qfield.dimensionality() == 3);
    CHECK(qfield.value(0.0, 0.0, 0) == doctest::Approx(0.0));
}

TEST_CASE("analytic gradient matches finite differences") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coords(-6.0, 6.0), fluxes(-1.5, 1.5);
    const auto spec = jj_spec(973.0, 0.9);
    for (int i = 0; i < 100; ++i) {
        const auto field = build_potential(spec, FluxPoint{fluxes(rng)});
        const double sg = coords(rng), dl = coords(rng);
        const auto g = field.gradient(sg, dl);
        const double h = 1e-5;
        const double fd_s = oracles::central_diff(
            [&](double x) { return field.value(x, dl); }, sg, h);
        const double fd_d = oracles::central_diff(
            [&](double x) { return field.value(sg, x); }, dl, h);
        CHECK(g(0) == doctest::Approx(fd_s).epsilon(1e-4));
        CHECK(g(1) == doctest::Approx(fd_d).epsilon(1e-4));

        const auto hess = field.hessian(sg, dl);
        const double fd_ss = oracles::central_second_diff(
            [&](double x) { return field.value(x, dl); }, sg, 1e-4);
        CHECK(hess(0, 0) == doctest::Approx(fd_ss).epsilon(1e-4));
        CHECK(hess(0, 1) == doctest::Approx(hess(1, 0)));
    }
}

TEST_CASE("normal mode contract") {
    // 1D harmonic oscillator: f = sqrt(8 Ec k).
    Eigen::MatrixXd h(1, 1);
    h << 2.0;
    Eigen::VectorXd ec(1);
    ec << 1.0;
    const auto f1 = normal_modes(h, ec);
    CHECK(f1.size() == 1);
    CHECK(f1[0] == doctest::Approx(4.0));

    // Decoupled 2D diagonal Hessian reproduces the two 1D answers.
    Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(2, 2);
    h2(0, 0) = 2.0;
    h2(1, 1) = 4.5;
    Eigen::VectorXd ec2(2);
    ec2 << 1.0, 2.0;
    const auto f2 = normal_modes(h2, ec2);
    CHECK(f2[0] == doctest::Approx(std::sqrt(8.0 * 2.0)));
    CHECK(f2[1] == doctest::Approx(std::sqrt(8.0 * 2.0 * 4.5)));

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0; // indefinite
    CHECK_THROWS_AS(normal_modes(bad, ec2), vanished_well_error);
}

TEST_CASE("mode frequencies invariant under orthogonal reparameterization") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> angles(0.0, two_pi);
    Eigen::MatrixXd h(2, 2);
    h << 1993.0, -857.0, -857.0, 1993.0;
    Eigen::VectorXd ec = Eigen::VectorXd::Constant(2, 0.3); // isotropic charging
    const auto base = normal_modes(h, ec);
    for (int i = 0; i < 25; ++i) {
        const double t = angles(rng);
        Eigen::MatrixXd r(2, 2);
        r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        const Eigen::MatrixXd hr = r.transpose() * h * r;
        const auto rotated = normal_modes(hr, ec);
        CHECK(rotated[0] == doctest::Approx(base[0]).epsilon(1e-10));
        CHECK(rotated[1] == doctest::Approx(base[1]).epsilon(1e-10));
    }
}

TEST_CASE("sawtooth-limit minima match the closed-form linear solve") {
    auto spec = jj_spec(973.0, 1.0);
    for (double flux : {0.0, 0.35, 0.8, 1.2}) {
        const auto field = build_potential(spec, FluxPoint{flux});
        for (int n = -1; n <= 1; ++n) {
            if (std::abs(flux - n) > 1.2) continue; // well already vanished
            const auto rec = locate_well(field, n);
            REQUIRE(rec.has_value());
            const double s_num = rec->position(0) - rec->position(1);
            CHECK(s_num == doctest::Approx(sawtooth_minimum_s(spec, flux, n)).epsilon(1e-8));
            CHECK(field.gradient(rec->position(0), rec->position(1)).norm() < 1e-8);
            // Mode frequencies recompute from the stored Hessian.
            Eigen::VectorXd ec(2);
            ec << spec.e_c_sigma, spec.e_c_delta;
            const auto again = normal_modes(rec->hessian, ec);
            CHECK(again[0] == doctest::Approx(rec->mode_freqs[0]));
        }
    }
}

TEST_CASE("flux inversion symmetry at zero flux") {
    const auto field = build_potential(jj_spec(), FluxPoint{0.0});
    const auto found = find_minima(field, -2, 2);
    // Wells beyond |n| = 1 have already vanished for these parameters.
    REQUIRE(found.minima.size() == 3);
    CHECK(found.vanished.size() == 2);
    auto value_of = [&](int n) {
        for (const auto& r : found.minima)
            if (r.well_index == n) return r.value;
        FAIL("missing well");
        return 0.0;
    };
    CHECK(value_of(1) == doctest::Approx(value_of(-1)).epsilon(1e-10));
}

TEST_CASE("single-well regime when the corrugation is weak") {
    // E0 far below E_LP: dense scan of the reduced potential finds exactly
    // one minimum per 2 pi window around the flux parabola center.
    auto spec = jj_spec(20.0, 0.3);
    const auto field = build_potential(spec, FluxPoint{0.2});
    int grid_minima = 0;
    const double a = -3.0 * pi, b = 3.0 * pi;
    const int n = 1900; // ~1e-2 rad resolution
    double prev = field.reduced_potential(a);
    double cur = field.reduced_potential(a + (b - a) / n);
    for (int i = 2; i <= n; ++i) {
        const double next = field.reduced_potential(a + (b - a) * i / n);
        if (cur < prev && cur <= next) ++grid_minima;
        prev = cur;
        cur = next;
    }
    CHECK(grid_minima == 1);

    const auto found = find_minima(field, -1, 1);
    CHECK(found.minima.size() == 1);
    CHECK(found.vanished.size() == 2);
}

TEST_CASE("flux periodicity of the minimum set") {
    const auto spec = jj_spec();
    const auto at0 = find_minima(build_potential(spec, FluxPoint{0.25}), -2, 2);
    const auto at1 = find_minima(build_potential(spec, FluxPoint{1.25}), -1, 3);
    REQUIRE(at0.minima.size() == at1.minima.size());
    for (const auto& rec : at0.minima) {
        bool matched = false;
        for (const auto& shifted : at1.minima)
            if (shifted.well_index == rec.well_index + 1) {
                CHECK(shifted.value == doctest::Approx(rec.value).epsilon(1e-6));
                CHECK(shifted.mode_freqs[0] == doctest::Approx(rec.mode_freqs[0]).epsilon(1e-9));
                matched = true;
            }
        CHECK(matched);
    }
}

TEST_CASE("barriers: closed form, monotone decrease, vanish at critical flux") {
    auto spec = jj_spec(973.0, 1.0);

    // Sawtooth limit: barrier equals the corner value of the piecewise
    // parabolas minus the well energy.
    const auto field = build_potential(spec, FluxPoint{0.3});
    const auto a = locate_well(field, 0);
    const auto b = locate_well(field, 1);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    const double corner = pi; // boundary between wells 0 and 1
    const double expected = field.reduced_potential(corner - 1e-7) - a->value;
    CHECK(barrier_height(field, *a, *b) == doctest::Approx(expected).epsilon(1e-6));

    // Smooth-skewness barrier decreases monotonically toward the jump.
    auto smooth = jj_spec(973.0, 1.0 - 5e-5);
    double prev_barrier = std::numeric_limits<double>::infinity();
    for (double flux : {0.9, 1.1, 1.3, 1.5}) {
        const auto f = build_potential(smooth, FluxPoint{flux});
        const auto wa = locate_well(f, 0);
        const auto wb = locate_well(f, 1);
        REQUIRE(wa.has_value());
        REQUIRE(wb.has_value());
        const double bar = barrier_height(f, *wa, *wb);
        CHECK(bar < prev_barrier);
        prev_barrier = bar;
    }

    // Adjacent-well precondition and the phase-slip refusal.
    const auto c = locate_well(field, -1);
    REQUIRE(c.has_value());
    CHECK_THROWS_AS(barrier_height(field, *c, *b), std::domain_error);
    const auto qfield = build_potential(qps_spec(), FluxPoint{0.0});
    const auto qa = locate_well(qfield, 0);
    const auto qb = locate_well(qfield, 1);
    CHECK_THROWS_AS(barrier_height(qfield, *qa, *qb), std::domain_error);

    // The barrier collapses to zero exactly where the vanished-well flag
    // fires: locate the critical flux by bisection on the flag, then check
    // the barrier just before it is already negligible.
    double lo = 1.5, hi = 1.65;
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        (locate_well(build_potential(smooth, FluxPoint{mid}), 0) ? lo : hi) = mid;
    }
    const auto just_before = build_potential(smooth, FluxPoint{lo - 1e-4});
    const auto wa = locate_well(just_before, 0);
    const auto wb = locate_well(just_before, 1);
    REQUIRE(wa.has_value());
    REQUIRE(wb.has_value());
    const double residual = barrier_height(just_before, *wa, *wb);
    CHECK(residual > 0.0);
    CHECK(residual < 1e-2);
    CHECK_FALSE(locate_well(build_potential(smooth, FluxPoint{hi}), 0).has_value());
}

TEST_CASE("phase-slip sections are exact paraboloids") {
    const auto spec = qps_spec();
    const double e_lq = std::get<PhaseSlipLink>(spec.weak_link).e_lq;
    const double e_eff = spec.e_lp * e_lq / (spec.e_lp + e_lq);
    for (double flux : {0.0, 0.4, 1.1}) {
        const auto field = build_potential(spec, FluxPoint{flux});
        for (int m = -1; m <= 2; ++m) {
            const auto rec = locate_well(field, m);
            REQUIRE(rec.has_value());
            const double expect = 0.5 * e_eff * two_pi * two_pi * (flux - m) * (flux - m);
            CHECK(rec->value == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("landscape grid export shape") {
    const auto field = build_potential(jj_spec(), FluxPoint{0.0});
    const auto grid = landscape_grid(field, -1.0, 1.0, 11, -2.0, 2.0, 21);
    CHECK(grid.size() == 11u * 21u);
    CHECK(grid.front().coord1 == doctest::Approx(-1.0));
    CHECK(grid.back().coord2 == doctest::Approx(2.0));
}

TEST_CASE("every returned record satisfies its invariants") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> fluxes(-1.5, 1.8), chis(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        auto spec = jj_spec(973.0, chis(rng));
        const auto field = build_potential(spec, FluxPoint{fluxes(rng)});
        const auto found = find_minima(field, -3, 3);
        for (const auto& rec : found.minima) {
            CHECK(field.gradient(rec.position(0), rec.position(1)).norm() < 1e-8);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(rec.hessian);
            CHECK(es.eigenvalues()(0) > 0.0);
            CHECK(rec.mode_freqs.size() == 2);
            CHECK(rec.mode_freqs[0] <= rec.mode_freqs[1]);
        }
    }
}
