#include "rfsquid/cpr.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rfsquid/dilog.hpp"
#include "rfsquid/errors.hpp"
#include "rfsquid/units.hpp"

namespace rfsquid {

namespace {

void check_chi(double chi) {
    if (!(chi >= 0.0 && chi <= 1.0))
        throw std::domain_error("skewness chi must lie in [0, 1]");
}

bool at_sawtooth_singularity(double phi) {
    // Odd multiple of pi within floating tolerance.
    const double w = wrap_phase(phi);
    return std::abs(std::abs(w) - pi) < 1e-12;
}

} // namespace

double cpr_energy(double phi, double e0, double chi) {
    check_chi(chi);
    if (chi == 1.0) {
        const double w = wrap_phase(phi);
        return e0 * (0.5 * w * w - pi * pi / 6.0);
    }
    if (chi < 1e-8) {
        // Series through chi^2; avoids the 1/chi form as chi -> 0.
        const double c1 = std::cos(phi), c2 = std::cos(2 * phi), c3 = std::cos(3 * phi);
        return -e0 * (1.0 + chi) * (c1 - chi * c2 / 4.0 + chi * chi * c3 / 9.0);
    }
    const std::complex<double> z = -chi * std::exp(std::complex<double>(0.0, phi));
    return e0 * (1.0 + chi) / chi * dilog(z).real();
}

double cpr_current(double phi, double e0, double chi) {
    check_chi(chi);
    if (chi == 1.0) {
        if (at_sawtooth_singularity(phi))
            throw singular_point_error("sawtooth CPR is discontinuous at odd multiples of pi");
        return e0 * wrap_phase(phi);
    }
    if (chi < 1e-8) {
        const double s1 = std::sin(phi), s2 = std::sin(2 * phi), s3 = std::sin(3 * phi);
        return e0 * (1.0 + chi) * (s1 - chi * s2 / 2.0 + chi * chi * s3 / 3.0);
    }
    return e0 * (1.0 + chi) / chi * std::atan2(chi * std::sin(phi), 1.0 + chi * std::cos(phi));
}

double cpr_curvature(double phi, double e0, double chi) {
    check_chi(chi);
    if (chi == 1.0 && at_sawtooth_singularity(phi))
        throw singular_point_error("sawtooth CPR curvature is undefined at odd multiples of pi");
    const double c = std::cos(phi);
    const double denom = 1.0 + 2.0 * chi * c + chi * chi;
    return e0 * (1.0 + chi) * (c + chi) / denom;
}

std::vector<double> cpr_series_coefficients(double e0, double chi, int count) {
    check_chi(chi);
    if (count < 0) throw std::domain_error("series term count must be non-negative");
    std::vector<double> coeffs(static_cast<std::size_t>(count));
    double sign_pow = 1.0; // (-chi)^{k-1}
    for (int k = 1; k <= count; ++k) {
        coeffs[static_cast<std::size_t>(k - 1)] = -e0 * (1.0 + chi) * sign_pow / (double(k) * double(k));
        sign_pow *= -chi;
    }
    return coeffs;
}

int cpr_series_terms_for(double e0, double chi, double abs_tol) {
    check_chi(chi);
    if (chi >= 1.0)
        throw std::domain_error("series tail bound requires chi < 1");
    if (!(abs_tol > 0.0)) throw std::domain_error("tolerance must be positive");
    if (chi == 0.0) return 1;
    // Tail bound: sum_{k>K} chi^{k-1}/k^2 <= chi^K / (K^2 (1 - chi)).
    const double scale = e0 * (1.0 + chi);
    int k = 4;
    while (k < 100'000'000) {
        const double tail = scale * std::pow(chi, k) / (double(k) * double(k) * (1.0 - chi));
        if (tail < abs_tol) return k;
        k += k / 2;
    }
    throw convergence_error("CPR series tail bound not reached");
}

} // namespace rfsquid
