#pragma once

// Independent numerical oracles used by the test suites. Everything here
// deliberately avoids the library's evaluation paths: series are summed
// term by term, overlaps integrated by quadrature, eigenvalues located by
// characteristic-polynomial bisection.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

struct CprSeries {
    double energy, current, curvature;
};

// Direct summation of the skewed-junction series and its term-wise
// derivatives with an explicit tail bound (the geometric curvature tail
// chi^K / (1 - chi) dominates all three series). Requires chi < 1.
inline CprSeries cpr_series(double phi, double e0, double chi, double tail_tol = 1e-13) {
    if (!(chi >= 0.0 && chi < 1.0)) throw std::domain_error("series oracle needs chi < 1");
    const std::complex<double> rot = -chi * std::exp(std::complex<double>(0.0, phi));
    std::complex<double> w = std::exp(std::complex<double>(0.0, phi)); // (-chi)^{k-1} e^{ik phi}
    double sum_e = 0.0, sum_i = 0.0, sum_c = 0.0;
    double chi_pow = 1.0; // chi^{k-1}
    for (long k = 1; k < 100'000'000; ++k) {
        sum_e += w.real() / (double(k) * double(k));
        sum_i += w.imag() / double(k);
        sum_c += w.real();
        chi_pow *= chi;
        if (chi_pow < tail_tol * (1.0 - chi)) break;
        w *= rot;
    }
    const double scale = e0 * (1.0 + chi);
    return {-scale * sum_e, scale * sum_i, scale * sum_c};
}

// Cesaro (Fejer) summation of the sawtooth current series
// sum_k (-1)^{k-1} sin(k phi) / k at chi = 1.
inline double cesaro_sawtooth_current(double phi, double e0, long n_terms) {
    double partial = 0.0, cesaro = 0.0;
    double sign = 1.0;
    for (long k = 1; k <= n_terms; ++k) {
        partial += sign * std::sin(k * phi) / double(k);
        cesaro += partial;
        sign = -sign;
    }
    return 2.0 * e0 * cesaro / double(n_terms);
}

// Normalized Hermite functions psi_n(x) of the dimensionless oscillator.
inline double hermite_psi(int n, double x) {
    double prev = 0.0;
    double cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    for (int k = 0; k < n; ++k) {
        const double next =
            x * std::sqrt(2.0 / (k + 1.0)) * cur - std::sqrt(double(k) / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Quadrature overlap <psi_m(x) | psi_n(x - d)> via composite Simpson.
inline double overlap_quadrature(int n, int m, double d, int n_points = 8001) {
    const double reach = std::sqrt(2.0 * std::max(n, m) + 1.0) + 8.0;
    const double lo = -reach + std::min(0.0, d);
    const double hi = reach + std::max(0.0, d);
    const double h = (hi - lo) / (n_points - 1);
    double sum = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double x = lo + i * h;
        const double f = hermite_psi(m, x) * hermite_psi(n, x - d);
        const double w = (i == 0 || i == n_points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / 3.0;
}

// Roots of the single-excitation three-mode characteristic polynomial by
// interval bisection (eigenvalue interlacing pins the brackets).
inline std::array<double, 3> hybrid_roots(double fq, double fa, double fb, double ga,
                                          double gb) {
    auto p = [&](double l) {
        return (fq - l) * (fa - l) * (fb - l) - ga * ga * (fb - l) - gb * gb * (fa - l);
    };
    const double span = std::abs(ga) + std::abs(gb) + 1.0;
    const double lo_edge = std::min({fq, fa, fb}) - 3.0 * span;
    const double hi_edge = std::max({fq, fa, fb}) + 3.0 * span;
    const std::array<std::pair<double, double>, 3> brackets = {
        std::make_pair(lo_edge, std::min(fa, fb)),
        std::make_pair(std::min(fa, fb), std::max(fa, fb)),
        std::make_pair(std::max(fa, fb), hi_edge)};
    std::array<double, 3> roots{};
    for (int i = 0; i < 3; ++i) {
        double lo = brackets[i].first, hi = brackets[i].second;
        double plo = p(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double pm = p(mid);
            if ((plo <= 0.0) == (pm <= 0.0)) {
                lo = mid;
                plo = pm;
            } else {
                hi = mid;
            }
        }
        roots[i] = 0.5 * (lo + hi);
    }
    return roots;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_second_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

} // namespace oracles
