#include "rfsquid/dilog.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace rfsquid {

namespace {

constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;

// Bernoulli numbers B_0 .. B_38 (odd ones beyond B_1 vanish).
constexpr std::array<double, 40> bernoulli = {
    1.0, -0.5,
    1.0 / 6.0, 0.0,
    -1.0 / 30.0, 0.0,
    1.0 / 42.0, 0.0,
    -1.0 / 30.0, 0.0,
    5.0 / 66.0, 0.0,
    -691.0 / 2730.0, 0.0,
    7.0 / 6.0, 0.0,
    -3617.0 / 510.0, 0.0,
    43867.0 / 798.0, 0.0,
    -174611.0 / 330.0, 0.0,
    854513.0 / 138.0, 0.0,
    -236364091.0 / 2730.0, 0.0,
    8553103.0 / 6.0, 0.0,
    -23749461029.0 / 870.0, 0.0,
    8615841276005.0 / 14322.0, 0.0,
    -7709321041217.0 / 510.0, 0.0,
    2577687858367.0 / 6.0, 0.0,
    -26315271553053477373.0 / 1919190.0, 0.0,
    2929993913841559.0 / 6.0, 0.0,
};

// Series in w = -log(1-z): Li2(z) = sum_n B_n w^{n+1} / (n+1)!.
std::complex<double> dilog_series(std::complex<double> z) {
    const std::complex<double> w = -std::log(1.0 - z);
    std::complex<double> term = w; // w^{n+1}/(n+1)! at n = 0
    std::complex<double> sum = bernoulli[0] * term;
    for (std::size_t n = 1; n < bernoulli.size(); ++n) {
        term *= w / static_cast<double>(n + 1);
        if (bernoulli[n] == 0.0) continue;
        const std::complex<double> contrib = bernoulli[n] * term;
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

} // namespace

std::complex<double> dilog(std::complex<double> z) {
    if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    if (z == std::complex<double>(1.0, 0.0)) return {pi2_6, 0.0};

    // Inversion: Li2(z) = -Li2(1/z) - pi^2/6 - log^2(-z)/2 for |z| > 1.
    if (std::abs(z) > 1.0) {
        const std::complex<double> lz = std::log(-z);
        return -dilog(1.0 / z) - pi2_6 - 0.5 * lz * lz;
    }
    // Reflection: Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z) for Re z > 1/2.
    if (z.real() > 0.5) {
        return pi2_6 - std::log(z) * std::log(1.0 - z) - dilog_series(1.0 - z);
    }
    return dilog_series(z);
}

} // namespace rfsquid
