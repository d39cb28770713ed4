#pragma once

#include <complex>

namespace rfsquid {

/// Complex dilogarithm Li2(z) = sum_{k>=1} z^k / k^2, principal branch.
/// Argument reduction (inversion for |z| > 1, reflection for Re z > 1/2)
/// followed by the Bernoulli series in w = -log(1 - z). Absolute accuracy
/// is a few ulps for |z| <= 1, which is the regime the CPR evaluation uses.
std::complex<double> dilog(std::complex<double> z);

} // namespace rfsquid
