#pragma once

#include <vector>

namespace rfsquid {

// Energy-phase relation of the weak-link junction and its first two
// derivatives. The defining series is
//
//   E(phi) = -e0 (1 + chi) sum_{k>=1} (-chi)^{k-1} cos(k phi) / k^2,
//
// evaluated here through closed forms: the real part of a dilogarithm for
// 0 < chi < 1, the pure cosine at chi = 0, and the exact piecewise-parabolic
// sawtooth limit at chi = 1. Absolute accuracy is better than 1e-9 * e0.

/// Junction energy in GHz. 2pi-periodic and even in phi.
double cpr_energy(double phi, double e0, double chi);

/// dE/dphi in GHz/rad. Odd in phi. At chi = 1 this is the linear sawtooth
/// e0 * wrap(phi); phi at odd multiples of pi is a genuine discontinuity
/// and throws singular_point_error.
double cpr_current(double phi, double e0, double chi);

/// d2E/dphi2 in GHz/rad^2. Identically e0 in the sawtooth limit; vanishes
/// where cos(phi) = -chi.
double cpr_curvature(double phi, double e0, double chi);

/// Coefficients c_k of E(phi) = sum_k c_k cos(k phi), k = 1..count:
/// c_k = -e0 (1 + chi) (-chi)^{k-1} / k^2.
std::vector<double> cpr_series_coefficients(double e0, double chi, int count);

/// Number of series terms needed so the neglected tail of E(phi) is below
/// abs_tol in GHz (uniformly in phi). Requires chi < 1.
int cpr_series_terms_for(double e0, double chi, double abs_tol);

} // namespace rfsquid
