#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

// Unit conventions used throughout the library:
//   energies      E/h in GHz
//   fluxes        in units of the flux quantum Phi0
//   phases        radians
//   capacitance   fF
//   inductance    pH

namespace rfsquid {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double flux_quantum = planck_h / (2.0 * elementary_charge); // Wb

// E_L/h in GHz for an inductance in pH: Phi0^2 / (4 pi^2 L h).
inline double inductance_to_energy(double l_ph) {
    if (!(l_ph > 0.0)) throw std::domain_error("inductance must be positive");
    const double l_henry = l_ph * 1e-12;
    const double e_hz = flux_quantum * flux_quantum / (4.0 * pi * pi * l_henry * planck_h);
    return e_hz * 1e-9;
}

inline double energy_to_inductance(double e_ghz) {
    if (!(e_ghz > 0.0)) throw std::domain_error("inductive energy must be positive");
    const double l_henry = flux_quantum * flux_quantum / (4.0 * pi * pi * e_ghz * 1e9 * planck_h);
    return l_henry * 1e12;
}

// E_C/h in GHz for a capacitance in fF: e^2 / (4 C h).
inline double capacitance_to_charging_energy(double c_ff) {
    if (!(c_ff > 0.0)) throw std::domain_error("capacitance must be positive");
    const double c_farad = c_ff * 1e-15;
    const double e_hz = elementary_charge * elementary_charge / (4.0 * c_farad * planck_h);
    return e_hz * 1e-9;
}

inline double charging_energy_to_capacitance(double e_ghz) {
    if (!(e_ghz > 0.0)) throw std::domain_error("charging energy must be positive");
    const double c_farad = elementary_charge * elementary_charge / (4.0 * e_ghz * 1e9 * planck_h);
    return c_farad * 1e15;
}

// Diagnostic ratio of loop inductance to weak-link inductance; > 1 means
// the potential develops multiple local minima.
inline double beta_ratio(double l_geo_ph, double l_nw_ph) {
    if (!(l_geo_ph > 0.0) || !(l_nw_ph > 0.0))
        throw std::domain_error("inductances must be positive");
    return l_geo_ph / l_nw_ph;
}

// Wrap a phase into [-pi, pi].
inline double wrap_phase(double phi) {
    double w = std::remainder(phi, two_pi);
    return w;
}

} // namespace rfsquid
