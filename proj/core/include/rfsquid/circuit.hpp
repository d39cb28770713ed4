#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "rfsquid/units.hpp"

namespace rfsquid {

/// Weak link modeled as a Josephson junction with tunable skewness.
/// chi = 0 is the pure cosine energy-phase relation, chi = 1 the exact
/// sawtooth limit (piecewise-parabolic energy).
struct JosephsonLink {
    double e0 = 0.0;  // characteristic junction energy, GHz
    double chi = 0.0; // skewness in [0, 1]
};

/// Weak link modeled as a quantum phase slip element with its series
/// parasitic inductance.
struct PhaseSlipLink {
    double e_q = 0.0;  // phase slip amplitude, GHz
    double e_lq = 0.0; // series inductive energy, GHz
};

using WeakLinkModel = std::variant<JosephsonLink, PhaseSlipLink>;

/// External flux in units of Phi0.
struct FluxPoint {
    double phi = 0.0;
};

/// Full set of circuit energies; the single source of truth for every
/// downstream model. All energies are E/h in GHz.
struct CircuitSpec {
    double e_c_sigma = 0.0; // common (heavy) mode charging energy
    double e_c_delta = 0.0; // differential (light) mode charging energy
    double e_ls = 0.0;      // series inductive energy
    double e_lp = 0.0;      // parallel inductive energy
    WeakLinkModel weak_link;

    bool is_jj() const { return std::holds_alternative<JosephsonLink>(weak_link); }
    bool is_qps() const { return std::holds_alternative<PhaseSlipLink>(weak_link); }
    const JosephsonLink& jj() const { return std::get<JosephsonLink>(weak_link); }
    const PhaseSlipLink& qps() const { return std::get<PhaseSlipLink>(weak_link); }
};

/// Raw element values; convertible to the energy scales of CircuitSpec.
struct PhysicalElements {
    double c_b = 0.0; // shunt capacitance, fF
    double c_s = 0.0; // parasitic capacitance, fF
    double l_p = 0.0; // parallel inductance, pH
    double l_s = 0.0; // series inductance, pH
    double l_q = 0.0; // weak-link series inductance, pH
};

/// Validate invariants: positive energies, charging hierarchy
/// e_c_sigma < e_c_delta, and weak-link parameter ranges (chi in [0, 1],
/// where chi = 1 selects the analytic sawtooth branch).
/// Throws std::domain_error naming the offending field.
void validate(const CircuitSpec& spec);

void validate(const PhysicalElements& elems);

/// Charging and inductive energies of the two-mode circuit from raw
/// element values. The weak link itself is not filled in (its energy
/// scale is not derivable from a lumped inductance alone).
CircuitSpec to_circuit_spec(const PhysicalElements& elems, WeakLinkModel link);

inline bool finite_flux(const FluxPoint& f) { return std::isfinite(f.phi); }

} // namespace rfsquid
