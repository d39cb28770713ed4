#pragma once

#include <vector>

#include "rfsquid/circuit.hpp"
#include "rfsquid/ho.hpp"
#include "rfsquid/sweep.hpp"

namespace rfsquid {

/// One zeta = 2*pi*m section after Born-Oppenheimer elimination of the
/// light delta mode: a 1D harmonic well in sigma.
struct WellEntry {
    int m = 0;
    double sigma_center = 0.0; // rad
    double energy = 0.0;       // GHz; section minimum plus the delta zero point
};

/// Shared data of the reduced well ladder. All wells share the curvature
/// (the sections are exact paraboloids), hence a single f_osc, zero-point
/// width and adjacent-well displacement.
struct WellBasis {
    CircuitSpec spec;
    FluxPoint flux;
    double k_sigma = 0.0;          // GHz/rad^2
    double f_osc = 0.0;            // GHz
    double sigma_zpf = 0.0;        // rad
    double displacement = 0.0;     // adjacent-well separation in zero-point units
    double delta_zero_point = 0.0; // GHz
    std::vector<WellEntry> wells;  // ascending in m

    const WellEntry& well(int m) const;
    bool has_well(int m) const;
    /// energy of |zeta = 2 pi m, n>.
    double level_energy(int m, int n) const;
};

/// Born-Oppenheimer reduction of one well: the delta mode is harmonic at
/// every fixed sigma, its ground energy defines an effective 1D potential
/// which is fitted to a parabola near its minimum.
WellBasis born_oppenheimer_reduce(const CircuitSpec& spec, FluxPoint flux, int m);

/// Reduction over a window of wells [m_lo, m_hi].
WellBasis build_well_basis(const CircuitSpec& spec, FluxPoint flux, int m_lo, int m_hi);

struct PTOptions {
    int min_levels = 120;           // oscillator-level cutoff floor
    double degeneracy_floor = 1e-6; // GHz
    double tail_rel = 1e-3;         // certified-convergence tail ratio
};

struct PTShift {
    int level = 0;
    double shift = 0.0;        // GHz
    int dominant_partner = 0;  // neighbor level with the smallest energy gap
    /// |<2pi, l | V | 0, n>| in GHz for the energetically lower neighbor,
    /// indexed by l (values below the double range reported as 0).
    std::vector<double> couplings;
};

/// Second-order perturbative shift of |tracked_well, level> due to the
/// phase-slip coupling -e_q cos(2 pi n_zeta) to both adjacent wells. The
/// basis must contain tracked_well and both neighbors. Near-degenerate
/// denominators throw resonance_error.
PTShift pt_shift(const WellBasis& basis, int tracked_well, int level, double e_q,
                 const PTOptions& opts = {});

struct CouplingPoint {
    int level_index = 0;
    double coupling = 0.0;     // GHz
    double log_coupling = 0.0; // natural log of the coupling
    bool resonant = false;
};

/// Coupling magnitudes |<to_well, l | V | from_well, from_level>| against
/// the target level index l; the resonant flag marks the level-crossing
/// index.
std::vector<CouplingPoint> coupling_curve(const WellBasis& basis, int from_well,
                                          int to_well, int from_level, double e_q,
                                          int max_index);

struct CriticalFluxPolicy {
    double ramp_rate = 1.0e4; // Phi0 per second
    double rate_factor = 1.0; // threshold = ramp_rate * rate_factor (s^-1)
    double scan_hi = 2.5;     // scan window end relative to the occupied well
    double coarse_step = 2e-3;
    double refine_tol = 1e-5;
    int level = 0;            // occupied oscillator level
};

/// Smallest flux (above the occupied well index) where the resonant
/// inter-well coupling rate exceeds the ramp-rate-derived threshold.
/// Throws not_found_error when the scan window contains no such flux.
FluxPoint critical_flux(const CircuitSpec& spec, const CriticalFluxPolicy& policy = {});

enum class ShiftMode { both_levels, level_one_only };

struct QpsCurveOptions {
    ShiftMode mode = ShiftMode::both_levels;
    CriticalFluxPolicy policy{};
    PTOptions pt{};
};

/// Resonance frequency f = (E1 + dE1) - (E0 + dE0) of the occupied well
/// across a flux scan, jumping one well when the critical-flux policy (or a
/// perturbation-theory resonance) says so.
ResonanceCurve qps_resonance_curve(const CircuitSpec& spec,
                                   const std::vector<double>& fluxes,
                                   const QpsCurveOptions& opts = {});

} // namespace rfsquid
