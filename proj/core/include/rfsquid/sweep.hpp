#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rfsquid/circuit.hpp"

namespace rfsquid {

struct SweepPlan {
    CircuitSpec spec;
    std::vector<double> flux_values;  // Phi0 units, strictly monotone
    std::optional<int> initial_well;  // nullopt: start from the global minimum
};

struct ResonancePoint {
    double flux = 0.0;                    // Phi0
    double f_bare = 0.0;                  // GHz
    std::optional<double> f_hybridized;   // filled by the cavity stage
    int well_index = 0;
    bool jumped = false;
};

enum class SweepDirection { up, down };

struct ResonanceCurve {
    std::vector<ResonancePoint> points;
    SweepDirection direction = SweepDirection::up;
};

struct SweepOptions {
    double jump_flux_tol = 1e-4;        // jump localization, Phi0
    int global_min_halfwidth = 3;       // well window when seeding from the global minimum
};

std::vector<double> make_flux_grid(double lo, double hi, int n_points);

/// Track the occupied well across the flux ramp. The tracked well's lowest
/// normal mode is the bare resonance; when the well vanishes the state
/// drops into the adjacent lower well and the point is flagged jumped.
/// Jump fluxes are localized by bisection to jump_flux_tol, and the last
/// stable pre-jump point is included in the curve.
ResonanceCurve run_sweep(const SweepPlan& plan, const SweepOptions& opts = {});

/// Up and down sweeps over [flux_lo, flux_hi], each initialized from the
/// global minimum at its own starting flux.
std::pair<ResonanceCurve, ResonanceCurve> hysteresis_pair(const CircuitSpec& spec,
                                                          double flux_lo, double flux_hi,
                                                          int n_points,
                                                          const SweepOptions& opts = {});

/// Flux values of the jumped points of a curve.
std::vector<double> jump_fluxes(const ResonanceCurve& curve);

} // namespace rfsquid
