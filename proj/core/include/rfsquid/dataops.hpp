#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rfsquid {

/// One flux-calibration branch: a voltage sweep in one direction with the
/// voltages where the resonance jumped.
struct CalibrationBranch {
    bool increasing = true;
    std::vector<double> jump_voltages;              // V, in sweep order
    std::vector<std::pair<double, double>> points;  // optional (V, GHz) samples
};

struct CalibrationInput {
    std::vector<CalibrationBranch> branches;
};

struct CalibrationResult {
    double volts_per_phi0 = 0.0;
    double volts_per_phi0_stderr = 0.0;
    double zero_offset_volts = 0.0;
    double zero_offset_stderr = 0.0;
    std::vector<std::string> warnings;
};

/// Period = mean spacing of same-direction jump voltages; zero offset =
/// midpoint between the first jumps of the increasing and decreasing
/// branches. A jump-spacing spread above 5% flags a quality warning.
CalibrationResult calibrate_flux(const CalibrationInput& input);

struct MeasurementProtocol {
    double f_ref = 0.0;       // GHz
    double phi_ref = 0.0;     // Phi0
    double delta_phi = 0.0;   // Phi0
    double f_rout = 0.0;      // GHz
    double threshold = 0.0;   // |S21| discrimination level
    int debounce_samples = 3; // consecutive samples required above threshold
};

void validate(const MeasurementProtocol& protocol);

struct ShotTrace {
    std::vector<double> timestamps; // s, strictly increasing from 0
    std::vector<double> s21;        // linear |S21|
    double window = 0.0;            // s
    double delta_phi = 0.0;         // Phi0 metadata
    std::uint64_t run_id = 0;
};

struct LifetimeSample {
    double duration = 0.0; // s
    bool censored = false; // no decay inside the window
    bool ambiguous = false;
};

/// First debounced threshold crossing; censored when the trace never
/// crosses. A trace with no crossing and no recognizable two-level
/// structure is returned censored with the ambiguous flag set.
LifetimeSample detect_decay(const ShotTrace& trace, const MeasurementProtocol& protocol);

struct LifetimeHistogram {
    std::vector<double> bin_edges; // n_bins + 1 edges, s
    std::vector<int> counts;       // uncensored decays per bin
    int censored_count = 0;
    double censored_fraction = 0.0;
    int total = 0;
};

LifetimeHistogram lifetime_histogram(const std::vector<LifetimeSample>& samples, int n_bins);

struct TraceNoiseModel {
    double low_level = 0.2;  // |S21| while the excited flux state persists
    double high_level = 1.0; // |S21| after the decay
    double sigma = 0.02;     // additive Gaussian noise
};

/// Exponential-decay two-level traces, deterministic under the seed.
/// rate = 0 produces purely censored traces.
std::vector<ShotTrace> synthesize_traces(double rate, double window, int count,
                                         const TraceNoiseModel& noise, std::uint64_t seed,
                                         double sample_dt = 1.0);

} // namespace rfsquid
