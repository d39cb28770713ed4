#include "rfsquid/dataops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rfsquid {

namespace {

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double stderr_of_mean(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / double(v.size() - 1) / double(v.size()));
}

} // namespace

CalibrationResult calibrate_flux(const CalibrationInput& input) {
    if (input.branches.empty())
        throw std::domain_error("calibration needs at least one branch");

    std::vector<double> spacings;
    std::optional<double> first_up, first_down;
    for (const auto& branch : input.branches) {
        if (branch.jump_voltages.size() < 2)
            throw std::domain_error("each branch needs at least two jumps for the period");
        for (std::size_t i = 1; i < branch.jump_voltages.size(); ++i)
            spacings.push_back(std::abs(branch.jump_voltages[i] - branch.jump_voltages[i - 1]));
        if (branch.increasing && !first_up) first_up = branch.jump_voltages.front();
        if (!branch.increasing && !first_down) first_down = branch.jump_voltages.front();
    }
    if (!first_up || !first_down)
        throw std::domain_error("calibration needs branches in both directions");

    CalibrationResult result;
    result.volts_per_phi0 = mean(spacings);
    result.volts_per_phi0_stderr = stderr_of_mean(spacings);
    result.zero_offset_volts = 0.5 * (*first_up + *first_down);
    // The midpoint of two jump voltages inherits their spacing spread.
    result.zero_offset_stderr = 0.5 * std::sqrt(2.0) * stderr_of_mean(spacings);

    double lo = spacings.front(), hi = spacings.front();
    for (double s : spacings) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if ((hi - lo) > 0.05 * std::abs(result.volts_per_phi0))
        result.warnings.push_back("jump spacing spread exceeds 5%; calibration quality is low");
    return result;
}

void validate(const MeasurementProtocol& protocol) {
    if (protocol.f_ref == protocol.f_rout)
        throw std::domain_error("f_ref and f_rout must differ");
    if (!(protocol.delta_phi > 0.0))
        throw std::domain_error("delta_phi must be positive");
    if (protocol.debounce_samples < 1)
        throw std::domain_error("debounce must be at least one sample");
}

LifetimeSample detect_decay(const ShotTrace& trace, const MeasurementProtocol& protocol) {
    validate(protocol);
    if (trace.timestamps.size() != trace.s21.size() || trace.timestamps.empty())
        throw std::domain_error("trace timestamps and samples disagree");
    for (std::size_t i = 1; i < trace.timestamps.size(); ++i)
        if (!(trace.timestamps[i] > trace.timestamps[i - 1]))
            throw std::domain_error("trace timestamps must be strictly increasing");

    const double window = trace.window > 0.0 ? trace.window : trace.timestamps.back();

    // The threshold must sit above the initial (pre-decay) level; a trace
    // that starts at or above it has no usable two-level structure.
    const std::size_t probe =
        std::min<std::size_t>(trace.s21.size(), static_cast<std::size_t>(protocol.debounce_samples));
    double initial = 0.0;
    for (std::size_t i = 0; i < probe; ++i) initial += trace.s21[i];
    initial /= double(probe);
    if (protocol.threshold <= initial) {
        LifetimeSample s;
        s.duration = window;
        s.censored = true;
        s.ambiguous = true;
        return s;
    }

    int run = 0;
    for (std::size_t i = 0; i < trace.s21.size(); ++i) {
        if (trace.s21[i] > protocol.threshold) {
            ++run;
            if (run >= protocol.debounce_samples) {
                LifetimeSample s;
                s.duration = trace.timestamps[i - static_cast<std::size_t>(run - 1)];
                s.censored = false;
                return s;
            }
        } else {
            run = 0;
        }
    }
    LifetimeSample s;
    s.duration = window;
    s.censored = true;
    return s;
}

LifetimeHistogram lifetime_histogram(const std::vector<LifetimeSample>& samples, int n_bins) {
    if (samples.empty()) throw std::domain_error("histogram needs at least one sample");
    if (n_bins < 1) throw std::domain_error("histogram needs at least one bin");

    LifetimeHistogram h;
    h.total = static_cast<int>(samples.size());

    double span = 0.0;
    for (const auto& s : samples) span = std::max(span, s.duration);
    if (span <= 0.0) span = 1.0;

    h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i)
        h.bin_edges[static_cast<std::size_t>(i)] = span * double(i) / n_bins;
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);

    for (const auto& s : samples) {
        if (s.censored) {
            ++h.censored_count;
            continue;
        }
        int bin = static_cast<int>(std::floor(s.duration / span * n_bins));
        bin = std::clamp(bin, 0, n_bins - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    h.censored_fraction = double(h.censored_count) / double(h.total);
    return h;
}

std::vector<ShotTrace> synthesize_traces(double rate, double window, int count,
                                         const TraceNoiseModel& noise, std::uint64_t seed,
                                         double sample_dt) {
    if (rate < 0.0) throw std::domain_error("decay rate must be non-negative");
    if (!(window > 0.0) || !(sample_dt > 0.0) || count < 1)
        throw std::domain_error("window, sample_dt and count must be positive");

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> decay(rate > 0.0 ? rate : 1.0);
    std::normal_distribution<double> gauss(0.0, noise.sigma);

    const int n_samples = static_cast<int>(std::floor(window / sample_dt)) + 1;
    std::vector<ShotTrace> traces;
    traces.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        const double decay_time =
            rate > 0.0 ? decay(rng) : std::numeric_limits<double>::infinity();
        ShotTrace trace;
        trace.window = window;
        trace.run_id = static_cast<std::uint64_t>(t);
        trace.timestamps.reserve(static_cast<std::size_t>(n_samples));
        trace.s21.reserve(static_cast<std::size_t>(n_samples));
        for (int i = 0; i < n_samples; ++i) {
            const double time = i * sample_dt;
            const double level = time >= decay_time ? noise.high_level : noise.low_level;
            trace.timestamps.push_back(time);
            trace.s21.push_back(level + gauss(rng));
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

} // namespace rfsquid
