#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfsquid/cavity.hpp"
#include "rfsquid/circuit.hpp"
#include "rfsquid/dataops.hpp"
#include "rfsquid/landscape.hpp"
#include "rfsquid/qps.hpp"
#include "rfsquid/spectra.hpp"
#include "rfsquid/sweep.hpp"

namespace rfsquid {

/// Config parsing failure that names the offending key.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& what, std::string key)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// FNV-1a 64-bit digest of a canonical document, as 16 lowercase hex chars.
std::string config_hash(const std::string& canonical);

std::string to_json_string(const CircuitSpec& spec);
CircuitSpec circuit_from_json_string(const std::string& text);

struct SweepBlock {
    double flux_start = 0.0;
    double flux_stop = 0.0;
    double flux_step = 2e-3;
    std::optional<int> initial_well; // absent: global minimum
    bool hysteresis = false;
};

struct SpectrumBlock {
    double e_c = 0.0;
    double e_l = 0.0;
    SimpleJJ jj;
    SimpleQPS qps;
    double flux_start = 0.0;
    double flux_stop = 1.0;
    int n_flux = 26;
    int n_levels = 6;
    double comparison_flux = 0.0;
};

struct QpsBlock {
    CriticalFluxPolicy policy;
    ShiftMode mode = ShiftMode::both_levels;
};

struct FitBlock {
    std::vector<std::string> free_names;
    std::map<std::string, std::pair<double, double>> bounds;
    int max_iterations = 400;
};

struct RunConfig {
    CircuitSpec circuit;
    std::optional<CavityParams> cavity;
    std::optional<SweepBlock> sweep;
    std::optional<MeasurementProtocol> protocol;
    std::optional<SpectrumBlock> spectrum;
    std::optional<QpsBlock> qps;
    std::optional<FitBlock> fit;
    std::string hash; // digest of the canonical re-serialized document
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Tabular outputs. Every writer starts with "# config_hash=<hex>".
void write_cpr_csv(std::ostream& os, const std::vector<double>& phis,
                   const std::vector<std::array<double, 3>>& rows, const std::string& hash);
void write_resonance_csv(std::ostream& os, const ResonanceCurve& curve,
                         const std::string& hash);
ResonanceCurve read_resonance_csv(std::istream& is);
void write_spectrum_csv(std::ostream& os,
                        const std::vector<std::pair<double, Spectrum>>& per_flux,
                        const std::string& hash);
void write_comparison_csv(std::ostream& os, const std::vector<double>& deltas,
                          const std::string& hash);
void write_coupling_csv(std::ostream& os, const std::vector<CouplingPoint>& curve,
                        const std::string& hash);
void write_landscape_csv(std::ostream& os, const std::vector<GridSample>& grid,
                         const std::string& hash);
void write_trace_csv(std::ostream& os, const ShotTrace& trace, const std::string& hash);
ShotTrace read_trace_csv(std::istream& is);
void write_histogram_csv(std::ostream& os, const LifetimeHistogram& histogram,
                         const std::string& hash);

CalibrationInput read_calibration_json(const std::string& text);
std::string calibration_report_json(const CalibrationResult& result);
std::string fit_report_json(const FitResult& result);

/// Minimal line plot; series are drawn as polylines over auto-scaled axes.
struct SvgSeries {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<std::pair<double, double>> points;
};

void write_svg_plot(std::ostream& os, const std::vector<SvgSeries>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& hash);

/// Shell-style matching with '*' and '?'.
bool glob_match(const std::string& pattern, const std::string& name);

/// Expand a glob over files; the pattern may carry a directory prefix.
std::vector<std::string> glob_files(const std::string& pattern);

} // namespace rfsquid
