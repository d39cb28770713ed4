#include "rfsquid/io.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace rfsquid {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key))
        throw config_error("missing required key", key);
    if (!j.at(key).is_number())
        throw config_error("value must be a number", key);
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw config_error("value must be a number", key);
    return j.at(key).get<double>();
}

int int_or(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw config_error("value must be an integer", key);
    return j.at(key).get<int>();
}

json weak_link_to_json(const WeakLinkModel& link) {
    json j;
    if (std::holds_alternative<JosephsonLink>(link)) {
        const auto& jj = std::get<JosephsonLink>(link);
        j["variant"] = "JJ";
        j["e0"] = jj.e0;
        j["chi"] = jj.chi;
    } else {
        const auto& qps = std::get<PhaseSlipLink>(link);
        j["variant"] = "QPS";
        j["e_q"] = qps.e_q;
        j["e_lq"] = qps.e_lq;
    }
    return j;
}

WeakLinkModel weak_link_from_json(const json& j) {
    if (!j.contains("variant")) throw config_error("missing required key", "weak_link.variant");
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "JJ" || variant == "jj") {
        JosephsonLink link;
        link.e0 = require_number(j, "e0");
        link.chi = require_number(j, "chi");
        return link;
    }
    if (variant == "QPS" || variant == "qps") {
        PhaseSlipLink link;
        link.e_q = require_number(j, "e_q");
        link.e_lq = require_number(j, "e_lq");
        return link;
    }
    throw config_error("variant must be JJ or QPS", "weak_link.variant");
}

json circuit_to_json(const CircuitSpec& spec) {
    json j;
    j["e_c_sigma"] = spec.e_c_sigma;
    j["e_c_delta"] = spec.e_c_delta;
    j["e_ls"] = spec.e_ls;
    j["e_lp"] = spec.e_lp;
    j["weak_link"] = weak_link_to_json(spec.weak_link);
    return j;
}

CircuitSpec circuit_from_json(const json& j) {
    CircuitSpec spec;
    spec.e_c_sigma = require_number(j, "e_c_sigma");
    spec.e_c_delta = require_number(j, "e_c_delta");
    spec.e_ls = require_number(j, "e_ls");
    spec.e_lp = require_number(j, "e_lp");
    if (!j.contains("weak_link")) throw config_error("missing required key", "weak_link");
    spec.weak_link = weak_link_from_json(j.at("weak_link"));
    try {
        validate(spec);
    } catch (const std::domain_error& e) {
        throw config_error(e.what(), "circuit");
    }
    return spec;
}

CavityParams cavity_from_json(const json& j) {
    CavityParams cav;
    cav.f_a = require_number(j, "f_a");
    cav.f_b = require_number(j, "f_b");
    cav.g_a = require_number(j, "g_a");
    cav.tie_gb_to_ga = j.value("tie_gb_to_ga", false);
    if (cav.tie_gb_to_ga)
        cav.g_b = std::sqrt(cav.f_b / cav.f_a) * cav.g_a;
    else
        cav.g_b = require_number(j, "g_b");
    try {
        validate(cav);
    } catch (const std::domain_error& e) {
        throw config_error(e.what(), "cavity");
    }
    return cav;
}

SweepBlock sweep_from_json(const json& j) {
    SweepBlock block;
    block.flux_start = require_number(j, "flux_start");
    block.flux_stop = require_number(j, "flux_stop");
    block.flux_step = number_or(j, "flux_step", 2e-3);
    if (j.contains("initial_well")) {
        const auto& v = j.at("initial_well");
        if (v.is_number_integer())
            block.initial_well = v.get<int>();
        else if (!(v.is_string() && v.get<std::string>() == "global-minimum"))
            throw config_error("initial_well must be an integer or \"global-minimum\"",
                               "sweep.initial_well");
    }
    block.hysteresis = j.value("hysteresis", false);
    if (!(block.flux_step > 0.0)) throw config_error("flux_step must be positive", "sweep.flux_step");
    if (block.flux_start == block.flux_stop)
        throw config_error("flux range is empty", "sweep.flux_stop");
    return block;
}

MeasurementProtocol protocol_from_json(const json& j) {
    MeasurementProtocol p;
    p.f_ref = require_number(j, "f_ref");
    p.phi_ref = require_number(j, "phi_ref");
    p.delta_phi = require_number(j, "delta_phi");
    p.f_rout = require_number(j, "f_rout");
    p.threshold = require_number(j, "threshold");
    p.debounce_samples = int_or(j, "debounce_samples", 3);
    try {
        validate(p);
    } catch (const std::domain_error& e) {
        throw config_error(e.what(), "protocol");
    }
    return p;
}

SpectrumBlock spectrum_from_json(const json& j) {
    SpectrumBlock block;
    block.e_c = require_number(j, "e_c");
    block.e_l = require_number(j, "e_l");
    if (!j.contains("jj")) throw config_error("missing required key", "spectrum.jj");
    if (!j.contains("qps")) throw config_error("missing required key", "spectrum.qps");
    block.jj.e_j = require_number(j.at("jj"), "e_j");
    block.jj.chi = require_number(j.at("jj"), "chi");
    block.qps.e_lq = require_number(j.at("qps"), "e_lq");
    block.qps.e_q = require_number(j.at("qps"), "e_q");
    block.flux_start = number_or(j, "flux_start", 0.0);
    block.flux_stop = number_or(j, "flux_stop", 1.0);
    block.n_flux = int_or(j, "n_flux", 26);
    block.n_levels = int_or(j, "n_levels", 6);
    block.comparison_flux = number_or(j, "comparison_flux", 0.0);
    if (block.n_flux < 2) throw config_error("n_flux must be at least 2", "spectrum.n_flux");
    if (block.n_levels < 2) throw config_error("n_levels must be at least 2", "spectrum.n_levels");
    return block;
}

QpsBlock qps_from_json(const json& j) {
    QpsBlock block;
    block.policy.ramp_rate = number_or(j, "ramp_rate_phi0_per_s", block.policy.ramp_rate);
    block.policy.rate_factor = number_or(j, "rate_factor", block.policy.rate_factor);
    block.policy.scan_hi = number_or(j, "scan_hi", block.policy.scan_hi);
    block.policy.level = int_or(j, "level", block.policy.level);
    const std::string mode = j.value("shift_mode", "both_levels");
    if (mode == "both_levels")
        block.mode = ShiftMode::both_levels;
    else if (mode == "level_one_only")
        block.mode = ShiftMode::level_one_only;
    else
        throw config_error("shift_mode must be both_levels or level_one_only",
                           "qps.shift_mode");
    return block;
}

FitBlock fit_from_json(const json& j) {
    FitBlock block;
    if (!j.contains("free") || !j.at("free").is_array() || j.at("free").empty())
        throw config_error("fit.free must be a non-empty array of parameter names", "fit.free");
    for (const auto& name : j.at("free")) block.free_names.push_back(name.get<std::string>());
    if (!j.contains("bounds")) throw config_error("missing required key", "fit.bounds");
    for (const auto& name : block.free_names) {
        if (!j.at("bounds").contains(name))
            throw config_error("missing bounds for free parameter", "fit.bounds." + name);
        const auto& b = j.at("bounds").at(name);
        if (!b.is_array() || b.size() != 2)
            throw config_error("bounds must be [lo, hi]", "fit.bounds." + name);
        block.bounds[name] = {b.at(0).get<double>(), b.at(1).get<double>()};
    }
    block.max_iterations = int_or(j, "max_iterations", 400);
    return block;
}

} // namespace

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string to_json_string(const CircuitSpec& spec) {
    return circuit_to_json(spec).dump(2);
}

CircuitSpec circuit_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("invalid JSON: ") + e.what(), "<document>");
    }
    return circuit_from_json(j);
}

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("invalid JSON: ") + e.what(), "<document>");
    }
    if (!j.is_object()) throw config_error("config must be a JSON object", "<document>");
    if (!j.contains("circuit")) throw config_error("missing required key", "circuit");

    RunConfig cfg;
    cfg.circuit = circuit_from_json(j.at("circuit"));
    if (j.contains("cavity")) cfg.cavity = cavity_from_json(j.at("cavity"));
    if (j.contains("sweep")) cfg.sweep = sweep_from_json(j.at("sweep"));
    if (j.contains("protocol")) cfg.protocol = protocol_from_json(j.at("protocol"));
    if (j.contains("spectrum")) cfg.spectrum = spectrum_from_json(j.at("spectrum"));
    if (j.contains("qps")) cfg.qps = qps_from_json(j.at("qps"));
    if (j.contains("fit")) cfg.fit = fit_from_json(j.at("fit"));
    cfg.hash = config_hash(j.dump());
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

void write_cpr_csv(std::ostream& os, const std::vector<double>& phis,
                   const std::vector<std::array<double, 3>>& rows, const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "phi_rad,energy_ghz,current_ghz_per_rad,curvature_ghz_per_rad2\n";
    for (std::size_t i = 0; i < phis.size(); ++i)
        os << fmt(phis[i]) << ',' << fmt(rows[i][0]) << ',' << fmt(rows[i][1]) << ','
           << fmt(rows[i][2]) << "\n";
}

void write_resonance_csv(std::ostream& os, const ResonanceCurve& curve,
                         const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "flux_phi0,f_bare_ghz,f_hyb_ghz,well_index,jumped\n";
    for (const auto& p : curve.points) {
        os << fmt(p.flux) << ',' << fmt(p.f_bare) << ',';
        if (p.f_hybridized) os << fmt(*p.f_hybridized);
        os << ',' << p.well_index << ',' << (p.jumped ? 1 : 0) << "\n";
    }
}

ResonanceCurve read_resonance_csv(std::istream& is) {
    ResonanceCurve curve;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("flux_phi0", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        ResonancePoint p;
        std::getline(ss, cell, ',');
        p.flux = std::stod(cell);
        std::getline(ss, cell, ',');
        p.f_bare = std::stod(cell);
        std::getline(ss, cell, ',');
        if (!cell.empty()) p.f_hybridized = std::stod(cell);
        std::getline(ss, cell, ',');
        p.well_index = std::stoi(cell);
        std::getline(ss, cell, ',');
        p.jumped = (cell == "1" || cell == "true");
        curve.points.push_back(p);
    }
    if (curve.points.size() >= 2 && curve.points.back().flux < curve.points.front().flux)
        curve.direction = SweepDirection::down;
    return curve;
}

void write_spectrum_csv(std::ostream& os,
                        const std::vector<std::pair<double, Spectrum>>& per_flux,
                        const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "flux_phi0,level,energy_ghz\n";
    for (const auto& [flux, spectrum] : per_flux)
        for (std::size_t level = 0; level < spectrum.eigenvalues.size(); ++level)
            os << fmt(flux) << ',' << level << ',' << fmt(spectrum.eigenvalues[level]) << "\n";
}

void write_comparison_csv(std::ostream& os, const std::vector<double>& deltas,
                          const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "level,delta_ghz\n";
    for (std::size_t j = 0; j < deltas.size(); ++j)
        os << (j + 1) << ',' << fmt(deltas[j]) << "\n";
}

void write_coupling_csv(std::ostream& os, const std::vector<CouplingPoint>& curve,
                        const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "level_index,coupling_ghz,resonant_flag\n";
    for (const auto& p : curve)
        os << p.level_index << ',' << fmt(p.coupling) << ',' << (p.resonant ? 1 : 0) << "\n";
}

void write_landscape_csv(std::ostream& os, const std::vector<GridSample>& grid,
                         const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "coord1,coord2,energy_ghz\n";
    for (const auto& g : grid)
        os << fmt(g.coord1) << ',' << fmt(g.coord2) << ',' << fmt(g.energy) << "\n";
}

void write_trace_csv(std::ostream& os, const ShotTrace& trace, const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "time_s,s21_mag\n";
    for (std::size_t i = 0; i < trace.timestamps.size(); ++i)
        os << fmt(trace.timestamps[i]) << ',' << fmt(trace.s21[i]) << "\n";
}

ShotTrace read_trace_csv(std::istream& is) {
    ShotTrace trace;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("time_s", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        trace.timestamps.push_back(std::stod(line.substr(0, comma)));
        trace.s21.push_back(std::stod(line.substr(comma + 1)));
    }
    if (trace.timestamps.size() >= 2) {
        const double dt = trace.timestamps[1] - trace.timestamps[0];
        trace.window = trace.timestamps.back() + dt;
    } else if (!trace.timestamps.empty()) {
        trace.window = trace.timestamps.back();
    }
    return trace;
}

void write_histogram_csv(std::ostream& os, const LifetimeHistogram& histogram,
                         const std::string& hash) {
    os << "# config_hash=" << hash << "\n";
    os << "bin_lo_s,bin_hi_s,count\n";
    for (std::size_t i = 0; i < histogram.counts.size(); ++i)
        os << fmt(histogram.bin_edges[i]) << ',' << fmt(histogram.bin_edges[i + 1]) << ','
           << histogram.counts[i] << "\n";
    os << "censored," << histogram.censored_count << ',' << fmt(histogram.censored_fraction)
       << "\n";
}

CalibrationInput read_calibration_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("invalid JSON: ") + e.what(), "<document>");
    }
    if (!j.contains("branches") || !j.at("branches").is_array())
        throw config_error("calibration file needs a branches array", "branches");
    CalibrationInput input;
    for (const auto& b : j.at("branches")) {
        CalibrationBranch branch;
        const std::string dir = b.value("direction", "up");
        branch.increasing = (dir == "up");
        if (!b.contains("jump_voltages") || !b.at("jump_voltages").is_array())
            throw config_error("branch needs a jump_voltages array", "branches.jump_voltages");
        for (const auto& v : b.at("jump_voltages")) branch.jump_voltages.push_back(v.get<double>());
        if (b.contains("points"))
            for (const auto& p : b.at("points"))
                branch.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        input.branches.push_back(std::move(branch));
    }
    return input;
}

std::string calibration_report_json(const CalibrationResult& result) {
    json j;
    j["volts_per_phi0"] = result.volts_per_phi0;
    j["volts_per_phi0_stderr"] = result.volts_per_phi0_stderr;
    j["zero_offset_volts"] = result.zero_offset_volts;
    j["zero_offset_stderr"] = result.zero_offset_stderr;
    j["warnings"] = result.warnings;
    return j.dump(2);
}

std::string fit_report_json(const FitResult& result) {
    json j;
    j["circuit"] = json::parse(to_json_string(result.spec));
    j["cavity"] = {{"f_a", result.cavity.f_a},
                   {"f_b", result.cavity.f_b},
                   {"g_a", result.cavity.g_a},
                   {"g_b", result.cavity.g_b}};
    j["loss_ghz2"] = result.loss;
    j["iterations"] = result.iterations;
    j["hit_iteration_limit"] = result.hit_iteration_limit;
    j["residuals_ghz"] = result.residuals;
    j["warnings"] = result.warnings;
    return j.dump(2);
}

namespace {

struct AxisScale {
    double lo = 0.0, hi = 1.0;
    double to_px(double v, double px_lo, double px_hi) const {
        if (hi == lo) return 0.5 * (px_lo + px_hi);
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

} // namespace

void write_svg_plot(std::ostream& os, const std::vector<SvgSeries>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& hash) {
    const int width = 860, height = 540;
    const double px0 = 70, px1 = width - 25, py0 = height - 55, py1 = 25;

    AxisScale x, y;
    bool first = true;
    for (const auto& s : series)
        for (const auto& [xv, yv] : s.points) {
            if (first) {
                x.lo = x.hi = xv;
                y.lo = y.hi = yv;
                first = false;
            }
            x.lo = std::min(x.lo, xv);
            x.hi = std::max(x.hi, xv);
            y.lo = std::min(y.lo, yv);
            y.hi = std::max(y.hi, yv);
        }
    if (y.hi > y.lo) {
        const double pad = 0.05 * (y.hi - y.lo);
        y.lo -= pad;
        y.hi += pad;
    }

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!-- config_hash=" << hash << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << (px1 - px0)
       << "\" height=\"" << (py0 - py1) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const int n_ticks = 6;
    for (int i = 0; i <= n_ticks; ++i) {
        const double xv = x.lo + (x.hi - x.lo) * i / n_ticks;
        const double yv = y.lo + (y.hi - y.lo) * i / n_ticks;
        const double xp = x.to_px(xv, px0, px1);
        const double yp = y.to_px(yv, py0, py1);
        os << "<line x1=\"" << fmt(xp) << "\" y1=\"" << py0 << "\" x2=\"" << fmt(xp)
           << "\" y2=\"" << (py0 + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(xp) << "\" y=\"" << (py0 + 20)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        os << "<line x1=\"" << (px0 - 5) << "\" y1=\"" << fmt(yp) << "\" x2=\"" << px0
           << "\" y2=\"" << fmt(yp) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (px0 - 8) << "\" y=\"" << fmt(yp + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    os << "<text x=\"" << (0.5 * (px0 + px1)) << "\" y=\"" << (height - 15)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << (0.5 * (py0 + py1))
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << (0.5 * (py0 + py1)) << ")\">" << y_label << "</text>\n";

    int legend_row = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [xv, yv] : s.points)
            os << fmt(x.to_px(xv, px0, px1)) << ',' << fmt(y.to_px(yv, py0, py1)) << ' ';
        os << "\"/>\n";
        if (!s.label.empty()) {
            const double ly = py1 + 16 + 16 * legend_row++;
            os << "<line x1=\"" << (px1 - 150) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
               << (px1 - 125) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color
               << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << (px1 - 118) << "\" y=\"" << fmt(ly)
               << "\" font-size=\"12\">" << s.label << "</text>\n";
        }
    }
    os << "</svg>\n";
}

bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::string> glob_files(const std::string& pattern) {
    namespace fs = std::filesystem;
    fs::path pat(pattern);
    fs::path dir = pat.parent_path();
    if (dir.empty()) dir = ".";
    const std::string leaf = pat.filename().string();
    std::vector<std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (glob_match(leaf, entry.path().filename().string()))
            out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace rfsquid
