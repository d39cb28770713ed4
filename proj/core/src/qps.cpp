#include "rfsquid/qps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfsquid/errors.hpp"
#include "rfsquid/units.hpp"

namespace rfsquid {

namespace {

void require_qps(const CircuitSpec& spec) {
    validate(spec);
    if (!spec.is_qps())
        throw std::domain_error("operation requires the phase-slip circuit variant");
}

// Effective 1D potential of the heavy mode: minimum of the quadratic form
// over delta plus the delta-mode zero point.
struct BoPotential {
    const CircuitSpec& spec;
    double flux;
    int m;
    double k_delta;
    double zp_delta;

    double operator()(double sigma) const {
        const double els = spec.e_ls, elp = spec.e_lp, elq = spec.qps().e_lq;
        const double t_phi = two_pi * flux;
        const double t_m = two_pi * m;
        // dV/ddelta = 0 at fixed sigma.
        const double delta_star =
            (elp * (sigma - t_phi) + elq * (sigma - t_m) - els * sigma) / k_delta;
        const double v = sigma + delta_star;
        const double p = sigma - delta_star - t_phi;
        const double q = sigma - delta_star - t_m;
        return 0.5 * els * v * v + 0.5 * elp * p * p + 0.5 * elq * q * q + zp_delta;
    }
};

} // namespace

const WellEntry& WellBasis::well(int m) const {
    for (const auto& w : wells)
        if (w.m == m) return w;
    throw std::domain_error("well " + std::to_string(m) + " is not in the basis");
}

bool WellBasis::has_well(int m) const {
    for (const auto& w : wells)
        if (w.m == m) return true;
    return false;
}

double WellBasis::level_energy(int m, int n) const {
    return well(m).energy + (n + 0.5) * f_osc;
}

WellBasis build_well_basis(const CircuitSpec& spec, FluxPoint flux, int m_lo, int m_hi) {
    require_qps(spec);
    if (m_lo > m_hi) throw std::domain_error("well window is empty");
    if (!finite_flux(flux)) throw std::domain_error("flux must be finite");

    WellBasis basis;
    basis.spec = spec;
    basis.flux = flux;

    const double elq = spec.qps().e_lq;
    const double k_delta = spec.e_ls + spec.e_lp + elq;
    const double zp_delta = 0.5 * std::sqrt(8.0 * spec.e_c_delta * k_delta);
    basis.delta_zero_point = zp_delta;

    for (int m = m_lo; m <= m_hi; ++m) {
        BoPotential pot{spec, flux.phi, m, k_delta, zp_delta};

        // Seed at the analytic section minimum, then fit a parabola to the
        // sampled 1D potential near its grid minimum.
        const double s_star =
            two_pi * (spec.e_lp * flux.phi + elq * m) / (spec.e_lp + elq);
        const double guess = 0.5 * s_star;
        const int n_grid = 41;
        const double half_span = 1.0;
        double best_sigma = guess, best_val = pot(guess);
        for (int i = 0; i < n_grid; ++i) {
            const double sg = guess - half_span + 2.0 * half_span * i / (n_grid - 1);
            const double v = pot(sg);
            if (v < best_val) {
                best_val = v;
                best_sigma = sg;
            }
        }
        const double h = 1e-3;
        const double vm = pot(best_sigma - h), v0 = pot(best_sigma), vp = pot(best_sigma + h);
        const double k_sigma = (vp - 2.0 * v0 + vm) / (h * h);
        if (!(k_sigma > 0.0))
            throw convergence_error("Born-Oppenheimer potential is not convex");
        const double vertex = best_sigma + 0.5 * h * (vm - vp) / (vp - 2.0 * v0 + vm);
        const double e_min = pot(vertex);

        if (basis.wells.empty()) {
            basis.k_sigma = k_sigma;
            basis.f_osc = std::sqrt(8.0 * spec.e_c_sigma * k_sigma);
            basis.sigma_zpf = std::pow(2.0 * spec.e_c_sigma / k_sigma, 0.25);
        }
        basis.wells.push_back({m, vertex, e_min});
    }

    // Adjacent-well displacement in zero-point units; sections share the
    // curvature, so any neighboring pair gives the same value.
    const double delta_sigma = pi * elq / (spec.e_lp + elq);
    basis.displacement = delta_sigma / (std::sqrt(2.0) * basis.sigma_zpf);
    return basis;
}

WellBasis born_oppenheimer_reduce(const CircuitSpec& spec, FluxPoint flux, int m) {
    return build_well_basis(spec, flux, m, m);
}

namespace {

struct SideSum {
    double shift = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    int min_gap_level = 0;
    double last_term = 0.0;
    bool any_term = false;
};

SideSum sum_side(const WellBasis& basis, int tracked, int neighbor, int level,
                 double e_q, int l_max, double floor) {
    SideSum out;
    const double e_n = basis.level_energy(tracked, level);
    const double log_half_eq = std::log(0.5 * e_q);
    for (int l = 0; l <= l_max; ++l) {
        const double den = e_n - basis.level_energy(neighbor, l);
        if (std::abs(den) < floor)
            throw resonance_error("perturbation theory hit a degeneracy", level, l);
        if (std::abs(den) < out.min_gap) {
            out.min_gap = std::abs(den);
            out.min_gap_level = l;
        }
        double term = 0.0;
        const LogValue ov = displaced_overlap_log(level, l, basis.displacement);
        if (ov.sign != 0) {
            const double log_term = 2.0 * (log_half_eq + ov.log_mag) - std::log(std::abs(den));
            if (log_term > -745.0) term = std::exp(log_term) * (den > 0 ? 1.0 : -1.0);
        }
        out.shift += term;
        out.any_term = out.any_term || term != 0.0;
        if (l == l_max) out.last_term = std::abs(term);
    }
    return out;
}

int adaptive_level_cap(const WellBasis& basis, int level, const PTOptions& opts) {
    // The Franck-Condon weight against the neighbor ladder is concentrated
    // around d^2/2 with Poisson-like width; cover the bulk plus slack.
    const double lambda = 0.5 * basis.displacement * basis.displacement;
    const int cover = static_cast<int>(std::ceil(lambda + 10.0 * std::sqrt(lambda + 1.0))) +
                      level + 30;
    return std::max(opts.min_levels, cover);
}

} // namespace

PTShift pt_shift(const WellBasis& basis, int tracked_well, int level, double e_q,
                 const PTOptions& opts) {
    if (level < 0) throw std::domain_error("oscillator level must be non-negative");
    if (e_q < 0.0) throw std::domain_error("e_q must be non-negative");
    if (!basis.has_well(tracked_well - 1) || !basis.has_well(tracked_well + 1))
        throw std::domain_error("basis must contain both neighbors of the tracked well");

    PTShift result;
    result.level = level;
    if (e_q == 0.0) {
        result.dominant_partner = level;
        return result;
    }

    int l_max = adaptive_level_cap(basis, level, opts);
    const int hard_cap = 200000;
    for (;;) {
        const auto lower = sum_side(basis, tracked_well, tracked_well + 1, level, e_q,
                                    l_max, opts.degeneracy_floor);
        const auto upper = sum_side(basis, tracked_well, tracked_well - 1, level, e_q,
                                    l_max, opts.degeneracy_floor);
        const double shift = lower.shift + upper.shift;
        const double tail = std::max(lower.last_term, upper.last_term);
        const bool trivial = !lower.any_term && !upper.any_term;
        if (trivial || tail <= opts.tail_rel * std::abs(shift)) {
            result.shift = shift;
            const bool lower_side = lower.min_gap <= upper.min_gap;
            result.dominant_partner = lower_side ? lower.min_gap_level : upper.min_gap_level;
            // Coupling magnitudes are side-independent (|overlap| is even
            // in the displacement sign).
            result.couplings.resize(static_cast<std::size_t>(l_max) + 1);
            for (int l = 0; l <= l_max; ++l) {
                const LogValue ov = displaced_overlap_log(level, l, basis.displacement);
                LogValue c{ov.log_mag + std::log(0.5 * e_q), ov.sign == 0 ? 0 : 1};
                result.couplings[static_cast<std::size_t>(l)] = std::abs(c.value());
            }
            return result;
        }
        if (l_max >= hard_cap)
            throw convergence_error("perturbation sum failed to converge within the level cap");
        l_max = std::min(hard_cap, 2 * l_max);
    }
}

std::vector<CouplingPoint> coupling_curve(const WellBasis& basis, int from_well,
                                          int to_well, int from_level, double e_q,
                                          int max_index) {
    if (std::abs(from_well - to_well) != 1)
        throw std::domain_error("coupling curve requires adjacent wells");
    if (from_level < 0 || max_index < 0)
        throw std::domain_error("levels must be non-negative");
    if (!(e_q > 0.0)) throw std::domain_error("e_q must be positive");

    const double e_from = basis.level_energy(from_well, from_level);
    int resonant_index = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int l = 0; l <= max_index; ++l) {
        const double gap = std::abs(e_from - basis.level_energy(to_well, l));
        if (gap < best_gap) {
            best_gap = gap;
            resonant_index = l;
        }
    }

    std::vector<CouplingPoint> curve;
    curve.reserve(static_cast<std::size_t>(max_index) + 1);
    const double log_half_eq = std::log(0.5 * e_q);
    for (int l = 0; l <= max_index; ++l) {
        const LogValue ov = displaced_overlap_log(from_level, l, basis.displacement);
        CouplingPoint p;
        p.level_index = l;
        p.log_coupling = ov.sign == 0 ? -std::numeric_limits<double>::infinity()
                                      : ov.log_mag + log_half_eq;
        p.coupling = std::isinf(p.log_coupling) || p.log_coupling < -745.0
                         ? 0.0
                         : std::exp(p.log_coupling);
        p.resonant = (l == resonant_index);
        curve.push_back(p);
    }
    return curve;
}

FluxPoint critical_flux(const CircuitSpec& spec, const CriticalFluxPolicy& policy) {
    require_qps(spec);
    if (!(policy.ramp_rate > 0.0) || !(policy.rate_factor > 0.0))
        throw std::domain_error("ramp rate and factor must be positive");

    const double e_q = spec.qps().e_q;
    // Coupling expressed as a rate: GHz -> 1e9 s^-1.
    const double log_threshold_ghz =
        std::log(policy.ramp_rate * policy.rate_factor) - std::log(1e9);

    // Coupling rate at the level-crossing index for well 0 vs well 1;
    // -inf while the occupied level is still below the neighbor ladder.
    auto log_rate = [&](double phi) {
        const auto basis = build_well_basis(spec, FluxPoint{phi}, 0, 1);
        const double e_occ = basis.level_energy(0, policy.level);
        const double r = (e_occ - basis.level_energy(1, 0)) / basis.f_osc;
        if (r < 0.0) return -std::numeric_limits<double>::infinity();
        const int l_star = static_cast<int>(std::lround(r));
        const LogValue ov = displaced_overlap_log(policy.level, l_star, basis.displacement);
        if (ov.sign == 0) return -std::numeric_limits<double>::infinity();
        return std::log(0.5 * e_q) + ov.log_mag;
    };

    double prev = 0.5 + policy.coarse_step;
    if (log_rate(prev) >= log_threshold_ghz) return FluxPoint{prev};
    for (double phi = prev + policy.coarse_step; phi <= policy.scan_hi;
         phi += policy.coarse_step) {
        if (log_rate(phi) >= log_threshold_ghz) {
            double lo = prev, hi = phi;
            while (hi - lo > policy.refine_tol) {
                const double mid = 0.5 * (lo + hi);
                (log_rate(mid) >= log_threshold_ghz ? hi : lo) = mid;
            }
            return FluxPoint{hi};
        }
        prev = phi;
    }
    throw not_found_error("no level crossing exceeded the rate threshold in the scan window");
}

ResonanceCurve qps_resonance_curve(const CircuitSpec& spec,
                                   const std::vector<double>& fluxes,
                                   const QpsCurveOptions& opts) {
    require_qps(spec);
    if (fluxes.size() < 2) throw std::domain_error("flux scan needs at least two points");
    const bool up = fluxes.back() > fluxes.front();
    const double dir = up ? 1.0 : -1.0;

    // Jump positions repeat with exactly one flux quantum, so the policy
    // critical flux for well 0 pins every jump.
    const double phi_c0 = critical_flux(spec, opts.policy).phi;

    auto jump_flux = [&](int m) { return up ? (m + phi_c0) : (m - phi_c0); };

    auto bare_freq = [&](int m, double phi) {
        const auto basis = build_well_basis(spec, FluxPoint{phi}, m - 1, m + 1);
        const double shift1 = pt_shift(basis, m, 1, spec.qps().e_q, opts.pt).shift;
        const double shift0 = opts.mode == ShiftMode::both_levels
                                  ? pt_shift(basis, m, 0, spec.qps().e_q, opts.pt).shift
                                  : 0.0;
        return basis.f_osc + shift1 - shift0;
    };

    ResonanceCurve curve;
    curve.direction = up ? SweepDirection::up : SweepDirection::down;
    int m = static_cast<int>(std::lround(fluxes.front()));
    double prev_flux = fluxes.front();

    for (std::size_t i = 0; i < fluxes.size(); ++i) {
        const double phi = fluxes[i];
        int guard = 0;
        while (dir * (phi - jump_flux(m)) > 0.0) {
            if (++guard > 8) throw convergence_error("flux step crossed too many jumps");
            const double at = jump_flux(m);
            const int next = up ? m + 1 : m - 1;
            if (dir * (at - prev_flux) > 0.0) {
                ResonancePoint p;
                p.flux = at;
                p.well_index = next;
                p.jumped = true;
                p.f_bare = bare_freq(next, at);
                curve.points.push_back(p);
                prev_flux = at;
            }
            m = next;
        }
        ResonancePoint p;
        p.flux = phi;
        p.well_index = m;
        try {
            p.f_bare = bare_freq(m, phi);
        } catch (const resonance_error&) {
            // Exact degeneracy on the grid: the state leaves the well here.
            const int next = up ? m + 1 : m - 1;
            m = next;
            p.well_index = next;
            p.jumped = true;
            p.f_bare = bare_freq(next, phi);
        }
        if (curve.points.empty() || dir * (phi - prev_flux) > 0.0) {
            curve.points.push_back(p);
            prev_flux = phi;
        }
    }
    return curve;
}

} // namespace rfsquid
