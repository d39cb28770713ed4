#include "rfsquid/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "rfsquid/errors.hpp"
#include "rfsquid/landscape.hpp"

namespace rfsquid {

namespace {

void validate_plan(const SweepPlan& plan) {
    validate(plan.spec);
    if (plan.flux_values.size() < 2)
        throw std::domain_error("sweep needs at least two flux points");
    const bool up = plan.flux_values.back() > plan.flux_values.front();
    for (std::size_t i = 1; i < plan.flux_values.size(); ++i) {
        const double d = plan.flux_values[i] - plan.flux_values[i - 1];
        if (!((up && d > 0.0) || (!up && d < 0.0)))
            throw std::domain_error("sweep flux values must be strictly monotone");
    }
}

int global_minimum_well(const CircuitSpec& spec, double flux, int halfwidth) {
    const auto field = build_potential(spec, FluxPoint{flux});
    const int center = static_cast<int>(std::lround(flux));
    const auto found = find_minima(field, center - halfwidth, center + halfwidth);
    if (found.minima.empty())
        throw initialization_error("no potential minimum found near the starting flux");
    const MinimumRecord* best = &found.minima.front();
    for (const auto& rec : found.minima)
        if (rec.value < best->value) best = &rec;
    return best->well_index;
}

ResonancePoint to_point(double flux, const MinimumRecord& rec, bool jumped) {
    ResonancePoint p;
    p.flux = flux;
    p.f_bare = rec.mode_freqs.front();
    p.well_index = rec.well_index;
    p.jumped = jumped;
    return p;
}

} // namespace

std::vector<double> make_flux_grid(double lo, double hi, int n_points) {
    if (n_points < 2) throw std::domain_error("flux grid needs at least two points");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * double(i) / (n_points - 1);
    return grid;
}

ResonanceCurve run_sweep(const SweepPlan& plan, const SweepOptions& opts) {
    validate_plan(plan);
    const bool up = plan.flux_values.back() > plan.flux_values.front();
    const double dir = up ? 1.0 : -1.0;

    ResonanceCurve curve;
    curve.direction = up ? SweepDirection::up : SweepDirection::down;
    curve.points.reserve(plan.flux_values.size());

    auto locate = [&](int well, double flux) {
        return locate_well(build_potential(plan.spec, FluxPoint{flux}), well);
    };

    int well = plan.initial_well
                   ? *plan.initial_well
                   : global_minimum_well(plan.spec, plan.flux_values.front(),
                                         opts.global_min_halfwidth);
    {
        auto rec = locate(well, plan.flux_values.front());
        if (!rec)
            throw initialization_error("initial well is absent at the first flux point");
        curve.points.push_back(to_point(plan.flux_values.front(), *rec, false));
    }

    double prev_flux = plan.flux_values.front();
    for (std::size_t i = 1; i < plan.flux_values.size(); ++i) {
        const double target = plan.flux_values[i];
        auto rec = locate(well, target);
        int guard = 0;
        while (!rec) {
            if (++guard > 8)
                throw convergence_error("sweep could not stabilize after repeated jumps");
            // Localize the vanishing flux between the last stable flux and the target.
            double lo = prev_flux, hi = target;
            std::optional<MinimumRecord> last_stable = locate(well, lo);
            while (std::abs(hi - lo) > opts.jump_flux_tol) {
                const double mid = 0.5 * (lo + hi);
                auto mid_rec = locate(well, mid);
                if (mid_rec) {
                    lo = mid;
                    last_stable = std::move(mid_rec);
                } else {
                    hi = mid;
                }
            }
            if (last_stable && dir * (lo - prev_flux) > 0.0)
                curve.points.push_back(to_point(lo, *last_stable, false));

            // Drop into the adjacent well with the lower energy.
            auto down_rec = locate(well - 1, hi);
            auto up_rec = locate(well + 1, hi);
            std::optional<MinimumRecord> next;
            if (down_rec && up_rec)
                next = (down_rec->value < up_rec->value) ? std::move(down_rec)
                                                         : std::move(up_rec);
            else if (down_rec)
                next = std::move(down_rec);
            else if (up_rec)
                next = std::move(up_rec);
            if (!next)
                throw convergence_error("no adjacent well to jump into");
            well = next->well_index;
            if (dir * (hi - prev_flux) > 0.0) {
                curve.points.push_back(to_point(hi, *next, true));
                prev_flux = hi;
            } else {
                // Degenerate bracket; tag the jump at the target flux below.
                curve.points.push_back(to_point(target, *next, true));
                prev_flux = target;
            }
            if (std::abs(prev_flux - target) < 1e-15) {
                rec = std::move(next);
                break;
            }
            rec = locate(well, target);
        }
        if (dir * (target - prev_flux) > 0.0) {
            curve.points.push_back(to_point(target, *rec, false));
            prev_flux = target;
        }
    }
    return curve;
}

std::pair<ResonanceCurve, ResonanceCurve> hysteresis_pair(const CircuitSpec& spec,
                                                          double flux_lo, double flux_hi,
                                                          int n_points,
                                                          const SweepOptions& opts) {
    if (!(flux_lo < flux_hi)) throw std::domain_error("flux_lo must be below flux_hi");
    SweepPlan up{spec, make_flux_grid(flux_lo, flux_hi, n_points), std::nullopt};
    SweepPlan down{spec, make_flux_grid(flux_hi, flux_lo, n_points), std::nullopt};
    return {run_sweep(up, opts), run_sweep(down, opts)};
}

std::vector<double> jump_fluxes(const ResonanceCurve& curve) {
    std::vector<double> fluxes;
    for (const auto& p : curve.points)
        if (p.jumped) fluxes.push_back(p.flux);
    return fluxes;
}

} // namespace rfsquid
