#include "rfsquid/landscape.hpp"

#include <algorithm>
#include <cmath>

#include "rfsquid/cpr.hpp"
#include "rfsquid/errors.hpp"
#include "rfsquid/units.hpp"

namespace rfsquid {

namespace {

// Keep evaluations strictly inside a corrugation well so the chi = 1
// branch never lands on its phase discontinuity.
constexpr double boundary_margin = 1e-7;

struct Reduced {
    double w, dw, d2w; // weak-link part and derivatives at s
};

Reduced weak_link_terms(const CircuitSpec& spec, double s, int zeta_index) {
    if (spec.is_jj()) {
        const auto& jj = spec.jj();
        return {cpr_energy(s, jj.e0, jj.chi), cpr_current(s, jj.e0, jj.chi),
                cpr_curvature(s, jj.e0, jj.chi)};
    }
    const auto& qps = spec.qps();
    const double r = s - two_pi * zeta_index;
    return {0.5 * qps.e_lq * r * r, qps.e_lq * r, qps.e_lq};
}

} // namespace

PotentialField::PotentialField(CircuitSpec spec, FluxPoint flux)
    : spec_(std::move(spec)), flux_(flux) {
    validate(spec_);
    if (!finite_flux(flux_)) throw std::domain_error("flux must be finite");
}

PotentialField build_potential(const CircuitSpec& spec, FluxPoint flux) {
    return PotentialField(spec, flux);
}

double PotentialField::value(double sigma, double delta, int zeta_index) const {
    const double v = sigma + delta;
    const double s = sigma - delta;
    const double fp = s - two_pi * flux_.phi;
    // E_WSi is even, so E_WSi(delta - sigma) = E_WSi(s).
    return 0.5 * spec_.e_ls * v * v + 0.5 * spec_.e_lp * fp * fp +
           weak_link_terms(spec_, s, zeta_index).w;
}

Eigen::Vector2d PotentialField::gradient(double sigma, double delta, int zeta_index) const {
    const double v = sigma + delta;
    const double s = sigma - delta;
    const double fp = s - two_pi * flux_.phi;
    const double dw = weak_link_terms(spec_, s, zeta_index).dw;
    const double ds_part = spec_.e_lp * fp + dw;
    Eigen::Vector2d g;
    g(0) = spec_.e_ls * v + ds_part;
    g(1) = spec_.e_ls * v - ds_part;
    return g;
}

Eigen::Matrix2d PotentialField::hessian(double sigma, double delta, int zeta_index) const {
    const double s = sigma - delta;
    const double d2w = weak_link_terms(spec_, s, zeta_index).d2w;
    const double diag = spec_.e_ls + spec_.e_lp + d2w;
    const double off = spec_.e_ls - spec_.e_lp - d2w;
    Eigen::Matrix2d h;
    h << diag, off, off, diag;
    return h;
}

double PotentialField::reduced_potential(double s, int zeta_index) const {
    const double fp = s - two_pi * flux_.phi;
    return 0.5 * spec_.e_lp * fp * fp + weak_link_terms(spec_, s, zeta_index).w;
}

double PotentialField::reduced_gradient(double s, int zeta_index) const {
    const double fp = s - two_pi * flux_.phi;
    return spec_.e_lp * fp + weak_link_terms(spec_, s, zeta_index).dw;
}

double PotentialField::reduced_curvature(double s, int zeta_index) const {
    return spec_.e_lp + weak_link_terms(spec_, s, zeta_index).d2w;
}

std::vector<double> normal_modes(const Eigen::MatrixXd& hessian,
                                 const Eigen::VectorXd& charging_diag,
                                 double curvature_floor) {
    if (hessian.rows() != hessian.cols() || hessian.rows() != charging_diag.size())
        throw std::domain_error("hessian and charging matrix dimensions disagree");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(hessian, Eigen::EigenvaluesOnly);
        if (check.eigenvalues()(0) < curvature_floor)
            throw vanished_well_error("hessian lost positive definiteness");
    }
    const Eigen::VectorXd root = charging_diag.array().sqrt();
    const Eigen::MatrixXd scaled = root.asDiagonal() * hessian * root.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scaled, Eigen::EigenvaluesOnly);
    std::vector<double> freqs;
    freqs.reserve(static_cast<std::size_t>(hessian.rows()));
    for (Eigen::Index i = 0; i < hessian.rows(); ++i)
        freqs.push_back(std::sqrt(8.0 * solver.eigenvalues()(i)));
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

namespace {

MinimumRecord make_record(const PotentialField& field, int well_index, double s_star,
                          int zeta_index) {
    MinimumRecord rec;
    rec.well_index = well_index;
    rec.position = Eigen::Vector2d(0.5 * s_star, -0.5 * s_star); // v = 0
    rec.value = field.value(rec.position(0), rec.position(1), zeta_index);
    rec.hessian = field.hessian(rec.position(0), rec.position(1), zeta_index);
    Eigen::VectorXd charging(2);
    charging << field.spec().e_c_sigma, field.spec().e_c_delta;
    rec.mode_freqs = normal_modes(rec.hessian, charging, default_curvature_floor);
    return rec;
}

// Stationary points of the reduced potential inside one corrugation well,
// found by sign-change scan plus bisection-safeguarded Newton.
std::optional<double> find_well_stationary(const PotentialField& field, int n,
                                           double grad_tol) {
    const double center = two_pi * n;
    const double a = center - pi + boundary_margin;
    const double b = center + pi - boundary_margin;

    // Newton from the parabolic-limit seed.
    const auto& spec = field.spec();
    double seed;
    if (spec.is_jj()) {
        const double e0 = spec.jj().e0;
        seed = two_pi * (spec.e_lp * field.flux().phi + e0 * n) / (spec.e_lp + e0);
    } else {
        const double elq = spec.qps().e_lq;
        seed = two_pi * (spec.e_lp * field.flux().phi + elq * n) / (spec.e_lp + elq);
    }
    seed = std::clamp(seed, a, b);

    double s = seed;
    bool newton_ok = false;
    for (int it = 0; it < 60; ++it) {
        const double g = field.reduced_gradient(s, n);
        if (std::abs(g) < grad_tol) {
            newton_ok = true;
            break;
        }
        const double k = field.reduced_curvature(s, n);
        if (k <= 0.0) break; // heading for a saddle; fall back to the scan
        double step = -g / k;
        const double max_step = 0.5 * pi;
        step = std::clamp(step, -max_step, max_step);
        double next = s + step;
        if (next <= a || next >= b) break;
        s = next;
    }
    if (newton_ok && s > a && s < b) return s;

    // Scan for a bracketed minimum (gradient crossing - to +).
    const int n_scan = 256;
    double prev_s = a;
    double prev_g = field.reduced_gradient(prev_s, n);
    for (int i = 1; i <= n_scan; ++i) {
        const double cur_s = a + (b - a) * double(i) / n_scan;
        const double cur_g = field.reduced_gradient(cur_s, n);
        if (prev_g < 0.0 && cur_g >= 0.0) {
            double lo = prev_s, hi = cur_s;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = field.reduced_gradient(mid, n);
                if (std::abs(gm) < grad_tol) return mid;
                (gm < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_s = cur_s;
        prev_g = cur_g;
    }
    return std::nullopt;
}

} // namespace

std::optional<MinimumRecord> locate_well(const PotentialField& field, int well_index,
                                         double grad_tol) {
    if (field.spec().is_qps()) {
        // Sections are exact paraboloids; the minimum is a linear solve.
        const auto& spec = field.spec();
        const double elq = spec.qps().e_lq;
        const double s_star =
            two_pi * (spec.e_lp * field.flux().phi + elq * well_index) / (spec.e_lp + elq);
        return make_record(field, well_index, s_star, well_index);
    }
    const auto s = find_well_stationary(field, well_index, grad_tol);
    if (!s) return std::nullopt;
    // The smallest Hessian eigenvalue is twice the reduced curvature.
    if (2.0 * field.reduced_curvature(*s, well_index) < default_curvature_floor)
        return std::nullopt;
    try {
        return make_record(field, well_index, *s, well_index);
    } catch (const vanished_well_error&) {
        return std::nullopt;
    }
}

FindMinimaResult find_minima(const PotentialField& field, int well_lo, int well_hi,
                             double grad_tol) {
    if (well_lo > well_hi) throw std::domain_error("well window is empty");
    FindMinimaResult result;
    for (int n = well_lo; n <= well_hi; ++n) {
        try {
            auto rec = locate_well(field, n, grad_tol);
            if (rec)
                result.minima.push_back(std::move(*rec));
            else
                result.vanished.push_back(n);
        } catch (const std::exception& e) {
            result.failures.push_back({n, e.what()});
        }
    }
    // Deduplicate by position (wells can collapse onto a shared minimum).
    auto& mins = result.minima;
    std::sort(mins.begin(), mins.end(),
              [](const MinimumRecord& x, const MinimumRecord& y) {
                  return x.position(0) < y.position(0);
              });
    for (std::size_t i = 1; i < mins.size();) {
        if ((mins[i].position - mins[i - 1].position).norm() < 1e-3)
            mins.erase(mins.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return result;
}

double barrier_height(const PotentialField& field, const MinimumRecord& a,
                      const MinimumRecord& b) {
    if (field.spec().is_qps())
        throw std::domain_error(
            "barrier is undefined for phase-slip sections (discrete zeta lattice)");
    if (std::abs(a.well_index - b.well_index) != 1)
        throw std::domain_error("barrier requires adjacent wells");

    const double sa = a.position(0) - a.position(1);
    const double sb = b.position(0) - b.position(1);
    const double lo = std::min(sa, sb), hi = std::max(sa, sb);
    const int n_between = std::max(a.well_index, b.well_index); // corner at (2n-1)pi

    const double chi = field.spec().jj().chi;
    if (chi == 1.0) {
        // Sawtooth limit: the ridge is the corner between the two parabolas.
        const double corner = (2.0 * n_between - 1.0) * pi;
        return field.reduced_potential(corner - boundary_margin, 0) - a.value;
    }

    double glo = field.reduced_gradient(lo + boundary_margin, 0);
    double ghi = field.reduced_gradient(hi - boundary_margin, 0);
    if (!(glo > 0.0 && ghi < 0.0))
        throw merged_wells_error("no saddle between the requested wells");
    double x0 = lo + boundary_margin, x1 = hi - boundary_margin;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (x0 + x1);
        const double gm = field.reduced_gradient(mid, 0);
        if (std::abs(gm) < 1e-12) {
            x0 = x1 = mid;
            break;
        }
        (gm > 0.0 ? x0 : x1) = mid;
    }
    const double saddle_s = 0.5 * (x0 + x1);
    if (field.reduced_curvature(saddle_s, 0) > 0.0)
        throw merged_wells_error("stationary point between wells is not a ridge");
    return field.reduced_potential(saddle_s, 0) - a.value;
}

std::vector<GridSample> landscape_grid(const PotentialField& field,
                                       double sigma_lo, double sigma_hi, int n_sigma,
                                       double delta_lo, double delta_hi, int n_delta,
                                       int zeta_index) {
    if (n_sigma < 2 || n_delta < 2) throw std::domain_error("grid needs at least 2x2 points");
    std::vector<GridSample> rows;
    rows.reserve(static_cast<std::size_t>(n_sigma) * static_cast<std::size_t>(n_delta));
    for (int i = 0; i < n_sigma; ++i) {
        const double sg = sigma_lo + (sigma_hi - sigma_lo) * double(i) / (n_sigma - 1);
        for (int k = 0; k < n_delta; ++k) {
            const double dl = delta_lo + (delta_hi - delta_lo) * double(k) / (n_delta - 1);
            rows.push_back({sg, dl, field.value(sg, dl, zeta_index)});
        }
    }
    return rows;
}

} // namespace rfsquid
