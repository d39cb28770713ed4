#include "rfsquid/spectra.hpp"

#include <cmath>
#include <stdexcept>

#include "rfsquid/cpr.hpp"
#include "rfsquid/errors.hpp"
#include "rfsquid/ho.hpp"
#include "rfsquid/units.hpp"

namespace rfsquid {

void validate(const SimpleSpec& spec) {
    if (!(spec.e_c > 0.0) || !(spec.e_l > 0.0))
        throw std::domain_error("e_c and e_l must be positive");
    if (!finite_flux(spec.flux)) throw std::domain_error("flux must be finite");
    if (spec.is_jj()) {
        if (!(spec.jj().e_j > 0.0)) throw std::domain_error("e_j must be positive");
        if (!(spec.jj().chi >= 0.0 && spec.jj().chi < 1.0))
            throw std::domain_error("chi must lie in [0, 1) for spectra");
    } else {
        if (!(spec.qps().e_lq > 0.0) || !(spec.qps().e_q > 0.0))
            throw std::domain_error("e_lq and e_q must be positive");
    }
}

namespace {

// Quadratic oscillator blocks in a basis of zero-point width zpf.
void add_quadratic(Eigen::MatrixXd& h, double e_c, double e_l, double flux, double zpf) {
    const int dim = static_cast<int>(h.rows());
    const double nzpf = 0.5 / zpf;
    const double lin = -e_l * two_pi * flux;      // coefficient of phi
    const double c0 = 0.5 * e_l * two_pi * flux * two_pi * flux;
    for (int n = 0; n < dim; ++n) {
        h(n, n) += 4.0 * e_c * nzpf * nzpf * (2.0 * n + 1.0) +
                   0.5 * e_l * zpf * zpf * (2.0 * n + 1.0) + c0;
        if (n + 1 < dim) {
            const double x1 = zpf * std::sqrt(n + 1.0);
            h(n + 1, n) += lin * x1;
            h(n, n + 1) += lin * x1;
        }
        if (n + 2 < dim) {
            const double x2 = std::sqrt((n + 1.0) * (n + 2.0));
            const double phi2 = zpf * zpf * x2;
            const double n2 = -nzpf * nzpf * x2;
            h(n + 2, n) += 0.5 * e_l * phi2 + 4.0 * e_c * n2;
            h(n, n + 2) += 0.5 * e_l * phi2 + 4.0 * e_c * n2;
        }
    }
}

// Add c * cos(k phi_hat) for a basis centered at phi = 0:
// <m|cos(k phi)|n> = cos(|m-n| pi/2) B_{min,|m-n|}(k zpf).
void add_cosine(Eigen::MatrixXd& h, double c, double k_harm, double zpf) {
    const int dim = static_cast<int>(h.rows());
    const double y = k_harm * zpf;
    // Momentum-kick reach bound: elements vanish beyond y ~ sqrt(2 dim).
    if (y > std::sqrt(2.0 * dim + 1.0) + 30.0) return;
    std::vector<LogValue> diag;
    for (int j = 0; j < dim; j += 2) {
        const double parity = (j % 4 == 0) ? 1.0 : -1.0; // cos(j pi / 2)
        displacement_diagonal(j, y, dim - j, diag);
        for (int n = 0; n + j < dim; ++n) {
            const double v = c * parity * diag[static_cast<std::size_t>(n)].value();
            h(n + j, n) += v;
            if (j != 0) h(n, n + j) += v;
        }
    }
}

std::vector<double> lowest_eigenvalues(const Eigen::MatrixXd& h, int count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw convergence_error("dense eigensolver failed");
    const int n = std::min<int>(count, static_cast<int>(h.rows()));
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

} // namespace

Eigen::MatrixXd jj_hamiltonian_matrix(const SimpleSpec& spec, int dim, double series_tol) {
    validate(spec);
    if (!spec.is_jj()) throw std::domain_error("junction variant required");
    if (dim < 4) throw std::domain_error("basis dimension too small");

    const double e_j = spec.jj().e_j;
    const double chi = spec.jj().chi;
    const double k_basis = spec.e_l + e_j; // E''_WSi(0) = e_j for every chi
    const double zpf = std::pow(2.0 * spec.e_c / k_basis, 0.25);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    add_quadratic(h, spec.e_c, spec.e_l, spec.flux.phi, zpf);

    const int terms = cpr_series_terms_for(e_j, chi, series_tol);
    const auto coeffs = cpr_series_coefficients(e_j, chi, terms);
    for (int k = 1; k <= terms; ++k)
        add_cosine(h, coeffs[static_cast<std::size_t>(k - 1)], double(k), zpf);
    return h;
}

Eigen::MatrixXd qps_hamiltonian_matrix(const SimpleSpec& spec, int ho_dim, int m_wells) {
    validate(spec);
    if (spec.is_jj()) throw std::domain_error("phase-slip variant required");
    if (ho_dim < 2 || m_wells < 1) throw std::domain_error("basis too small");

    const double e_lq = spec.qps().e_lq;
    const double e_q = spec.qps().e_q;
    const double k_site = spec.e_l + e_lq;
    const double zpf = std::pow(2.0 * spec.e_c / k_site, 0.25);
    const double f_site = std::sqrt(8.0 * spec.e_c * k_site);
    const double e_eff = spec.e_l * e_lq / k_site;
    const double dphi = two_pi * e_lq / k_site; // adjacent site separation

    const int sites = 2 * m_wells + 1;
    const int dim = sites * ho_dim;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

    // Site-diagonal blocks are exact oscillators on the site parabola.
    for (int s = 0; s < sites; ++s) {
        const int m = s - m_wells;
        const double off = 0.5 * e_eff * two_pi * two_pi * (spec.flux.phi - m) *
                           (spec.flux.phi - m);
        for (int n = 0; n < ho_dim; ++n)
            h(s * ho_dim + n, s * ho_dim + n) = off + f_site * (n + 0.5);
    }

    // Nearest-neighbor hopping of strength -e_q/2 through the displaced
    // inter-site overlaps.
    const Eigen::MatrixXd overlap = displacement_matrix(-dphi / (2.0 * zpf), ho_dim);
    const Eigen::MatrixXd hop = -0.5 * e_q * overlap;
    for (int s = 0; s + 1 < sites; ++s) {
        h.block((s + 1) * ho_dim, s * ho_dim, ho_dim, ho_dim) = hop;
        h.block(s * ho_dim, (s + 1) * ho_dim, ho_dim, ho_dim) = hop.transpose();
    }
    return h;
}

Spectrum spectrum_jj(const SimpleSpec& spec, int n_levels, const SpectraOptions& opts) {
    validate(spec);
    if (n_levels < 1) throw std::domain_error("n_levels must be positive");

    int dim = opts.ho_dim;
    auto prev = lowest_eigenvalues(jj_hamiltonian_matrix(spec, dim, opts.series_tol), n_levels);
    Spectrum result;
    for (;;) {
        const int next_dim = 2 * dim;
        if (next_dim > opts.max_ho_dim) {
            // Report the best available values with stale flags.
            result.eigenvalues = prev;
            result.converged.assign(prev.size(), false);
            result.ho_dim = dim;
            return result;
        }
        auto cur = lowest_eigenvalues(jj_hamiltonian_matrix(spec, next_dim, opts.series_tol),
                                      n_levels);
        bool all_ok = true;
        std::vector<bool> flags(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            flags[i] = std::abs(cur[i] - prev[i]) < opts.tol;
            all_ok = all_ok && flags[i];
        }
        if (all_ok) {
            result.eigenvalues = cur;
            result.converged = flags;
            result.ho_dim = next_dim;
            return result;
        }
        prev = std::move(cur);
        dim = next_dim;
    }
}

Spectrum spectrum_qps(const SimpleSpec& spec, int n_levels, int m_wells,
                      const SpectraOptions& opts) {
    validate(spec);
    if (n_levels < 1) throw std::domain_error("n_levels must be positive");

    int ho = opts.qps_ho_dim;
    int wells = m_wells;
    auto prev = lowest_eigenvalues(qps_hamiltonian_matrix(spec, ho, wells), n_levels);
    Spectrum result;
    for (;;) {
        // Double each truncation direction separately and require stability
        // in both.
        const int next_ho = 2 * ho;
        const int next_wells = 2 * wells + 1;
        if (next_ho > opts.max_ho_dim || next_wells > opts.max_wells) {
            result.eigenvalues = prev;
            result.converged.assign(prev.size(), false);
            result.ho_dim = ho;
            result.well_sites = 2 * wells + 1;
            return result;
        }
        auto more_ho = lowest_eigenvalues(qps_hamiltonian_matrix(spec, next_ho, wells),
                                          n_levels);
        auto more_wells = lowest_eigenvalues(qps_hamiltonian_matrix(spec, ho, next_wells),
                                             n_levels);
        bool all_ok = true;
        std::vector<bool> flags(prev.size());
        for (std::size_t i = 0; i < prev.size(); ++i) {
            flags[i] = std::abs(more_ho[i] - prev[i]) < opts.tol &&
                       std::abs(more_wells[i] - prev[i]) < opts.tol;
            all_ok = all_ok && flags[i];
        }
        if (all_ok) {
            // Keep the finer oscillator basis values; they bound the levels
            // from above at least as tightly.
            result.eigenvalues = more_ho;
            result.converged = flags;
            result.ho_dim = next_ho;
            result.well_sites = 2 * wells + 1;
            return result;
        }
        prev = lowest_eigenvalues(qps_hamiltonian_matrix(spec, next_ho, next_wells), n_levels);
        ho = next_ho;
        wells = next_wells;
    }
}

std::vector<double> compare_spectra(const Spectrum& jj, const Spectrum& qps, int k) {
    if (k < 1) throw std::domain_error("comparison depth must be positive");
    if (jj.eigenvalues.size() <= static_cast<std::size_t>(k) ||
        qps.eigenvalues.size() <= static_cast<std::size_t>(k))
        throw std::domain_error("spectra do not reach the requested level");
    for (int j = 0; j <= k; ++j)
        if (!jj.converged[static_cast<std::size_t>(j)] ||
            !qps.converged[static_cast<std::size_t>(j)])
            throw std::domain_error("unconverged spectra refused for comparison");
    std::vector<double> deltas(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        const double t_jj = jj.eigenvalues[static_cast<std::size_t>(j)] - jj.eigenvalues[0];
        const double t_qps = qps.eigenvalues[static_cast<std::size_t>(j)] - qps.eigenvalues[0];
        deltas[static_cast<std::size_t>(j - 1)] = std::abs(t_jj - t_qps);
    }
    return deltas;
}

} // namespace rfsquid
