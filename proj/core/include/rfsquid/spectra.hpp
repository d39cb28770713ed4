#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rfsquid/circuit.hpp"

namespace rfsquid {

struct SimpleJJ {
    double e_j = 0.0; // GHz
    double chi = 0.0;
};

struct SimpleQPS {
    double e_lq = 0.0; // GHz
    double e_q = 0.0;  // GHz
};

/// Single-loop circuit: 4 E_C n^2 + E_L (phi - 2 pi Phi)^2 / 2 plus either
/// a skewed-cosine junction term or a phase-slip well lattice.
struct SimpleSpec {
    double e_c = 0.0;
    double e_l = 0.0;
    std::variant<SimpleJJ, SimpleQPS> variant;
    FluxPoint flux;

    bool is_jj() const { return std::holds_alternative<SimpleJJ>(variant); }
    const SimpleJJ& jj() const { return std::get<SimpleJJ>(variant); }
    const SimpleQPS& qps() const { return std::get<SimpleQPS>(variant); }
};

void validate(const SimpleSpec& spec);

struct Spectrum {
    std::vector<double> eigenvalues; // ascending, GHz
    std::vector<bool> converged;     // per reported level
    int ho_dim = 0;
    int well_sites = 0;              // 0 for the 1D junction variant
};

struct SpectraOptions {
    int ho_dim = 400;       // junction-variant starting basis size
    int qps_ho_dim = 60;    // per-site levels for the phase-slip variant
    int qps_wells = 10;     // sites m in [-qps_wells, qps_wells]
    int max_ho_dim = 3200;
    int max_wells = 60;
    double tol = 1e-6;          // level stability under basis doubling, GHz
    double series_tol = 1e-9;   // operator tail of the junction series, GHz
};

/// Hamiltonian of the junction variant in the harmonic basis of the total
/// quadratic curvature (E_L + E_J), centered at phi = 0; the cos(k phi)
/// matrix elements come from the displacement-operator identity and the
/// flux enters through an exact linear term.
Eigen::MatrixXd jj_hamiltonian_matrix(const SimpleSpec& spec, int dim,
                                      double series_tol = 1e-9);

/// Hamiltonian of the phase-slip variant in the product basis of well sites
/// and per-site displaced oscillators; the phase-slip term is nearest-
/// neighbor hopping of strength -e_q/2 times the inter-site overlap matrix.
Eigen::MatrixXd qps_hamiltonian_matrix(const SimpleSpec& spec, int ho_dim, int m_wells);

Spectrum spectrum_jj(const SimpleSpec& spec, int n_levels, const SpectraOptions& opts = {});
Spectrum spectrum_qps(const SimpleSpec& spec, int n_levels, int m_wells,
                      const SpectraOptions& opts = {});

/// Per-level |transition-energy| differences |dE_{0->j}^jj - dE_{0->j}^qps|
/// for j = 1..k. Refuses spectra that are not converged through level k.
std::vector<double> compare_spectra(const Spectrum& jj, const Spectrum& qps, int k);

} // namespace rfsquid
