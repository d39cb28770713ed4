#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfsquid/circuit.hpp"

namespace rfsquid {

/// A located potential minimum. Positions are (sigma, delta) in radians;
/// for phase-slip circuits the record belongs to one zeta = 2*pi*m section
/// and well_index is m. For junction circuits well_index labels the
/// corrugation valley centered near sigma - delta = 2*pi*n.
struct MinimumRecord {
    int well_index = 0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double value = 0.0;                  // GHz
    Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero(); // GHz/rad^2
    std::vector<double> mode_freqs;      // GHz, ascending
};

struct SeedFailure {
    int well_index = 0;
    std::string message;
};

struct FindMinimaResult {
    std::vector<MinimumRecord> minima;
    std::vector<int> vanished; // wells whose curvature dropped below the floor
    std::vector<SeedFailure> failures;
};

/// Classical potential of the two-mode circuit at fixed external flux.
/// The corrugation lives along s = sigma - delta; the orthogonal
/// combination v = sigma + delta sees only the series inductance.
class PotentialField {
public:
    PotentialField(CircuitSpec spec, FluxPoint flux);

    const CircuitSpec& spec() const { return spec_; }
    FluxPoint flux() const { return flux_; }

    /// 2 for the junction variant, 3 for the phase-slip variant (whose
    /// third coordinate zeta is restricted to the lattice {2 pi m}).
    int dimensionality() const { return spec_.is_qps() ? 3 : 2; }

    double value(double sigma, double delta, int zeta_index = 0) const;
    Eigen::Vector2d gradient(double sigma, double delta, int zeta_index = 0) const;
    Eigen::Matrix2d hessian(double sigma, double delta, int zeta_index = 0) const;

    /// Reduced 1D potential along the corrugation coordinate s at v = 0:
    /// U(s) = E_LP (s - 2 pi Phi)^2 / 2 + W(s). For the phase-slip variant
    /// W depends on the section index.
    double reduced_potential(double s, int zeta_index = 0) const;
    double reduced_gradient(double s, int zeta_index = 0) const;
    double reduced_curvature(double s, int zeta_index = 0) const;

private:
    CircuitSpec spec_;
    FluxPoint flux_;
};

PotentialField build_potential(const CircuitSpec& spec, FluxPoint flux);

/// Normal-mode frequencies f_k = sqrt(8 lambda_k) from the eigenvalues of
/// Ec^{1/2} H Ec^{1/2}, ascending. Throws vanished_well_error if the
/// Hessian is not positive definite (eigenvalue <= curvature floor).
std::vector<double> normal_modes(const Eigen::MatrixXd& hessian,
                                 const Eigen::VectorXd& charging_diag,
                                 double curvature_floor = 1e-6);

/// Smallest-eigenvalue floor below which a well counts as vanished.
inline constexpr double default_curvature_floor = 1e-6; // GHz/rad^2

/// Locate the minimum of one labeled well; std::nullopt when the well has
/// vanished at this flux. Newton iteration seeded at the parabolic-limit
/// well center with a scan/bisection safeguard.
std::optional<MinimumRecord> locate_well(const PotentialField& field, int well_index,
                                         double grad_tol = 1e-10);

/// All wells in [well_lo, well_hi], deduplicated by position. Wells that
/// fail to converge are reported per seed instead of aborting the search.
FindMinimaResult find_minima(const PotentialField& field, int well_lo, int well_hi,
                             double grad_tol = 1e-10);

/// Saddle-point energy between two adjacent junction-circuit wells, minus
/// the energy of well a. Throws merged_wells_error when no saddle separates
/// the wells and std::domain_error for phase-slip fields (their sections
/// form a discrete lattice with no continuous saddle path).
double barrier_height(const PotentialField& field, const MinimumRecord& a,
                      const MinimumRecord& b);

/// Row of a landscape grid evaluation for plotting.
struct GridSample {
    double coord1, coord2, energy;
};

std::vector<GridSample> landscape_grid(const PotentialField& field,
                                       double sigma_lo, double sigma_hi, int n_sigma,
                                       double delta_lo, double delta_hi, int n_delta,
                                       int zeta_index = 0);

} // namespace rfsquid
