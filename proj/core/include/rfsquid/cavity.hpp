#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rfsquid/circuit.hpp"
#include "rfsquid/sweep.hpp"

namespace rfsquid {

/// Renormalized cavity mode frequencies and couplings to the circuit mode.
struct CavityParams {
    double f_a = 0.0; // GHz
    double f_b = 0.0; // GHz
    double g_a = 0.0; // GHz (g/2pi)
    double g_b = 0.0; // GHz
    bool tie_gb_to_ga = false; // enforce g_b = sqrt(f_b/f_a) * g_a
};

void validate(const CavityParams& cav);

/// Eigenvalues of the single-excitation three-mode matrix
///   [[f_q, g_a, g_b], [g_a, f_a, 0], [g_b, 0, f_b]],
/// ascending. The sum equals f_q + f_a + f_b exactly.
std::array<double, 3> hybridize(double f_q, const CavityParams& cav);

/// Substitute the lowest hybridized branch for each bare frequency.
ResonanceCurve dressed_branch(const ResonanceCurve& bare, const CavityParams& cav);

/// Parameters a fit may vary, addressed by name:
/// e0, chi, e_q, e_lq, e_ls, e_lp, e_c_sigma, e_c_delta, f_a, f_b, g_a, g_b.
struct FitProblem {
    std::vector<std::pair<double, double>> observed; // (flux, frequency GHz)
    std::vector<std::string> free_names;
    std::map<std::string, std::pair<double, double>> bounds;
    CircuitSpec initial_spec;
    CavityParams initial_cavity;
    int max_iterations = 400;
};

struct FitResult {
    CircuitSpec spec;
    CavityParams cavity;
    double loss = 0.0; // sum of squared residuals, GHz^2
    std::vector<double> residuals;
    int iterations = 0;
    bool hit_iteration_limit = false;
    std::vector<std::string> warnings;
};

/// Model pipeline: frequencies predicted at the observed fluxes.
using ModelPipeline = std::function<std::vector<double>(
    const CircuitSpec&, const CavityParams&, const std::vector<double>& fluxes)>;

/// Sweep + lowest-branch hybridization pipeline (the measured branch).
ModelPipeline make_sweep_pipeline(const SweepOptions& opts = {});

/// Derivative-free simplex minimization of the squared-residual loss over
/// the masked parameters. Non-finite losses reject the step; the result
/// always carries the non-uniqueness warning (several parameter sets fit
/// the same curve equally well).
FitResult fit(const FitProblem& problem, const ModelPipeline& pipeline);

} // namespace rfsquid
