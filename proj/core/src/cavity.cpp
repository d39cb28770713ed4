#include "rfsquid/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rfsquid/errors.hpp"

namespace rfsquid {

void validate(const CavityParams& cav) {
    if (!(cav.f_a > 0.0) || !(cav.f_b > 0.0))
        throw std::domain_error("cavity frequencies must be positive");
    if (!(cav.f_a < cav.f_b))
        throw std::domain_error("f_a must be below f_b");
    if (cav.g_a < 0.0 || cav.g_b < 0.0)
        throw std::domain_error("couplings must be non-negative");
    if (cav.tie_gb_to_ga) {
        const double expected = std::sqrt(cav.f_b / cav.f_a) * cav.g_a;
        if (std::abs(cav.g_b - expected) > 1e-9 * std::max(1.0, expected))
            throw std::domain_error("g_b is tied to sqrt(f_b/f_a) * g_a but disagrees");
    }
}

std::array<double, 3> hybridize(double f_q, const CavityParams& cav) {
    if (!(f_q > 0.0)) throw std::domain_error("circuit frequency must be positive");
    validate(cav);
    Eigen::Matrix3d m;
    m << f_q, cav.g_a, cav.g_b,
         cav.g_a, cav.f_a, 0.0,
         cav.g_b, 0.0, cav.f_b;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
    std::array<double, 3> out{solver.eigenvalues()(0), solver.eigenvalues()(1),
                              solver.eigenvalues()(2)};
    // Pin the trace identity exactly; the eigensolver is accurate to a few
    // ulps but the contract promises the sum bit-for-bit.
    const double trace = f_q + cav.f_a + cav.f_b;
    out[1] = trace - out[0] - out[2];
    return out;
}

ResonanceCurve dressed_branch(const ResonanceCurve& bare, const CavityParams& cav) {
    validate(cav);
    ResonanceCurve dressed = bare;
    for (auto& p : dressed.points)
        p.f_hybridized = hybridize(p.f_bare, cav)[0];
    return dressed;
}

ModelPipeline make_sweep_pipeline(const SweepOptions& opts) {
    return [opts](const CircuitSpec& spec, const CavityParams& cav,
                  const std::vector<double>& fluxes) {
        SweepPlan plan{spec, fluxes, std::nullopt};
        const auto curve = dressed_branch(run_sweep(plan, opts), cav);
        std::vector<double> out;
        out.reserve(fluxes.size());
        // The curve may contain refined pre-jump points; sample at the
        // requested fluxes only.
        std::size_t k = 0;
        for (double f : fluxes) {
            while (k < curve.points.size() && std::abs(curve.points[k].flux - f) > 1e-12)
                ++k;
            if (k == curve.points.size())
                throw convergence_error("pipeline lost a requested flux point");
            out.push_back(*curve.points[k].f_hybridized);
        }
        return out;
    };
}

namespace {

struct ParamAccess {
    std::function<double(const CircuitSpec&, const CavityParams&)> get;
    std::function<void(CircuitSpec&, CavityParams&, double)> set;
};

ParamAccess access_for(const std::string& name) {
    auto jj_field = [](auto member) {
        return ParamAccess{
            [member](const CircuitSpec& s, const CavityParams&) { return s.jj().*member; },
            [member](CircuitSpec& s, CavityParams&, double v) {
                std::get<JosephsonLink>(s.weak_link).*member = v;
            }};
    };
    auto qps_field = [](auto member) {
        return ParamAccess{
            [member](const CircuitSpec& s, const CavityParams&) { return s.qps().*member; },
            [member](CircuitSpec& s, CavityParams&, double v) {
                std::get<PhaseSlipLink>(s.weak_link).*member = v;
            }};
    };
    auto spec_field = [](double CircuitSpec::* member) {
        return ParamAccess{
            [member](const CircuitSpec& s, const CavityParams&) { return s.*member; },
            [member](CircuitSpec& s, CavityParams&, double v) { s.*member = v; }};
    };
    auto cav_field = [](double CavityParams::* member) {
        return ParamAccess{
            [member](const CircuitSpec&, const CavityParams& c) { return c.*member; },
            [member](CircuitSpec&, CavityParams& c, double v) { c.*member = v; }};
    };

    if (name == "e0") return jj_field(&JosephsonLink::e0);
    if (name == "chi") return jj_field(&JosephsonLink::chi);
    if (name == "e_q") return qps_field(&PhaseSlipLink::e_q);
    if (name == "e_lq") return qps_field(&PhaseSlipLink::e_lq);
    if (name == "e_ls") return spec_field(&CircuitSpec::e_ls);
    if (name == "e_lp") return spec_field(&CircuitSpec::e_lp);
    if (name == "e_c_sigma") return spec_field(&CircuitSpec::e_c_sigma);
    if (name == "e_c_delta") return spec_field(&CircuitSpec::e_c_delta);
    if (name == "f_a") return cav_field(&CavityParams::f_a);
    if (name == "f_b") return cav_field(&CavityParams::f_b);
    if (name == "g_a") return cav_field(&CavityParams::g_a);
    if (name == "g_b") return cav_field(&CavityParams::g_b);
    throw std::domain_error("unknown fit parameter: " + name);
}

} // namespace

FitResult fit(const FitProblem& problem, const ModelPipeline& pipeline) {
    if (problem.free_names.empty())
        throw std::domain_error("fit needs at least one free parameter");
    if (problem.observed.empty())
        throw std::domain_error("fit needs observed data");
    for (const auto& [name, b] : problem.bounds)
        if (!std::isfinite(b.first) || !std::isfinite(b.second) || !(b.first < b.second))
            throw std::domain_error("bounds for " + name + " must be finite and ordered");

    const std::size_t dim = problem.free_names.size();
    std::vector<ParamAccess> access;
    std::vector<std::pair<double, double>> bounds;
    for (const auto& name : problem.free_names) {
        access.push_back(access_for(name));
        auto it = problem.bounds.find(name);
        if (it == problem.bounds.end())
            throw std::domain_error("missing bounds for free parameter " + name);
        bounds.push_back(it->second);
    }

    std::vector<double> fluxes;
    std::vector<double> targets;
    for (const auto& [f, y] : problem.observed) {
        fluxes.push_back(f);
        targets.push_back(y);
    }

    FitResult result;
    result.warnings.push_back(
        "fitted parameters are not unique; distinct parameter sets can match the same curve");

    int rejected_steps = 0;
    auto loss_at = [&](const std::vector<double>& params) {
        CircuitSpec spec = problem.initial_spec;
        CavityParams cav = problem.initial_cavity;
        for (std::size_t i = 0; i < dim; ++i) access[i].set(spec, cav, params[i]);
        if (cav.tie_gb_to_ga) cav.g_b = std::sqrt(cav.f_b / cav.f_a) * cav.g_a;
        try {
            const auto model = pipeline(spec, cav, fluxes);
            double loss = 0.0;
            for (std::size_t i = 0; i < model.size(); ++i) {
                const double r = model[i] - targets[i];
                loss += r * r;
            }
            if (!std::isfinite(loss)) {
                ++rejected_steps;
                return std::numeric_limits<double>::max();
            }
            return loss;
        } catch (const std::exception&) {
            ++rejected_steps;
            return std::numeric_limits<double>::max();
        }
    };
    auto clamp = [&](std::vector<double>& p) {
        for (std::size_t i = 0; i < dim; ++i)
            p[i] = std::clamp(p[i], bounds[i].first, bounds[i].second);
    };

    // Nelder-Mead with the standard coefficients.
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;
    std::vector<std::vector<double>> simplex(dim + 1);
    std::vector<double> f_vals(dim + 1);
    std::vector<double> start(dim);
    for (std::size_t i = 0; i < dim; ++i)
        start[i] = std::clamp(
            access[i].get(problem.initial_spec, problem.initial_cavity),
            bounds[i].first, bounds[i].second);
    for (std::size_t v = 0; v <= dim; ++v) {
        simplex[v] = start;
        if (v > 0) {
            const std::size_t i = v - 1;
            const double span = bounds[i].second - bounds[i].first;
            double step = 0.05 * span;
            if (start[i] + step > bounds[i].second) step = -step;
            simplex[v][i] += step;
        }
        clamp(simplex[v]);
        f_vals[v] = loss_at(simplex[v]);
    }

    int iter = 0;
    for (; iter < problem.max_iterations; ++iter) {
        // Order ascending by loss.
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return f_vals[a] < f_vals[b]; });
        std::vector<std::vector<double>> ordered(dim + 1);
        std::vector<double> ordered_f(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            ordered[i] = simplex[idx[i]];
            ordered_f[i] = f_vals[idx[i]];
        }
        simplex = ordered;
        f_vals = ordered_f;

        const double spread = std::abs(f_vals[dim] - f_vals[0]);
        if (spread < 1e-14 * (1.0 + std::abs(f_vals[0]))) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i] / double(dim);

        auto blend = [&](double coeff) {
            std::vector<double> p(dim);
            for (std::size_t i = 0; i < dim; ++i)
                p[i] = centroid[i] + coeff * (centroid[i] - simplex[dim][i]);
            clamp(p);
            return p;
        };

        auto reflected = blend(alpha);
        const double f_ref = loss_at(reflected);
        if (f_ref < f_vals[0]) {
            auto expanded = blend(gamma);
            const double f_exp = loss_at(expanded);
            if (f_exp < f_ref) {
                simplex[dim] = expanded;
                f_vals[dim] = f_exp;
            } else {
                simplex[dim] = reflected;
                f_vals[dim] = f_ref;
            }
            continue;
        }
        if (f_ref < f_vals[dim - 1]) {
            simplex[dim] = reflected;
            f_vals[dim] = f_ref;
            continue;
        }
        auto contracted = blend(-rho);
        const double f_con = loss_at(contracted);
        if (f_con < f_vals[dim]) {
            simplex[dim] = contracted;
            f_vals[dim] = f_con;
            continue;
        }
        for (std::size_t v = 1; v <= dim; ++v) {
            for (std::size_t i = 0; i < dim; ++i)
                simplex[v][i] = simplex[0][i] + shrink * (simplex[v][i] - simplex[0][i]);
            clamp(simplex[v]);
            f_vals[v] = loss_at(simplex[v]);
        }
    }
    result.hit_iteration_limit = (iter == problem.max_iterations);
    if (result.hit_iteration_limit)
        result.warnings.push_back("simplex stopped at the iteration limit");
    if (rejected_steps > 0)
        result.warnings.push_back(std::to_string(rejected_steps) +
                                  " step(s) rejected for non-finite loss");

    std::size_t best = 0;
    for (std::size_t v = 1; v <= dim; ++v)
        if (f_vals[v] < f_vals[best]) best = v;

    result.spec = problem.initial_spec;
    result.cavity = problem.initial_cavity;
    for (std::size_t i = 0; i < dim; ++i)
        access[i].set(result.spec, result.cavity, simplex[best][i]);
    if (result.cavity.tie_gb_to_ga)
        result.cavity.g_b = std::sqrt(result.cavity.f_b / result.cavity.f_a) * result.cavity.g_a;
    result.loss = f_vals[best];
    result.iterations = iter;
    const auto model = pipeline(result.spec, result.cavity, fluxes);
    result.residuals.resize(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
        result.residuals[i] = model[i] - targets[i];
    return result;
}

} // namespace rfsquid
