#include "rfsquid/circuit.hpp"

#include <stdexcept>

namespace rfsquid {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string(name) + " must be a positive finite number");
}

} // namespace

void validate(const CircuitSpec& spec) {
    require_positive(spec.e_c_sigma, "e_c_sigma");
    require_positive(spec.e_c_delta, "e_c_delta");
    require_positive(spec.e_ls, "e_ls");
    require_positive(spec.e_lp, "e_lp");
    if (!(spec.e_c_sigma < spec.e_c_delta))
        throw std::domain_error("e_c_sigma must be smaller than e_c_delta (sigma is the heavy mode)");
    if (spec.is_jj()) {
        const auto& jj = spec.jj();
        require_positive(jj.e0, "weak_link.e0");
        if (!(jj.chi >= 0.0 && jj.chi <= 1.0) || !std::isfinite(jj.chi))
            throw std::domain_error("weak_link.chi must lie in [0, 1]");
    } else {
        const auto& qps = spec.qps();
        require_positive(qps.e_q, "weak_link.e_q");
        require_positive(qps.e_lq, "weak_link.e_lq");
    }
}

void validate(const PhysicalElements& elems) {
    require_positive(elems.c_b, "c_b");
    require_positive(elems.c_s, "c_s");
    require_positive(elems.l_p, "l_p");
    require_positive(elems.l_s, "l_s");
    require_positive(elems.l_q, "l_q");
}

CircuitSpec to_circuit_spec(const PhysicalElements& elems, WeakLinkModel link) {
    validate(elems);
    CircuitSpec spec;
    spec.e_c_delta = capacitance_to_charging_energy(elems.c_s);
    spec.e_c_sigma = capacitance_to_charging_energy(elems.c_s + 2.0 * elems.c_b);
    spec.e_ls = inductance_to_energy(elems.l_s);
    spec.e_lp = inductance_to_energy(elems.l_p);
    spec.weak_link = link;
    validate(spec);
    return spec;
}

} // namespace rfsquid
