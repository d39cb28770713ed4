#pragma once

#include <stdexcept>
#include <string>

namespace rfsquid {

// Thrown when an evaluation hits a genuine singular point of the model
// (e.g. the sawtooth current at odd multiples of pi).
class singular_point_error : public std::domain_error {
public:
    explicit singular_point_error(const std::string& what) : std::domain_error(what) {}
};

// A tracked potential well lost positive-definite curvature.
class vanished_well_error : public std::runtime_error {
public:
    explicit vanished_well_error(const std::string& what) : std::runtime_error(what) {}
};

// Two adjacent wells merged; no saddle separates them.
class merged_wells_error : public std::runtime_error {
public:
    explicit merged_wells_error(const std::string& what) : std::runtime_error(what) {}
};

// A perturbation-theory denominator fell below the degeneracy floor.
// Carries the level pair that collided; sweep engines treat this as a
// jump trigger rather than a fatal failure.
class resonance_error : public std::runtime_error {
public:
    resonance_error(const std::string& what, int level, long partner)
        : std::runtime_error(what), level_(level), partner_(partner) {}
    int level() const { return level_; }
    long partner() const { return partner_; }

private:
    int level_;
    long partner_;
};

// A scan finished without locating the requested feature.
class not_found_error : public std::runtime_error {
public:
    explicit not_found_error(const std::string& what) : std::runtime_error(what) {}
};

// Sweep could not be started from the requested well.
class initialization_error : public std::runtime_error {
public:
    explicit initialization_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine exhausted its iteration budget.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rfsquid
