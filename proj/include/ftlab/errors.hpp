#pragma once

#include <stdexcept>
#include <string>

namespace ftlab {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Input sits on (or within guard distance of) a partition point c_n,
// where the passage time and the induced branch are ill-defined.
struct PartitionPointError : DomainError {
    int n;
    PartitionPointError(const std::string& what, int n_) : DomainError(what), n(n_) {}
};

struct NotInL2Error : DomainError {
    using DomainError::DomainError;
};

// Iteration failed, overflow, or a result that cannot be trusted.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleProximityError : NumericError {
    int k;
    PoleProximityError(const std::string& what, int k_) : NumericError(what), k(k_) {}
};

// Bad branch word or a Moebius map without a fixed point where one must exist.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedMode : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace ftlab
