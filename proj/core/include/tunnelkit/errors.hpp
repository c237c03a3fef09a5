#pragma once

#include <stdexcept>
#include <string>

namespace tunnelkit {

// Precondition on a physical input violated (non-positive energy, E >= V0 where
// tunneling is required, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Transmission amplitude too small to carry a phase in double precision.
class OpaqueBarrierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Simulation or scenario set-up that violates a resolution/geometry guard.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Breakdown inside a numerical kernel (zero pivot, non-finite state).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tunnelkit
