#pragma once

#include <stdexcept>
#include <string>

namespace heatwalk {

// Thrown when an exact computation would exceed a configured resource cap
// (e.g. the lattice-enumeration state cap).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown for parameter combinations the library deliberately does not
// support (composite order in closed-form return probabilities, odd-order
// Dirichlet/Neumann problems, ...).
class unsupported_error : public std::domain_error {
public:
    explicit unsupported_error(const std::string& msg) : std::domain_error(msg) {}
};

// A linear map that does not preserve the direction set R(N).
class invalid_symmetry_error : public std::invalid_argument {
public:
    explicit invalid_symmetry_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A half-line series extended with the wrong parity.
class invalid_extension_error : public std::invalid_argument {
public:
    explicit invalid_extension_error(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace heatwalk
