// errors.hpp - Exception types shared by the dipolar quantum battery library

#pragma once

#include <stdexcept>
#include <string>

namespace dqb {

/// Input failed a structural check (non-Hermitian matrix, bad trace, negative eigenvalue).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical parameters outside their domain (T <= 0, gamma < 0, non-finite values).
class ParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time integration lost accuracy; the message suggests a smaller step.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario configuration or command line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dqb
