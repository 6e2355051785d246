#pragma once

#include <stdexcept>
#include <string>

namespace survival {

/// Argument outside the domain of an operation (negative time, R_p = 1 in a
/// division, invalid instrument terms, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A bracketed root search found no sign change, or did not converge.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hedge or barbell system has no usable (non-zero) solution.
class DegenerateTradeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace survival
