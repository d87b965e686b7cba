#pragma once

#include <stdexcept>
#include <string>

namespace heunlock {

/// Precondition violated by the caller (bad index, out-of-range parameter).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in the requested arithmetic.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Iterative procedure hit its cap without meeting the tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A certified numerical result contradicts a proven property
/// (e.g. a negative determinant where positivity is a theorem).
class ContradictionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Two independent computation paths disagree beyond their tolerances.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace heunlock
