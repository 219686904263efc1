#pragma once

#include <stdexcept>
#include <string>

namespace mmskit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Agent or good index outside the instance.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (d = 0, alpha out of range, zero MMS, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed text or JSON input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition (inapplicable rule, m < 2n, malformed allocation, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// The exact oracle hit its node budget or size cap. No value is returned in that case.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A bag-filling phase ran out of goods with agents still unsatisfied.
/// `state()` holds a JSON dump of the allocator state at the failure point.
class GuaranteeViolation : public Error {
public:
    GuaranteeViolation(const std::string& what, std::string state)
        : Error(what), state_(std::move(state)) {}

    const std::string& state() const noexcept { return state_; }

private:
    std::string state_;
};

}  // namespace mmskit
