#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace urysohn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value was used as a distance but does not belong to the carrier.
class CarrierViolation : public Error {
public:
    using Error::Error;
};

/// The requested operation is not defined for this monoid (e.g. a truncated
/// sum whose supremum is not attained).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

} // namespace urysohn
