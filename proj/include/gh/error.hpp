#pragma once

#include <stdexcept>
#include <string>

namespace gh {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input shape: non-square matrix, NaN entry, index out of range.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (metric axiom, parameter range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A hard size cap would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A randomized generator gave up after too many rejections.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// A checked theorem failed on a concrete instance. `payload()` carries a
/// serialized counterexample (JSON text) when one is available.
class TheoremViolation : public Error {
public:
    explicit TheoremViolation(const std::string& what, std::string payload = {})
        : Error(what), payload_(std::move(payload)) {}

    const std::string& payload() const noexcept { return payload_; }

private:
    std::string payload_;
};

/// Internal invariant broken; indicates a bug rather than bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace gh
