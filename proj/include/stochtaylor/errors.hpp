#pragma once

#include <stdexcept>
#include <string>

namespace stochtaylor {

/** @brief Base class for every error raised by the library. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** @brief Invalid argument or precondition violation (bad step, bad index, ...). */
class DomainError : public Error {
public:
    using Error::Error;
};

/** @brief A requested truncation order or tensor size exceeds the configured ceiling. */
class CapExceeded : public DomainError {
public:
    using DomainError::DomainError;
};

enum class StoreErrorKind { Io, Exists, VersionMismatch, Truncated, Checksum, Malformed, InsufficientCap, ProfileMismatch };

class StoreError : public Error {
public:
    StoreError(StoreErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    StoreErrorKind kind() const noexcept { return kind_; }

private:
    StoreErrorKind kind_;
};

}  // namespace stochtaylor
