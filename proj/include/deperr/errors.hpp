#pragma once

#include <stdexcept>
#include <string>

namespace deperr {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A model or configuration violates one of its invariants.
class ValidationError : public Error {
  public:
    ValidationError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

// An argument lies outside the domain of the function (t <= 0, negative x, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// A metric is undefined at the requested point (SF = 1 or SF = 0 where a ratio needs it).
class SingularityError : public DomainError {
  public:
    using DomainError::DomainError;
};

// Relative error requested where the independent reference value is zero.
class DivisionError : public DomainError {
  public:
    using DomainError::DomainError;
};

// Too many components for subset enumeration.
class CapacityError : public DomainError {
  public:
    using DomainError::DomainError;
};

// The requested operation is not available for this model family.
class CapabilityError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace deperr
