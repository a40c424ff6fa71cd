// errors.hpp — exception hierarchy shared by every qprobe module.
//
// The CLI maps each family onto an exit code:
//   ConfigError   -> 2  (invalid scenario / usage)
//   DomainError   -> 3  (physics outside the model's domain, overflow)
//   ResourceError -> 4  (dimension cap exceeded)

#pragma once

#include <stdexcept>
#include <string>

namespace qprobe {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

// Shape mismatch between operators or against a ProductSpace.
class DimensionError : public Error {
public:
    using Error::Error;
};

class NonHermitianError : public DomainError {
public:
    using DomainError::DomainError;
};

// A Boltzmann factor or matrix-function value left the representable range.
class OverflowError : public DomainError {
public:
    using DomainError::DomainError;
};

} // namespace qprobe
