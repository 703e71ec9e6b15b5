#pragma once

#include <stdexcept>
#include <string>

namespace foi {

/// Bad or inconsistent input data (schema, parse, duplicate, file access).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: singular or non-positive-definite matrices, undefined statistics,
/// arguments outside a function's domain.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace foi
