#pragma once

#include <stdexcept>
#include <string>

namespace phav {

// Error hierarchy. The CLI maps these onto exit codes:
//   ArgumentError   -> 1 (bad parameter value, usage)
//   ValidationError -> 2 (input data or file fails its schema/invariants)
//   NumericalError  -> 3 (computation could not produce a valid result)
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Raised by the truncated-Fock oracle when the basis is too small for the state.
class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Throws ArgumentError(what) unless cond holds.
void require_argument(bool cond, const std::string& what);

}  // namespace phav
