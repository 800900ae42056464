#pragma once

#include <stdexcept>
#include <string>

namespace reachcount {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input documents that cannot be interpreted (models, properties, CLI inputs).
class InputError : public Error {
public:
    using Error::Error;
};

class MalformedModel : public InputError {
public:
    using InputError::InputError;
};

class MalformedProperty : public InputError {
public:
    using InputError::InputError;
};

class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

class NonFiniteWeight : public InputError {
public:
    using InputError::InputError;
};

class IndexOutOfRange : public InputError {
public:
    using InputError::InputError;
};

class DegenerateDimension : public Error {
public:
    using Error::Error;
};

class NotContained : public Error {
public:
    using Error::Error;
};

class InvalidBounds : public Error {
public:
    using Error::Error;
};

class GridTooLarge : public InputError {
public:
    using InputError::InputError;
};

class InvalidEpsilon : public InputError {
public:
    using InputError::InputError;
};

/// Out-of-range run configuration (flags, budgets).
class InvalidConfig : public Error {
public:
    using Error::Error;
};

}  // namespace reachcount
