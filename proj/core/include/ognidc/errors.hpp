#pragma once

#include <stdexcept>
#include <string>

namespace ognidc {

// Dimension or length disagreement between containers that must conform.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Value outside its admissible domain (non-finite input, confidence outside
// [0,1], invalid flag value, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Problem too large for a routine that materializes dense storage.
class SizeError : public std::invalid_argument {
public:
    explicit SizeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Operation incompatible with the current state of the object.
class StateError : public std::logic_error {
public:
    explicit StateError(const std::string& msg) : std::logic_error(msg) {}
};

// A metric or reduction was requested over an empty validity mask.
class EmptyMaskError : public std::invalid_argument {
public:
    explicit EmptyMaskError(const std::string& msg) : std::invalid_argument(msg) {}
};

// The normal equations are singular (no observation pins the constant mode).
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& msg) : std::runtime_error(msg) {}
};

// The iterative solver hit its iteration cap with an unusable residual.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// The iterative solver produced a non-finite residual.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unreadable file content.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ognidc
