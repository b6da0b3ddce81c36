#pragma once

#include <stdexcept>
#include <string>

namespace scq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularTransformError : public Error {
public:
    using Error::Error;
};

/// Elimination pivot at or below the definiteness threshold.
class PivotError : public Error {
public:
    using Error::Error;
};

/// A singular value sits too close to the free-mode threshold to classify.
class ThresholdAmbiguityError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefiniteError : public Error {
public:
    using Error::Error;
};

/// Symplectic eigenvalues could not be matched into +/- pairs.
class PairingError : public Error {
public:
    using Error::Error;
};

/// Requested primitive basis cannot represent the mode's operators.
class BasisMismatchError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class CutoffExceededError : public Error {
public:
    CutoffExceededError(const std::string& what, int mode) : Error(what), mode_(mode) {}
    int mode() const noexcept { return mode_; }

private:
    int mode_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace scq
