#pragma once

#include <stdexcept>
#include <string>

namespace polydict {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes, lag counts or indices do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A configuration value violates its documented invariant.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A dictionary atom has (numerically) zero norm, so atom selection is undefined.
class ZeroAtomError : public Error {
public:
    using Error::Error;
};

/// Quantity normalised by the signal energy is undefined for an all-zero signal.
class ZeroSignalError : public Error {
public:
    using Error::Error;
};

/// Room / source / microphone geometry is not admissible.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (PLYM1, signal files, experiment configs).
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace polydict
