#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Tensor operands share a factor label.
class LabelCollision : public Error {
public:
    using Error::Error;
};

/// An operator required to be self-adjoint is not (max |M - M~| > 1e-12).
class NotSelfAdjoint : public Error {
public:
    using Error::Error;
};

/// Operands live on incompatible spaces (labels or dimensions differ).
class SpaceMismatch : public Error {
public:
    using Error::Error;
};

/// A factor label is not present in the space.
class UnknownFactor : public Error {
public:
    using Error::Error;
};

/// Axis vector has (near) zero length.
class DegenerateAxis : public Error {
public:
    using Error::Error;
};

/// Bloch vector lies strictly inside the sphere; no pure state matches.
class NotPure : public Error {
public:
    using Error::Error;
};

/// Reservoir size must be even so singlet pairs exist.
class ReservoirParity : public Error {
public:
    using Error::Error;
};

/// Pointer calibration cannot map the observable's eigenvalues onto levels.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Measurement requested on a register whose pointer is not at READY.
class DeviceNotReady : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (bad script, empty grid, out-of-range knob).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Output file or directory could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qmeas
