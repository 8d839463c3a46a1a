#pragma once

#include <stdexcept>
#include <string>

namespace hexcal {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Euler-angle extraction is non-unique (|cos beta| ~ 0).
class GimbalLockError : public Error {
public:
    using Error::Error;
};

/// Iterative forward kinematics exhausted its budget; message carries the residual.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& msg, double residual_mm)
        : Error(msg), residual_mm(residual_mm) {}
    double residual_mm;
};

/// Newton step unsolvable: leg-length Jacobian rank-deficient at an iterate.
class SingularJacobianError : public Error {
public:
    using Error::Error;
};

/// DH frame assignment ill-defined at this pose (degenerate joint axes).
class SingularPoseError : public Error {
public:
    explicit SingularPoseError(const std::string& msg, int pose_id = -1)
        : Error(msg), pose_id(pose_id) {}
    int pose_id;  // -1 when not tied to a dataset observation
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ExhaustedSamplingError : public Error {
public:
    using Error::Error;
};

/// Perturbation pushed a geometry outside its invariants.
class InvalidatedGeometryError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class ZeroBaselineError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or data file; message carries file:line context.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Inputs that violate a documented precondition (bad arity, non-finite value, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

}  // namespace hexcal
