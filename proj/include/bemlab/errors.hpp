// errors.hpp - Exception types shared by all bemlab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace bemlab {

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMetric : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class DomainViolation : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class SignatureViolation : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class ZeroVector : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class FrameDegeneracy : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class IntegratorFailure : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class InvalidInitialData : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class InsufficientSamples : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class ConjugatePointInRange : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class QuadratureNearSingularity : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class NoMaximalGeodesic : public GeometryError {
public:
    using GeometryError::GeometryError;
};

class OutsideUniquenessRegion : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// A required precondition of an operation does not hold (e.g. vanishing
// initial expansion where a nonzero one is needed).
class PreconditionViolated : public GeometryError {
public:
    using GeometryError::GeometryError;
};

}  // namespace bemlab
