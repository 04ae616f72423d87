#pragma once

#include <stdexcept>
#include <string>

namespace obstrukt {

// Base for every error raised by the library. Obstruction verdicts are results,
// never errors; only infrastructure or numerical failures end up here.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter or configuration rejected before any computation.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A point does not lie on the constraint set of its geometry.
class ConstraintViolation : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

// Eigensolver non-convergence, unrecoverable under-resolution, and similar.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Two eigenvalues closer than the relative gap tolerance.
class DegenerateSpectrum : public NumericalFailure {
public:
    DegenerateSpectrum(const std::string& what, double gap)
        : NumericalFailure(what, gap) {}
};

// Consecutive projections nearly orthogonal along a plaquette or loop.
class InadmissiblePlaquette : public NumericalFailure {
public:
    InadmissiblePlaquette(const std::string& what, double overlap)
        : NumericalFailure(what, overlap) {}
};

} // namespace obstrukt
