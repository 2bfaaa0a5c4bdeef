#pragma once

#include <stdexcept>
#include <string>

namespace ptstokes {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : Error {
    using Error::Error;
};
struct StepLimitExceeded : Error {
    using Error::Error;
};
struct Overflow : Error {
    using Error::Error;
};
struct RadiusTooSmall : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};
struct NotAnEigenvalue : Error {
    using Error::Error;
};
struct NewtonStall : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct BoundaryZero : Error {
    using Error::Error;
};
struct QuadratureNoise : Error {
    using Error::Error;
};
struct UnsupportedDegree : Error {
    using Error::Error;
};
struct DegenerateSpectrum : Error {
    using Error::Error;
};
struct TrackingLost : Error {
    using Error::Error;
};
struct SingularJacobian : Error {
    using Error::Error;
};

} // namespace ptstokes
