#pragma once

#include <stdexcept>
#include <string>

namespace inflecta {

// Base class for every error this library throws deliberately.
// Each subclass corresponds to one failure mode of the public API;
// callers that want to distinguish them catch the subclass.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// algebra
struct NonConvergence : Error {
    using Error::Error;
};
struct FloatGcdUnsupported : Error {
    using Error::Error;
};

// curve
struct DegenerateCurve : Error {
    using Error::Error;
};
struct ProfileInconsistent : Error {
    using Error::Error;
};
struct DegreeMismatch : Error {
    using Error::Error;
};

// schubert
struct OddDegree : Error {
    using Error::Error;
};
struct NonIntegralFactorial : Error {
    using Error::Error;
};

// solver
struct UnsupportedChart : Error {
    using Error::Error;
};
struct BudgetExhausted : Error {
    using Error::Error;
};
struct DegenerateInstance : Error {
    using Error::Error;
};
struct PathFailure : Error {
    using Error::Error;
};

// topology
struct DegenerateDoublePoint : Error {
    using Error::Error;
};
struct GenusMismatch : Error {
    using Error::Error;
};
struct NonRealRamification : Error {
    using Error::Error;
};
struct ForbiddenDiagram : Error {
    using Error::Error;
};

// construct
struct UnclassifiedSingularity : Error {
    using Error::Error;
};
struct WeakCompatibilityViolated : Error {
    using Error::Error;
};
struct InterpolationSingular : Error {
    using Error::Error;
};
struct VerificationFailed : Error {
    using Error::Error;
};

// cli / io
struct BadInput : Error {
    using Error::Error;
};

} // namespace inflecta
