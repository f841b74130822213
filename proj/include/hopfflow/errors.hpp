#pragma once

#include <stdexcept>

namespace hopfflow {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUnitInput : Error { using Error::Error; };
struct NonTangentInput : Error { using Error::Error; };
struct TooCoarse : Error { using Error::Error; };
struct DegenerateCurve : Error { using Error::Error; };
struct NotEmbedded : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct SeedOffFiber : Error { using Error::Error; };
struct DegenerateMetric : Error { using Error::Error; };
struct MeshCurveMismatch : Error { using Error::Error; };
struct ResampledBetweenSamples : Error { using Error::Error; };
struct RegimeViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace hopfflow
