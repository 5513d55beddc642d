#pragma once

#include <stdexcept>
#include <string>

namespace atomion {

// Error hierarchy used across the library. The CLI maps ConfigError-like
// failures to exit code 2 and PhysicsError-like failures to exit code 3.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : ConfigError {
    using ConfigError::ConfigError;
};

struct IngestionError : ConfigError {
    using ConfigError::ConfigError;
};

struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFitError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct PropagationError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct BelowThresholdError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct ConvergenceError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct TopologyError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct CoverageError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct ForbiddenCrossingError : PhysicsError {
    using PhysicsError::PhysicsError;
};

} // namespace atomion
