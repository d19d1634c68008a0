#pragma once

#include <stdexcept>
#include <string>

namespace ciregions {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pmf validation
struct NegativeProbability : Error { using Error::Error; };
struct MassNotOne : Error { using Error::Error; };
struct DuplicateEntry : Error { using Error::Error; };
struct ZeroMassConditioning : Error { using Error::Error; };

/// An information value fell below the floating-error clamp window; this
/// indicates a genuine bug rather than roundoff.
struct InternalConsistencyError : Error { using Error::Error; };

// channels / regions
struct SupportMismatch : Error { using Error::Error; };
struct TagMismatch : Error { using Error::Error; };

// optimization
struct OptimizerDidNotConverge : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

// bounds
struct ZeroTargetIntercept : Error { using Error::Error; };
struct NoPositiveConstraint : Error { using Error::Error; };
struct OracleNotRun : Error { using Error::Error; };
struct IdentityViolation : Error { using Error::Error; };
struct SizeGuard : Error { using Error::Error; };

struct InvalidArgument : Error { using Error::Error; };

}  // namespace ciregions
