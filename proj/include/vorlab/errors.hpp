#pragma once

#include <stdexcept>
#include <string>

namespace vorlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient ingestion
struct IngestGap : Error { using Error::Error; };
struct IngestOrder : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct CapacityError : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };

// Numerics
struct DomainError : Error { using Error::Error; };
struct PrecisionError : Error { using Error::Error; };
struct RegimeError : Error { using Error::Error; };
struct QuadratureBudgetError : Error { using Error::Error; };
struct NoSaddleError : Error { using Error::Error; };
struct SaddlePresentError : Error { using Error::Error; };
struct SetupError : Error { using Error::Error; };
struct TruncationError : Error { using Error::Error; };
struct DegenerateApproxError : Error { using Error::Error; };

}  // namespace vorlab
