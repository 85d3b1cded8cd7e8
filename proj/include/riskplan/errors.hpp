#pragma once

#include <stdexcept>

namespace riskplan {

// Base class for everything the library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid construction and addressing.
struct NonPositiveDimension : Error { using Error::Error; };
struct NonDivisibleExtent : Error { using Error::Error; };
struct OutOfBounds : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// Risk models.
struct NonPositiveEnergy : Error { using Error::Error; };
struct NonPositiveHeight : Error { using Error::Error; };
struct ZeroMaximum : Error { using Error::Error; };
struct MissingDistrict : Error { using Error::Error; };

// Configuration and file formats.
struct InvalidConfig : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SchemaVersionMismatch : ParseError { using ParseError::ParseError; };

// Planning.
struct OccupiedEndpoint : Error { using Error::Error; };
struct NoPath : Error { using Error::Error; };

// Estimation-of-distribution search.
struct EmptyDominantSet : Error { using Error::Error; };
struct EmptyOpenSet : Error { using Error::Error; };

// Statistics.
struct DegenerateGroup : Error { using Error::Error; };

}  // namespace riskplan
