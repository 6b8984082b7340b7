#pragma once

#include <stdexcept>
#include <string>

namespace fbmatch {

// Base class for every library error. Message text always names the
// offending input (flag, file, header field or dimension).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File container errors (FBT / PGM). BadMagic also covers malformed
// header fields such as an out-of-range PGM maxval.
struct BadMagic : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };
struct UnsupportedDtype : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

// Shape and parameter validation.
struct DimensionMismatch : Error { using Error::Error; };
struct ZeroFactor : Error { using Error::Error; };
struct EmptyWindowSet : Error { using Error::Error; };
struct InputTooLarge : Error { using Error::Error; };

// Sampling.
struct MaxRetriesExceeded : Error { using Error::Error; };
struct WindowTooLarge : Error { using Error::Error; };
struct VideoTooShort : Error { using Error::Error; };

// Metrics.
struct EmptyInput : Error { using Error::Error; };
struct BadRatio : Error { using Error::Error; };

}  // namespace fbmatch
