#pragma once

#include <stdexcept>
#include <string>

namespace rlce {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field construction / arithmetic
struct ReduciblePolynomial : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };
struct ContextMismatch : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

// matrices and codes
struct LengthMismatch : Error { using Error::Error; };
struct UnknownPosition : Error { using Error::Error; };

// GRS codes
struct InvalidSupport : Error { using Error::Error; };
struct ZeroMultiplier : Error { using Error::Error; };
struct DegreeTooLarge : Error { using Error::Error; };
struct Inconsistent : Error { using Error::Error; };

// scheme and attack
struct InvalidParams : Error { using Error::Error; };
struct NotDistinguishable : Error { using Error::Error; };
struct IntervalViolation : Error { using Error::Error; };
struct AmbiguousTwin : Error { using Error::Error; };
struct NotGrs : Error { using Error::Error; };
struct DegeneratePair : Error { using Error::Error; };
struct InconsistentPair : Error { using Error::Error; };
struct RepairFailed : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

// file I/O
struct FileFormatError : Error { using Error::Error; };

} // namespace rlce
