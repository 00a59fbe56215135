#pragma once

#include <stdexcept>
#include <string>

namespace dofcsit {

/// Tolerance for treating two quality exponents (or averages) as equal.
/// Decimal input literals land within this band of their intended value.
inline constexpr double kEqualityTol = 1e-12;

/// Tolerance for aggregate balance checks (sums of per-subband quantities).
inline constexpr double kBalanceTol = 1e-9;

/// A DoF operating point (d1, d2), one coordinate per user.
struct DofPair {
    double d1 = 0.0;
    double d2 = 0.0;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LengthMismatch : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct NotBalanced : Error {
    using Error::Error;
};
struct Unbalanced : Error {
    using Error::Error;
};
struct InternalImbalance : Error {
    using Error::Error;
};
struct NegativeWeight : Error {
    using Error::Error;
};
struct OrderViolation : Error {
    using Error::Error;
};
struct ZeroVector : Error {
    using Error::Error;
};
struct GridTooSmall : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

}  // namespace dofcsit
