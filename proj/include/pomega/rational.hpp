#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pomega {

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Parses `p/q` or an integer. Decimal notation is rejected.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: `p/q`, or `p` when the denominator is 1.
std::string to_string(const Rational& value);

/// Approximate decimal rendering with 6 significant digits.
std::string to_decimal(const Rational& value);

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }
inline bool is_one(const Rational& value) { return value == 1; }

} // namespace pomega
