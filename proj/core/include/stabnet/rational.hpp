#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace stabnet {

// All weights, costs and subsidies are exact arbitrary-precision rationals.
// GMP keeps them canonical (lowest terms, positive denominator); the helpers
// below pin down the textual formats used by the JSON interfaces.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p" or "p/q" (q > 0, lowest terms not required on input).
Rational rat_parse(std::string_view text);

/// Canonical rendering: "p" for integers, "p/q" otherwise.
std::string rat_str(const Rational& r);

/// Decimal rendering with the given number of significant digits,
/// round-half-up. Used for human-readable report fields only.
std::string rat_decimal(const Rational& r, int significant_digits = 12);

/// Exact value of a binary64 (every finite double is a rational).
Rational rat_from_double(double x);

/// Parses plain or scientific decimal notation ("0.25", "1e-9") exactly.
Rational rat_parse_decimal(std::string_view text);

} // namespace stabnet
